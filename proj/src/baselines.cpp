#include "timtin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "timtin/decomposition.hpp"
#include "timtin/error.hpp"
#include "timtin/zest.hpp"

namespace timtin {

namespace {

void check_power(double P) {
  if (!(P > 1.0) || !std::isfinite(P)) throw Error(ErrorCode::InvalidPower, "P must exceed 1");
}

BaselineResult finish(std::string name, std::vector<double> rates, TxConfig tx) {
  BaselineResult out;
  out.algorithm = std::move(name);
  out.rates = std::move(rates);
  out.sum_rate = std::accumulate(out.rates.begin(), out.rates.end(), 0.0);
  out.tx = std::move(tx);
  return out;
}

TxConfig scalar_config(const std::vector<double>& r) {
  TxConfig tx;
  tx.n = 1;
  tx.beams.assign(r.size(), {CVector::Ones(1)});
  tx.powers.resize(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) tx.powers[k] = {r[k]};
  return tx;
}

/// |h_kj|^2 = P^a_kj.
Eigen::MatrixXd gain_matrix(const ChannelSpec& spec, double P) {
  return spec.alpha.unaryExpr([P](double a) { return std::pow(P, a); });
}

/// SINR-maximizing unit receive filter for every stream of `tx` under the
/// gains g (rows = receivers). The channel is a scalar per link, so phases
/// drop out of the covariances.
std::vector<std::vector<CVector>> max_sinr_filters(const Eigen::MatrixXd& g, const TxConfig& tx,
                                                   double P) {
  const int K = tx.users();
  const int n = tx.n;
  std::vector<std::vector<CVector>> filters(K);
  for (int k = 0; k < K; ++k) {
    CMatrix total = CMatrix::Identity(n, n);
    for (int j = 0; j < K; ++j) {
      for (int s = 0; s < tx.streams(j); ++s) {
        const double w = g(k, j) * std::pow(P, tx.powers[j][s]);
        total += w * (tx.beams[j][s] * tx.beams[j][s].adjoint());
      }
    }
    for (int l = 0; l < tx.streams(k); ++l) {
      const CVector& v = tx.beams[k][l];
      const double w = g(k, k) * std::pow(P, tx.powers[k][l]);
      const CMatrix others = total - w * (v * v.adjoint());
      CVector u = others.ldlt().solve(v);
      auto unit = normalized(u, 1e-300);
      filters[k].push_back(unit ? *unit : v);
    }
  }
  return filters;
}

}  // namespace

std::vector<double> scalar_tin_rates(const ChannelSpec& spec, const std::vector<double>& r,
                                     double P) {
  check_power(P);
  if (static_cast<int>(r.size()) != spec.K) {
    throw Error(ErrorCode::DimensionMismatch, "need one power exponent per user");
  }
  std::vector<double> rates(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    double noise = 1.0;
    for (int j = 0; j < spec.K; ++j) {
      if (j != k) noise += std::pow(P, spec.alpha(k, j) + r[j]);
    }
    rates[k] = std::log2(1.0 + std::pow(P, spec.alpha(k, k) + r[k]) / noise);
  }
  return rates;
}

BaselineResult tdma_rates(const ChannelSpec& spec, double P) {
  validate(spec);
  check_power(P);
  std::vector<double> rates(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    rates[k] = std::log2(1.0 + std::pow(P, spec.alpha(k, k))) / spec.K;
  }
  BaselineResult out = finish("tdma", std::move(rates), scalar_config(std::vector<double>(spec.K, 0.0)));
  out.iterations = 1;
  out.converged = true;
  out.trace = {out.sum_rate};
  return out;
}

BaselineResult full_power_rates(const ChannelSpec& spec, double P) {
  validate(spec);
  check_power(P);
  TxConfig tx = scalar_config(std::vector<double>(spec.K, 0.0));
  BaselineResult out = finish("full_power", finite_snr_rates(spec, tx, P), tx);
  out.iterations = 1;
  out.converged = true;
  out.trace = {out.sum_rate};
  return out;
}

BaselineResult max_sinr(const ChannelSpec& spec, int n, const std::vector<int>& b, double P,
                        std::uint64_t seed, const IterativeOptions& opts,
                        const std::optional<TxConfig>& init) {
  validate(spec);
  check_power(P);
  if (!spec.theta) throw Error(ErrorCode::MissingPhases, "Max-SINR is evaluated with phases");
  if (opts.max_iter < 1) throw Error(ErrorCode::InvalidRange, "max_iter must be >= 1");

  TxConfig tx = init ? *init : zest_init(spec, n, b, seed).tx;
  validate(tx);
  if (tx.users() != spec.K) throw Error(ErrorCode::DimensionMismatch, "initial beams per user");
  for (int k = 0; k < tx.users(); ++k) {
    const double split = tx.streams(k) > 0 ? -std::log(tx.streams(k)) / std::log(P) : 0.0;
    std::fill(tx.powers[k].begin(), tx.powers[k].end(), split);
  }

  const Eigen::MatrixXd g = gain_matrix(spec, P);
  const Eigen::MatrixXd g_rev = g.transpose();
  std::vector<double> trace;
  bool converged = false;
  double last = 0.0;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    TxConfig reverse = tx;
    reverse.beams = max_sinr_filters(g, tx, P);
    tx.beams = max_sinr_filters(g_rev, reverse, P);
    const auto rates = finite_snr_rates(spec, tx, P);
    const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
    trace.push_back(sum);
    if (iter > 0 && std::abs(sum - last) < opts.tol) {
      converged = true;
      ++iter;
      break;
    }
    last = sum;
  }
  BaselineResult out = finish("max_sinr", finite_snr_rates(spec, tx, P), tx);
  out.iterations = iter;
  out.converged = converged;
  out.trace = std::move(trace);
  return out;
}

BaselineResult sapc(const ChannelSpec& spec, double P, const IterativeOptions& opts,
                    const std::optional<std::vector<double>>& init_r) {
  validate(spec);
  check_power(P);
  if (opts.max_iter < 1) throw Error(ErrorCode::InvalidRange, "max_iter must be >= 1");
  const int K = spec.K;
  const double lnP = std::log(P);
  // Log-power floor: two decades of exponent below the unit constraint.
  const double y_min = -2.0 * lnP;
  const Eigen::MatrixXd g = gain_matrix(spec, P);

  std::vector<double> y(K, 0.0);
  if (init_r) {
    if (static_cast<int>(init_r->size()) != K) {
      throw Error(ErrorCode::DimensionMismatch, "need one initial power per user");
    }
    for (int k = 0; k < K; ++k) y[k] = std::clamp((*init_r)[k] * lnP, y_min, 0.0);
  }

  const auto denominators = [&](const std::vector<double>& yy) {
    std::vector<double> den(K, 1.0);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        if (j != k) den[k] += g(k, j) * std::exp(yy[j]);
      }
    }
    return den;
  };
  const auto sinr = [&](const std::vector<double>& yy) {
    const auto den = denominators(yy);
    std::vector<double> s(K);
    for (int k = 0; k < K; ++k) s[k] = g(k, k) * std::exp(yy[k]) / den[k];
    return s;
  };
  const auto sum_rate = [&](const std::vector<double>& yy) {
    double total = 0.0;
    for (double s : sinr(yy)) total += std::log2(1.0 + s);
    return total;
  };

  std::vector<double> trace;
  bool converged = false;
  double last = sum_rate(y);
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const auto s0 = sinr(y);
    std::vector<double> a(K);
    for (int k = 0; k < K; ++k) a[k] = s0[k] / (1.0 + s0[k]);
    const auto surrogate = [&](const std::vector<double>& yy) {
      const auto den = denominators(yy);
      double f = 0.0;
      for (int k = 0; k < K; ++k) f += a[k] * (yy[k] - std::log(den[k]));
      return f;
    };
    // Projected gradient ascent on the concave surrogate.
    for (int inner = 0; inner < 200; ++inner) {
      const auto den = denominators(y);
      std::vector<double> grad(a);
      for (int m = 0; m < K; ++m) {
        for (int k = 0; k < K; ++k) {
          if (k != m) grad[m] -= a[k] * g(k, m) * std::exp(y[m]) / den[k];
        }
      }
      const double f0 = surrogate(y);
      double step = 1.0;
      std::vector<double> next(K);
      bool moved = false;
      for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
        double gain = 0.0;
        for (int k = 0; k < K; ++k) {
          next[k] = std::clamp(y[k] + step * grad[k], y_min, 0.0);
          gain += grad[k] * (next[k] - y[k]);
        }
        if (gain <= 1e-14) break;
        if (surrogate(next) >= f0 + 1e-4 * gain) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      double change = 0.0;
      for (int k = 0; k < K; ++k) change = std::max(change, std::abs(next[k] - y[k]));
      y = next;
      if (change < 1e-10) break;
    }
    const double now = sum_rate(y);
    trace.push_back(now);
    if (std::abs(now - last) < opts.tol) {
      converged = true;
      ++iter;
      break;
    }
    last = now;
  }
  std::vector<double> r(K);
  for (int k = 0; k < K; ++k) r[k] = y[k] / lnP;
  BaselineResult out = finish("sapc", scalar_tin_rates(spec, r, P), scalar_config(r));
  out.iterations = iter;
  out.converged = converged;
  out.trace = std::move(trace);
  return out;
}

IgpcResult igpc(const ChannelSpec& spec, int max_iter, double tol) {
  validate(spec);
  if (max_iter < 1) throw Error(ErrorCode::InvalidRange, "max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::TolerancePositive, "tol must be positive");
  const int K = spec.K;
  const ChannelSpec recip = reciprocal(spec);
  const auto dual = [K](const ChannelSpec& c, const std::vector<double>& r) {
    std::vector<double> out(K);
    for (int k = 0; k < K; ++k) {
      double level = 0.0;
      for (int j = 0; j < K; ++j) {
        if (j != k && c.alpha(k, j) > 0.0) level = std::max(level, c.alpha(k, j) + r[j]);
      }
      out[k] = -level;
    }
    return out;
  };

  IgpcResult out;
  std::vector<double> r(K, 0.0);
  out.trace.push_back(tin_gdof(spec, r));
  for (int iter = 0; iter < max_iter; ++iter) {
    const std::vector<double> r_rev = dual(spec, r);
    out.trace.push_back(tin_gdof(recip, r_rev));
    std::vector<double> r_next = dual(recip, r_rev);
    out.trace.push_back(tin_gdof(spec, r_next));
    out.iterations = iter + 1;
    const double delta = out.trace.back().sum() - out.trace[out.trace.size() - 3].sum();
    r = std::move(r_next);
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  out.r = r;
  out.d = tin_gdof(spec, r);
  return out;
}

}  // namespace timtin
