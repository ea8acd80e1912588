#include "timtin/zest.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "timtin/error.hpp"
#include "timtin/parallel.hpp"

namespace timtin {

namespace {

/// Original/reciprocal role swap: beams become receivers and vice versa.
TxConfig swapped_tx(const TxConfig& tx, const RxConfig& rx, std::vector<double> flat_powers) {
  TxConfig out;
  out.n = tx.n;
  out.beams = rx.filters;
  out.powers.resize(tx.users());
  for (int k = 0; k < tx.users(); ++k) out.powers[k].resize(tx.streams(k));
  assign_powers(out, flat_powers);
  return out;
}

RxConfig swapped_rx(const TxConfig& tx, ScOrder order) {
  RxConfig rx;
  rx.filters = tx.beams;
  rx.sc_order = make_sc_order(tx, order);
  return rx;
}

}  // namespace

std::vector<double> flatten_powers(const TxConfig& tx) {
  std::vector<double> flat;
  flat.reserve(tx.total_streams());
  for (const auto& user : tx.powers) flat.insert(flat.end(), user.begin(), user.end());
  return flat;
}

void assign_powers(TxConfig& tx, const std::vector<double>& flat) {
  std::size_t idx = 0;
  for (auto& user : tx.powers) {
    for (double& r : user) r = flat.at(idx++);
  }
}

ZestState zest_init(const ChannelSpec& spec, int n, const std::vector<int>& b,
                    std::uint64_t seed) {
  validate(spec);
  if (n < 1) throw Error(ErrorCode::InvalidStreamCount, "n must be positive");
  if (static_cast<int>(b.size()) != spec.K) {
    throw Error(ErrorCode::InvalidStreamCount, "need one stream count per user");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TxConfig tx;
  tx.n = n;
  tx.beams.resize(spec.K);
  tx.powers.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    if (b[k] < 0 || b[k] > n) {
      throw Error(ErrorCode::InvalidStreamCount,
                  "b_" + std::to_string(k) + " must lie in [0, n]");
    }
    for (int l = 0; l < b[k]; ++l) {
      CVector v(n);
      std::optional<CVector> unit;
      while (!unit) {
        for (int i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
        unit = normalized(v, 1e-8);
      }
      tx.beams[k].push_back(*unit);
      tx.powers[k].push_back(-std::generate_canonical<double, 53>(rng));
    }
  }
  return zest_state_from(spec, std::move(tx));
}

ZestState zest_state_from(const ChannelSpec& spec, TxConfig tx) {
  validate(tx);
  ZestState state;
  state.rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
  state.tx = std::move(tx);
  return state;
}

EffectiveStrengthMatrix effective_strengths(const ChannelSpec& spec, const TxConfig& tx,
                                            const RxConfig& rx, double tol) {
  const int B = tx.total_streams();
  EffectiveStrengthMatrix g;
  g.G = Eigen::MatrixXd::Zero(B, B);
  for (int k = 0; k < tx.users(); ++k) {
    for (int s = 0; s < tx.streams(k); ++s) {
      g.user_of.push_back(k);
      g.stream_of.push_back(s);
    }
  }
  for (int i = 0; i < B; ++i) {
    const CVector& u = rx.filters[g.user_of[i]][g.stream_of[i]];
    for (int j = 0; j < B; ++j) {
      const CVector& v = tx.beams[g.user_of[j]][g.stream_of[j]];
      if (std::abs(u.dot(v)) > tol) g.G(i, j) = spec.alpha(g.user_of[i], g.user_of[j]);
    }
  }
  // Streams decoded earlier are already subtracted from later ones.
  for (int k = 0; k < tx.users(); ++k) {
    const auto& order = rx.sc_order[k];
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t c = a + 1; c < order.size(); ++c) {
        g.G(tx.flat_index(k, order[c]), tx.flat_index(k, order[a])) = 0.0;
      }
    }
  }
  return g;
}

std::vector<double> dual_power_update(const EffectiveStrengthMatrix& g,
                                      const std::vector<double>& r) {
  const auto B = static_cast<int>(r.size());
  std::vector<double> out(B);
  for (int i = 0; i < B; ++i) {
    double level = 0.0;
    for (int j = 0; j < B; ++j) {
      if (j != i) level = std::max(level, g.G(i, j) + r[j]);
    }
    out[i] = -level;
  }
  return out;
}

std::vector<double> stream_tin_gdof(const EffectiveStrengthMatrix& g,
                                    const std::vector<double>& r) {
  const auto B = static_cast<int>(r.size());
  std::vector<double> d(B, 0.0);
  for (int i = 0; i < B; ++i) {
    double level = 0.0;
    for (int j = 0; j < B; ++j) {
      if (j != i) level = std::max(level, g.G(i, j) + r[j]);
    }
    if (g.G(i, i) > 0.0) d[i] = std::max(0.0, g.G(i, i) + r[i] - level);
  }
  return d;
}

ZestState zest_iterate(const ZestState& state, const ChannelSpec& spec) {
  const ChannelSpec recip = reciprocal(spec);
  ZestIteration it;
  it.m = state.m;

  // Step 2: optimal receivers in the original channel.
  const TxConfig& tx_fwd = state.tx;
  const RxConfig rx_fwd = zfsc_receivers(spec, tx_fwd, make_sc_order(tx_fwd, ScOrder::Lexicographic));
  it.fwd = gdof_of_config(spec, tx_fwd);
  it.fallbacks += rx_fwd.fallback_count;

  // Step 3: reverse direction with dual powers, receivers left as given.
  const auto g_fwd = effective_strengths(spec, tx_fwd, rx_fwd);
  TxConfig tx_rev = swapped_tx(tx_fwd, rx_fwd, dual_power_update(g_fwd, flatten_powers(tx_fwd)));
  it.switch_rev = stream_gdof(recip, tx_rev, swapped_rx(tx_fwd, ScOrder::ReverseLexicographic)).per_user;

  // Step 4: optimal receivers in the reciprocal channel.
  const RxConfig rx_rev = zfsc_receivers(recip, tx_rev, make_sc_order(tx_rev, ScOrder::Lexicographic));
  it.rev = gdof_of_config(recip, tx_rev);
  it.fallbacks += rx_rev.fallback_count;

  // Step 5: back to the original channel.
  const auto g_rev = effective_strengths(recip, tx_rev, rx_rev);
  ZestState next;
  next.direction = Direction::Original;
  next.m = state.m + 1;
  next.tx = swapped_tx(tx_rev, rx_rev, dual_power_update(g_rev, flatten_powers(tx_rev)));
  next.rx = swapped_rx(tx_rev, ScOrder::ReverseLexicographic);
  it.switch_fwd = stream_gdof(spec, next.tx, next.rx).per_user;

  next.trace = state.trace;
  next.trace.iterations.push_back(std::move(it));
  return next;
}

ZestResult run_zest_from(const ChannelSpec& spec, ZestState state, const ZestOptions& opts) {
  if (opts.max_iter < 1) throw Error(ErrorCode::InvalidRange, "max_iter must be >= 1");
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::TolerancePositive, "tol must be positive");
  ZestResult result;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    state = zest_iterate(state, spec);
    const auto& its = state.trace.iterations;
    if (its.size() >= 2) {
      const double delta = its.back().fwd.sum() - its[its.size() - 2].fwd.sum();
      if (delta < opts.tol) {
        result.converged = true;
        break;
      }
    }
  }
  result.tx = state.tx;
  result.rx = zfsc_receivers(spec, state.tx, make_sc_order(state.tx, ScOrder::Lexicographic));
  result.gdof = gdof_of_config(spec, state.tx);
  result.trace = std::move(state.trace);
  return result;
}

ZestResult run_zest(const ChannelSpec& spec, int n, const std::vector<int>& b,
                    std::uint64_t seed, const ZestOptions& opts) {
  ZestResult r = run_zest_from(spec, zest_init(spec, n, b, seed), opts);
  r.seed = seed;
  return r;
}

MultiInitResult multi_init_best(const ChannelSpec& spec, int n, const std::vector<int>& b,
                                const std::vector<std::uint64_t>& seeds,
                                const ZestOptions& opts, std::optional<double> P,
                                Selection selection, Execution exec) {
  if (seeds.empty()) throw Error(ErrorCode::EmptySeedList, "need at least one seed");
  if (selection == Selection::SumRate && !P) {
    throw Error(ErrorCode::InvalidPower, "rate-based selection needs a power");
  }
  MultiInitResult out;
  out.runs.resize(seeds.size());
  if (P) out.sum_rates.assign(seeds.size(), 0.0);
  for_each_index(seeds.size(), exec, [&](std::size_t i) {
    out.runs[i] = run_zest(spec, n, b, seeds[i], opts);
    if (P) {
      const auto rates = finite_snr_rates(spec, out.runs[i].tx, *P);
      for (double r : rates) out.sum_rates[i] += r;
    }
  });
  constexpr double kTie = 1e-9;
  for (std::size_t i = 1; i < out.runs.size(); ++i) {
    const double gi = out.runs[i].gdof.sum();
    const double gb = out.runs[out.best].gdof.sum();
    bool better = false;
    if (selection == Selection::SumRate) {
      better = out.sum_rates[i] > out.sum_rates[out.best];
    } else if (gi > gb + kTie) {
      better = true;
    } else if (gi > gb - kTie && P) {
      better = out.sum_rates[i] > out.sum_rates[out.best];
    }
    if (better) out.best = i;
  }
  return out;
}

void write_trace_csv(std::ostream& os, const GdofTrace& trace) {
  const std::size_t K = trace.iterations.empty() ? 0 : trace.iterations.front().fwd.size();
  os << "iter,sum_fwd,sum_switch_rev,sum_rev,sum_switch_fwd";
  for (std::size_t k = 0; k < K; ++k) os << ",d_" << (k + 1);
  os << '\n';
  for (const auto& it : trace.iterations) {
    os << it.m << ',' << it.fwd.sum() << ',' << it.switch_rev.sum() << ',' << it.rev.sum()
       << ',' << it.switch_fwd.sum();
    for (double d : it.fwd.d) os << ',' << d;
    os << '\n';
  }
}

}  // namespace timtin
