#include "timtin/gdof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "timtin/error.hpp"

namespace timtin {

namespace {

/// One stream as seen at a particular receiver.
struct Arrival {
  int user;
  int stream;
  double kappa;
  const CVector* v;
};

/// Streams received by user k above the noise floor, in (exponent desc, user,
/// stream) order.
std::vector<Arrival> arrivals_at(const ChannelSpec& spec, const TxConfig& tx, int k) {
  std::vector<Arrival> out;
  for (int j = 0; j < tx.users(); ++j) {
    for (int s = 0; s < tx.streams(j); ++s) {
      const double kappa = tx.powers[j][s] + spec.alpha(k, j);
      if (kappa > kNoiseFloor) out.push_back({j, s, kappa, &tx.beams[j][s]});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Arrival& a, const Arrival& b) { return a.kappa > b.kappa; });
  return out;
}

/// Span scan over an already ordered list; returns positions that were kept.
std::vector<std::size_t> span_scan(const std::vector<Arrival>& list, int n, double& sum) {
  SpanBasis basis(static_cast<std::size_t>(n));
  std::vector<std::size_t> kept;
  sum = 0.0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (basis.try_add(*list[i].v, kSpanTol)) {
      kept.push_back(i);
      sum += list[i].kappa;
    }
  }
  return kept;
}

void check_dims(const ChannelSpec& spec, const TxConfig& tx) {
  if (tx.users() != spec.K) {
    std::ostringstream os;
    os << "configuration has " << tx.users() << " users, channel has " << spec.K;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (static_cast<int>(tx.powers.size()) != tx.users()) {
    throw Error(ErrorCode::DimensionMismatch, "power list does not match user count");
  }
  for (int k = 0; k < tx.users(); ++k) {
    if (tx.powers[k].size() != tx.beams[k].size()) {
      throw Error(ErrorCode::DimensionMismatch, "power/beam count differ for a user");
    }
    for (const auto& v : tx.beams[k]) {
      if (v.size() != tx.n) throw Error(ErrorCode::DimensionMismatch, "beam length != n");
    }
  }
}

/// Receive vector for a stream that carries no GDoF. If the interference does
/// not fill the space, project onto what it leaves free. Otherwise null the
/// strongest interferers greedily (at most n-1 directions, never swallowing
/// the own beam) and keep the normalized residual of the own beam.
CVector fallback_filter(const std::vector<Arrival>& interference, const CVector& own, int n) {
  SpanBasis span(static_cast<std::size_t>(n));
  for (const auto& a : interference) span.try_add(*a.v, kSpanTol);
  if (static_cast<int>(span.rank()) < n) {
    CVector best;
    double best_norm = -1.0;
    for (int i = 0; i < n; ++i) {
      CVector e = CVector::Zero(n);
      e(i) = 1.0;
      CVector r = span.residual(e);
      if (r.norm() > best_norm + 1e-12) {
        best_norm = r.norm();
        best = r;
      }
    }
    return best / best_norm;
  }
  SpanBasis nulled(static_cast<std::size_t>(n));
  for (const auto& a : interference) {
    if (static_cast<int>(nulled.rank()) >= n - 1) break;
    SpanBasis trial = nulled;
    if (!trial.try_add(*a.v, kSpanTol)) continue;
    if (trial.residual(own).norm() > kSpanTol * own.norm()) nulled = std::move(trial);
  }
  if (auto u = normalized(nulled.residual(own), kSpanTol)) return *u;
  return own / own.norm();
}

}  // namespace

int TxConfig::total_streams() const {
  int b = 0;
  for (const auto& user : beams) b += static_cast<int>(user.size());
  return b;
}

int TxConfig::flat_index(int user, int stream) const {
  int idx = 0;
  for (int k = 0; k < user; ++k) idx += streams(k);
  return idx + stream;
}

double GdofTuple::sum() const { return std::accumulate(d.begin(), d.end(), 0.0); }

void validate(const TxConfig& tx) {
  if (tx.n < 1) throw Error(ErrorCode::InvalidStreamCount, "n must be positive");
  if (tx.powers.size() != tx.beams.size()) {
    throw Error(ErrorCode::DimensionMismatch, "power list does not match user count");
  }
  for (int k = 0; k < tx.users(); ++k) {
    if (tx.streams(k) > tx.n) {
      throw Error(ErrorCode::InvalidStreamCount,
                  "user " + std::to_string(k) + " has more streams than channel uses");
    }
    if (tx.powers[k].size() != tx.beams[k].size()) {
      throw Error(ErrorCode::DimensionMismatch, "power/beam count differ for a user");
    }
    for (int s = 0; s < tx.streams(k); ++s) {
      const auto& v = tx.beams[k][s];
      if (v.size() != tx.n) throw Error(ErrorCode::DimensionMismatch, "beam length != n");
      if (std::abs(v.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::DimensionMismatch, "beamformer is not unit norm");
      }
      if (!(tx.powers[k][s] <= 0.0)) {
        throw Error(ErrorCode::InvalidPower, "power exponents must be <= 0");
      }
    }
  }
}

void validate(const RxConfig& rx, const TxConfig& tx) {
  if (static_cast<int>(rx.filters.size()) != tx.users() ||
      static_cast<int>(rx.sc_order.size()) != tx.users()) {
    throw Error(ErrorCode::DimensionMismatch, "receiver user count differs");
  }
  for (int k = 0; k < tx.users(); ++k) {
    if (static_cast<int>(rx.filters[k].size()) != tx.streams(k)) {
      throw Error(ErrorCode::DimensionMismatch, "receiver stream count differs");
    }
    for (const auto& u : rx.filters[k]) {
      if (u.size() != tx.n) throw Error(ErrorCode::DimensionMismatch, "filter length != n");
      if (std::abs(u.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::DimensionMismatch, "receive vector is not unit norm");
      }
    }
    std::vector<int> perm = rx.sc_order[k];
    std::sort(perm.begin(), perm.end());
    for (int s = 0; s < static_cast<int>(perm.size()); ++s) {
      if (perm[s] != s || perm.size() != rx.filters[k].size()) {
        throw Error(ErrorCode::DimensionMismatch, "sc_order is not a permutation");
      }
    }
  }
}

std::vector<std::vector<int>> make_sc_order(const TxConfig& tx, ScOrder order) {
  std::vector<std::vector<int>> out(tx.users());
  for (int k = 0; k < tx.users(); ++k) {
    out[k].resize(tx.streams(k));
    std::iota(out[k].begin(), out[k].end(), 0);
    if (order == ScOrder::ReverseLexicographic) std::reverse(out[k].begin(), out[k].end());
  }
  return out;
}

DominantSum dominant_exponent_sum(const ExponentSet& set, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::TolerancePositive, "tolerance must be positive");
  if (set.vectors.size() != set.exponents.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector and exponent lists differ in length");
  }
  DominantSum out;
  if (set.vectors.empty()) return out;
  std::vector<std::size_t> order(set.vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.exponents[a] > set.exponents[b];
  });
  const auto dim = static_cast<std::size_t>(set.vectors.front().size());
  SpanBasis basis(dim);
  for (std::size_t idx : order) {
    if (set.exponents[idx] < 0.0) {
      throw Error(ErrorCode::NegativeExponent, "exponents must be non-negative");
    }
    if (set.vectors[idx].size() != static_cast<Eigen::Index>(dim)) {
      throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
    }
    if (set.exponents[idx] <= kNoiseFloor) continue;
    if (basis.try_add(set.vectors[idx], tol)) {
      out.selected.push_back(idx);
      out.sum += set.exponents[idx];
    }
  }
  out.gamma = static_cast<int>(out.selected.size());
  return out;
}

GdofTuple gdof_of_config(const ChannelSpec& spec, const TxConfig& tx) {
  check_dims(spec, tx);
  GdofTuple out;
  out.d.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    const auto all = arrivals_at(spec, tx, k);
    std::vector<Arrival> interference;
    std::copy_if(all.begin(), all.end(), std::back_inserter(interference),
                 [k](const Arrival& a) { return a.user != k; });
    double with_desired = 0.0;
    double without = 0.0;
    span_scan(all, tx.n, with_desired);
    span_scan(interference, tx.n, without);
    out.d[k] = std::max(0.0, (with_desired - without) / tx.n);
  }
  return out;
}

RxConfig zfsc_receivers(const ChannelSpec& spec, const TxConfig& tx,
                        const std::vector<std::vector<int>>& sc_order) {
  check_dims(spec, tx);
  RxConfig rx;
  rx.sc_order = sc_order;
  rx.filters.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    rx.filters[k].resize(tx.streams(k));
    const auto received = arrivals_at(spec, tx, k);
    std::vector<bool> cancelled(tx.streams(k), false);
    for (int l : sc_order[k]) {
      // Remaining signal: everything except own streams already decoded.
      std::vector<Arrival> remaining;
      for (const auto& a : received) {
        if (a.user == k && cancelled[a.stream]) continue;
        remaining.push_back(a);
      }
      cancelled[l] = true;

      auto own_it = std::find_if(remaining.begin(), remaining.end(), [&](const Arrival& a) {
        return a.user == k && a.stream == l;
      });
      std::vector<Arrival> interference;
      for (const auto& a : remaining) {
        if (!(a.user == k && a.stream == l)) interference.push_back(a);
      }
      const CVector& own = tx.beams[k][l];
      if (own_it == remaining.end()) {
        rx.filters[k][l] = fallback_filter(interference, own, tx.n);
        ++rx.fallback_count;
        continue;
      }

      double sum = 0.0;
      const auto kept = span_scan(remaining, tx.n, sum);
      const auto own_pos = static_cast<std::size_t>(own_it - remaining.begin());
      if (std::find(kept.begin(), kept.end(), own_pos) == kept.end()) {
        rx.filters[k][l] = fallback_filter(interference, own, tx.n);
        ++rx.fallback_count;
        continue;
      }
      // Null the span of the other kept vectors; what survives is weaker than
      // every nulled direction, so the stream sees its optimal GDoF.
      SpanBasis nulled(static_cast<std::size_t>(tx.n));
      for (std::size_t pos : kept) {
        if (pos != own_pos) nulled.try_add(*remaining[pos].v, kSpanTol);
      }
      auto u = normalized(nulled.residual(own));
      if (!u) {
        rx.filters[k][l] = fallback_filter(interference, own, tx.n);
        ++rx.fallback_count;
        continue;
      }
      rx.filters[k][l] = *u;
    }
  }
  return rx;
}

StreamGdof stream_gdof(const ChannelSpec& spec, const TxConfig& tx, const RxConfig& rx,
                       double tol) {
  check_dims(spec, tx);
  validate(rx, tx);
  StreamGdof out;
  out.per_stream.resize(spec.K);
  out.per_user.d.assign(spec.K, 0.0);
  for (int k = 0; k < spec.K; ++k) {
    out.per_stream[k].assign(tx.streams(k), 0.0);
    std::vector<bool> cancelled(tx.streams(k), false);
    for (int l : rx.sc_order[k]) {
      const CVector& u = rx.filters[k][l];
      const double own = tx.powers[k][l] + spec.alpha(k, k);
      double strongest = 0.0;
      for (int j = 0; j < spec.K; ++j) {
        for (int s = 0; s < tx.streams(j); ++s) {
          if (j == k && (s == l || cancelled[s])) continue;
          if (std::abs(u.dot(tx.beams[j][s])) <= tol) continue;
          strongest = std::max(strongest, tx.powers[j][s] + spec.alpha(k, j));
        }
      }
      cancelled[l] = true;
      if (std::abs(u.dot(tx.beams[k][l])) <= tol) continue;
      const double d = std::max(0.0, own - strongest) / tx.n;
      out.per_stream[k][l] = d;
      out.per_user.d[k] += d;
    }
  }
  return out;
}

std::vector<double> finite_snr_rates(const ChannelSpec& spec, const TxConfig& tx, double P) {
  check_dims(spec, tx);
  if (!spec.theta) throw Error(ErrorCode::MissingPhases, "finite-SNR rates need phases");
  if (!(P > 1.0)) throw Error(ErrorCode::InvalidPower, "P must exceed 1");
  const int n = tx.n;
  std::vector<double> rates(spec.K, 0.0);
  for (int k = 0; k < spec.K; ++k) {
    CMatrix q_desired = CMatrix::Zero(n, n);
    CMatrix q_noise = CMatrix::Identity(n, n);
    for (int i = 0; i < spec.K; ++i) {
      const cplx gain = std::polar(std::sqrt(std::pow(P, spec.alpha(k, i))), (*spec.theta)(k, i));
      for (int l = 0; l < tx.streams(i); ++l) {
        const double p = std::pow(P, tx.powers[i][l]);
        const CVector h = gain * tx.beams[i][l];
        CMatrix term = p * (h * h.adjoint());
        if (i == k) {
          q_desired += term;
        } else {
          q_noise += term;
        }
      }
    }
    const double r = (log2_det_hpd(q_desired + q_noise) - log2_det_hpd(q_noise)) / n;
    rates[k] = std::max(0.0, r);
  }
  return rates;
}

}  // namespace timtin
