#pragma once

// Worked-example channels and configurations shared by the unit tests and
// the acceptance runner.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "timtin/channel.hpp"
#include "timtin/decomposition.hpp"
#include "timtin/gdof.hpp"

namespace fixtures {

using timtin::ChannelSpec;
using timtin::cplx;
using timtin::CVector;
using timtin::TxConfig;

inline CVector vec2(cplx a, cplx b) {
  CVector v(2);
  v << a, b;
  return v.normalized();
}

inline ChannelSpec from_links(int K, const std::vector<std::pair<std::pair<int, int>, double>>& links) {
  ChannelSpec s;
  s.K = K;
  s.alpha = Eigen::MatrixXd::Identity(K, K);
  for (const auto& [l, a] : links) s.alpha(l.first, l.second) = a;
  return s;
}

// Five users, unit links rx<-tx: 0<-2, 0<-3, 1<-2, 1<-3, 2<-0, 2<-4, 3<-0, 3<-4, 4<-1.
inline ChannelSpec walkthrough_channel() {
  return from_links(5, {{{0, 2}, 1}, {{0, 3}, 1}, {{1, 2}, 1}, {{1, 3}, 1}, {{2, 0}, 1},
                        {{2, 4}, 1}, {{3, 0}, 1}, {{3, 4}, 1}, {{4, 1}, 1}});
}

// Step-1 state: generic pairwise-independent beams, powers (-.1, -.3, -.7, -.4, -.2).
inline TxConfig walkthrough_init() {
  TxConfig tx;
  tx.n = 2;
  const cplx i(0, 1);
  tx.beams = {{vec2(1, 0)}, {vec2(0, 1)}, {vec2(1, 1)}, {vec2(1, i)}, {vec2(1, 2.0 * i)}};
  tx.powers = {{-0.1}, {-0.3}, {-0.7}, {-0.4}, {-0.2}};
  return tx;
}

// Decomposition example scheme: users 2 and 5 (one-based) share a direction,
// the other directions are pairwise independent.
inline TxConfig example_scheme() {
  TxConfig tx;
  tx.n = 2;
  tx.beams = {{vec2(1, 0)}, {vec2(0, 1)}, {vec2(1, 1)}, {vec2(1, -1)}, {vec2(0, 1)}};
  tx.powers = {{0.0}, {-0.1}, {-0.2}, {-0.3}, {-0.4}};
  return tx;
}

// Three users over two channel uses with 2, 2 and 1 streams. At receiver 1
// the five streams arrive at 1.0, 0.9 (own), 0.7 (user 3), 0.5 and 0.4
// (user 2), and user 2's first beam is aligned with user 3's.
struct TwoStream {
  ChannelSpec spec;
  TxConfig tx;
};

inline TwoStream two_stream() {
  TwoStream f;
  f.spec = from_links(3, {{{0, 1}, 0.5}, {{0, 2}, 0.7}, {{1, 0}, 0.3}, {{2, 1}, 0.2}});
  f.tx.n = 2;
  f.tx.beams = {{vec2(1, 0), vec2(0, 1)}, {vec2(1, 1), vec2(1, -2)}, {vec2(1, 1)}};
  f.tx.powers = {{0.0, -0.1}, {0.0, -0.1}, {0.0}};
  return f;
}

inline CVector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random spec: direct links 1, cross links uniform in [0, max_cross].
inline ChannelSpec random_spec(std::mt19937_64& rng, int K, double max_cross, bool phases = false) {
  ChannelSpec s;
  s.K = K;
  s.alpha = Eigen::MatrixXd::Identity(K, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j)
      if (k != j) s.alpha(k, j) = uniform(rng, 0.0, max_cross);
  if (phases) {
    Eigen::MatrixXd th(K, K);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < K; ++j) th(k, j) = uniform(rng, 0.0, 2 * M_PI);
    s.theta = th;
  }
  return s;
}

inline TxConfig random_tx(std::mt19937_64& rng, int K, int n, int max_b) {
  TxConfig tx;
  tx.n = n;
  tx.beams.resize(K);
  tx.powers.resize(K);
  for (int k = 0; k < K; ++k) {
    const int b = uniform_int(rng, 1, std::min(n, max_b));
    for (int l = 0; l < b; ++l) {
      tx.beams[k].push_back(random_unit(rng, n));
      tx.powers[k].push_back(uniform(rng, -1.0, 0.0));
    }
  }
  return tx;
}

// Neighbors at offset 1 strong in (t, 1], every other cross link in [0, t].
inline ChannelSpec random_two_level(std::mt19937_64& rng, int K, double t,
                                   timtin::NeighborLayout layout) {
  ChannelSpec s;
  s.K = K;
  s.alpha = Eigen::MatrixXd::Identity(K, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j) {
      if (k == j) continue;
      const int d = timtin::neighbor_distance(k, j, K, layout);
      s.alpha(k, j) = d == 1 ? uniform(rng, t + 0.05, 1.0) : uniform(rng, 0.0, t);
    }
  return s;
}

// Brute-force symmetric TIN value over r in {0, -step, ..., -1}^K.
inline double tin_grid_symmetric(const ChannelSpec& spec, double step = 0.01) {
  const int K = spec.K;
  const int levels = static_cast<int>(std::lround(1.0 / step)) + 1;
  std::vector<int> idx(K, 0);
  std::vector<double> r(K, 0.0);
  double best = 0.0;
  while (true) {
    for (int k = 0; k < K; ++k) r[k] = -idx[k] * step;
    const auto d = timtin::tin_gdof(spec, r);
    double m = d[0];
    for (std::size_t k = 1; k < d.size(); ++k) m = std::min(m, d[k]);
    best = std::max(best, m);
    int k = 0;
    while (k < K && ++idx[k] == levels) idx[k++] = 0;
    if (k == K) break;
  }
  return best;
}

}  // namespace fixtures
