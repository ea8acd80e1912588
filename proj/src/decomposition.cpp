#include "timtin/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/bellman_ford_shortest_paths.hpp>

#include "timtin/error.hpp"

namespace timtin {

namespace {

constexpr double kCompareSlack = 1e-12;

bool is_cross(const Link& l) { return l.first != l.second; }

void check_link(const Link& l, int K) {
  if (l.first < 0 || l.first >= K || l.second < 0 || l.second >= K || !is_cross(l)) {
    throw Error(ErrorCode::IncompatibleDecomposition,
                "link (" + std::to_string(l.first) + "," + std::to_string(l.second) +
                    ") is not a cross link of this channel");
  }
}

double min_entry(const GdofTuple& t) {
  return t.d.empty() ? 0.0 : *std::min_element(t.d.begin(), t.d.end());
}

TxConfig unit_beams(int K, int n, const std::vector<int>& direction) {
  TxConfig tx;
  tx.n = n;
  tx.beams.resize(K);
  tx.powers.resize(K);
  for (int k = 0; k < K; ++k) {
    CVector v = CVector::Zero(n);
    v(direction[k]) = 1.0;
    tx.beams[k] = {v};
    tx.powers[k] = {0.0};
  }
  return tx;
}

const std::vector<Link>& five_user_strong() {
  static const std::vector<Link> links{{0, 3}, {1, 0}, {2, 1}, {2, 4}, {3, 0}, {4, 3}};
  return links;
}

const std::vector<Link>& five_user_medium() {
  static const std::vector<Link> links{{0, 1}, {1, 2}, {1, 4}, {2, 3}, {3, 4}};
  return links;
}

bool same_pattern(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if ((a(i, j) > 0.0) != (b(i, j) > 0.0)) return false;
    }
  }
  return true;
}

}  // namespace

void validate(const Decomposition& dec, const ChannelSpec& spec) {
  validate(spec);
  for (const auto& l : dec.tim_links) check_link(l, spec.K);
  for (const auto& l : dec.tin_links) {
    check_link(l, spec.K);
    if (dec.tim_links.count(l)) {
      throw Error(ErrorCode::IncompatibleDecomposition,
                  "link (" + std::to_string(l.first) + "," + std::to_string(l.second) +
                      ") is in both components");
    }
  }
  for (int k = 0; k < spec.K; ++k) {
    for (int j = 0; j < spec.K; ++j) {
      if (k == j) continue;
      const bool listed = dec.tim_links.count({k, j}) || dec.tin_links.count({k, j});
      if (listed != (spec.alpha(k, j) > 0.0)) {
        throw Error(ErrorCode::IncompatibleDecomposition,
                    "link (" + std::to_string(k) + "," + std::to_string(j) +
                        (listed ? ") has zero strength but is listed" : ") is not covered"));
      }
    }
  }
}

Decomposition threshold_decomposition(const ChannelSpec& spec, double t) {
  validate(spec);
  Decomposition dec;
  for (int k = 0; k < spec.K; ++k) {
    for (int j = 0; j < spec.K; ++j) {
      if (k == j || !(spec.alpha(k, j) > 0.0)) continue;
      (spec.alpha(k, j) <= t ? dec.tin_links : dec.tim_links).insert({k, j});
    }
  }
  return dec;
}

ChannelSpec tin_component(const ChannelSpec& spec, const Decomposition& dec) {
  validate(dec, spec);
  ChannelSpec out = spec;
  for (const auto& l : dec.tim_links) out.alpha(l.first, l.second) = 0.0;
  return out;
}

ChannelSpec tim_component(const ChannelSpec& spec, const Decomposition& dec) {
  validate(dec, spec);
  ChannelSpec out;
  out.K = spec.K;
  out.alpha = Eigen::MatrixXd::Identity(spec.K, spec.K);
  for (const auto& l : dec.tim_links) out.alpha(l.first, l.second) = 1.0;
  return out;
}

GdofTuple tin_gdof(const ChannelSpec& spec, const std::vector<double>& r) {
  if (static_cast<int>(r.size()) != spec.K) {
    throw Error(ErrorCode::DimensionMismatch, "need one power exponent per user");
  }
  GdofTuple out;
  out.d.assign(spec.K, 0.0);
  for (int k = 0; k < spec.K; ++k) {
    double interference = 0.0;
    for (int j = 0; j < spec.K; ++j) {
      if (j != k && spec.alpha(k, j) > 0.0) {
        interference = std::max(interference, spec.alpha(k, j) + r[j]);
      }
    }
    out.d[k] = std::max(0.0, spec.alpha(k, k) + r[k] - interference);
  }
  return out;
}

TinFeasibility tin_feasible(const ChannelSpec& spec, const std::vector<double>& d_target) {
  validate(spec);
  const int K = spec.K;
  if (static_cast<int>(d_target.size()) != K) {
    throw Error(ErrorCode::DimensionMismatch, "need one target per user");
  }
  for (double d : d_target) {
    if (!(d >= 0.0)) throw Error(ErrorCode::NegativeTarget, "targets must be >= 0");
  }

  // Constraint x_a - x_b <= c becomes edge b -> a with weight c. Vertex K is
  // the zero-power reference.
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS,
                                      boost::no_property,
                                      boost::property<boost::edge_weight_t, double>>;
  Graph g(K + 1);
  const int ref = K;
  for (int k = 0; k < K; ++k) {
    boost::add_edge(ref, k, 0.0, g);  // r_k <= 0
    if (d_target[k] <= 0.0) continue;
    boost::add_edge(k, ref, spec.alpha(k, k) - d_target[k], g);  // r_k >= d_k - a_kk
    for (int j = 0; j < K; ++j) {
      if (j == k || !(spec.alpha(k, j) > 0.0)) continue;
      // a_kk + r_k - a_kj - r_j >= d_k
      boost::add_edge(k, j, spec.alpha(k, k) - spec.alpha(k, j) - d_target[k], g);
    }
  }

  std::vector<double> dist(K + 1, std::numeric_limits<double>::max());
  std::vector<std::size_t> pred(K + 1);
  std::iota(pred.begin(), pred.end(), 0);
  dist[ref] = 0.0;
  auto weight = boost::get(boost::edge_weight, g);
  const auto less = [](double a, double b) { return a < b - kCompareSlack; };
  const bool ok = boost::bellman_ford_shortest_paths(
      g, static_cast<std::size_t>(K + 1),
      boost::weight_map(weight)
          .distance_map(dist.data())
          .predecessor_map(pred.data())
          .distance_compare(less));

  TinFeasibility out;
  out.feasible = ok;
  if (ok) {
    out.r.assign(dist.begin(), dist.begin() + K);
    for (double& r : out.r) r = std::min(r, 0.0);
    return out;
  }
  // Walk predecessors from a still-relaxable edge to land on the cycle.
  for (auto [it, end] = boost::edges(g); it != end; ++it) {
    const auto u = boost::source(*it, g);
    const auto v = boost::target(*it, g);
    if (dist[u] == std::numeric_limits<double>::max()) continue;
    if (!less(dist[u] + weight[*it], dist[v])) continue;
    pred[v] = u;
    std::size_t x = v;
    for (int i = 0; i <= K; ++i) x = pred[x];
    std::size_t y = x;
    do {
      if (static_cast<int>(y) != ref) out.conflict.push_back(static_cast<int>(y));
      y = pred[y];
    } while (y != x && out.conflict.size() <= static_cast<std::size_t>(K));
    std::reverse(out.conflict.begin(), out.conflict.end());
    break;
  }
  return out;
}

TinSolution tin_symmetric_gdof(const ChannelSpec& spec, double tol) {
  validate(spec);
  if (!(tol > 0.0)) throw Error(ErrorCode::TolerancePositive, "tol must be positive");
  const auto common = [&](double d) { return std::vector<double>(spec.K, d); };
  double lo = 0.0;
  double hi = spec.alpha.diagonal().minCoeff();
  if (tin_feasible(spec, common(hi)).feasible) {
    lo = hi;
  } else {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (tin_feasible(spec, common(mid)).feasible ? lo : hi) = mid;
    }
  }
  TinSolution out;
  out.r = tin_feasible(spec, common(lo)).r;
  out.d = tin_gdof(spec, out.r);
  return out;
}

bool tin_optimality_check(const ChannelSpec& spec) {
  validate(spec);
  for (int k = 0; k < spec.K; ++k) {
    double caused = 0.0;
    double received = 0.0;
    for (int j = 0; j < spec.K; ++j) {
      if (j == k) continue;
      caused = std::max(caused, spec.alpha(j, k));
      received = std::max(received, spec.alpha(k, j));
    }
    if (spec.alpha(k, k) < caused + received) return false;
  }
  return true;
}

TimSolution tim_solution_for(const ChannelSpec& tim_channel, const TimDescriptor& descriptor) {
  validate(tim_channel);
  const int K = tim_channel.K;
  TimSolution out;
  if (const auto* e = std::get_if<tim::Explicit>(&descriptor)) {
    out.tx = e->tx;
    for (auto& user : out.tx.powers) std::fill(user.begin(), user.end(), 0.0);
    validate(out.tx);
  } else if (std::holds_alternative<tim::Empty>(descriptor)) {
    out.tx = unit_beams(K, 1, std::vector<int>(K, 0));
  } else if (std::holds_alternative<tim::FiveUserCycle>(descriptor)) {
    if (K != 5) throw Error(ErrorCode::UnsupportedTopology, "five-user pattern needs K = 5");
    out.tx = unit_beams(K, 2, {0, 1, 0, 0, 1});
    out.tx.beams[3][0] = CVector::Constant(2, cplx(1.0 / std::sqrt(2.0), 0.0));
  } else {
    const auto& nb = std::get<tim::Neighboring>(descriptor);
    if (nb.width < 0) throw Error(ErrorCode::InvalidRange, "width must be >= 0");
    const int n = nb.width + 1;
    std::vector<int> direction(K);
    for (int k = 0; k < K; ++k) direction[k] = k % n;
    out.tx = unit_beams(K, n, direction);
  }
  if (out.tx.users() != K) {
    throw Error(ErrorCode::IncompatibleDecomposition, "beam count differs from user count");
  }
  out.d = gdof_of_config(tim_channel, out.tx);
  return out;
}

TimDescriptor detect_tim(const ChannelSpec& tim_channel) {
  validate(tim_channel);
  const int K = tim_channel.K;
  bool any = false;
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < K; ++j) any = any || (k != j && tim_channel.alpha(k, j) > 0.0);
  }
  if (!any) return tim::Empty{};
  for (auto layout : {NeighborLayout::Ring, NeighborLayout::Line}) {
    for (int w = 1; w < K; ++w) {
      if (layout == NeighborLayout::Ring && K <= 2 * w) break;
      if (same_pattern(gen_neighboring(K, w, 0, layout).alpha, tim_channel.alpha)) {
        return tim::Neighboring{w, layout};
      }
    }
  }
  if (K == 5) {
    std::set<Link> allowed(five_user_strong().begin(), five_user_strong().end());
    allowed.insert({1, 2});
    bool subset = true;
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        if (k != j && tim_channel.alpha(k, j) > 0.0) subset = subset && allowed.count({k, j});
      }
    }
    if (subset) return tim::FiveUserCycle{};
  }
  throw Error(ErrorCode::UnsupportedTopology,
              "no supported signal-space construction for this TIM component");
}

ComposedScheme compose(const TimSolution& tim, const TinSolution& tin, const ChannelSpec& spec) {
  validate(spec);
  if (tim.tx.users() != spec.K || static_cast<int>(tin.r.size()) != spec.K ||
      tim.d.size() != static_cast<std::size_t>(spec.K) ||
      tin.d.size() != static_cast<std::size_t>(spec.K)) {
    throw Error(ErrorCode::IncompatibleDecomposition, "component sizes differ from the channel");
  }
  ComposedScheme out;
  out.tx = tim.tx;
  for (int k = 0; k < spec.K; ++k) {
    std::fill(out.tx.powers[k].begin(), out.tx.powers[k].end(), tin.r[k]);
  }
  out.tim = tim.d;
  out.tin = tin.d;
  out.product.d.resize(spec.K);
  for (int k = 0; k < spec.K; ++k) out.product.d[k] = tim.d[k] * tin.d[k];
  return out;
}

GdofTuple scheme_gdof(const ChannelSpec& spec, const ComposedScheme& scheme) {
  const GdofTuple closed = gdof_of_config(spec, scheme.tx);
  const RxConfig rx =
      zfsc_receivers(spec, scheme.tx, make_sc_order(scheme.tx, ScOrder::Lexicographic));
  const GdofTuple streams = stream_gdof(spec, scheme.tx, rx).per_user;
  GdofTuple out = closed;
  // Report the weaker of the two should they ever disagree.
  for (std::size_t k = 0; k < out.d.size(); ++k) out.d[k] = std::min(closed[k], streams[k]);
  return out;
}

bool verify_scheme(const ChannelSpec& spec, const ComposedScheme& scheme, double tol) {
  const GdofTuple got = scheme_gdof(spec, scheme);
  if (got.size() != scheme.product.size()) return false;
  for (std::size_t k = 0; k < got.size(); ++k) {
    if (got[k] < scheme.product[k] - tol) return false;
  }
  return true;
}

FactorBound factor_bound(const ChannelSpec& spec, const QuantizationScheme& q,
                         const Decomposition& dec, const TimDescriptor& descriptor) {
  const double t = q.top();
  if (t > 0.5) throw Error(ErrorCode::ThresholdAboveHalf, "top threshold must be <= 0.5");
  FactorBound out;
  out.tin = min_entry(tin_symmetric_gdof(tin_component(spec, dec)).d);
  out.tim = min_entry(tim_solution_for(tim_component(spec, dec), descriptor).d);
  out.achieved = out.tin * out.tim;
  out.outer = std::min(out.tin, out.tim);
  out.factor = out.achieved > 0.0 ? out.outer / out.achieved
                                  : std::numeric_limits<double>::infinity();
  out.bound = 1.0 / (1.0 - t);
  out.within = out.factor <= out.bound + 1e-9;
  return out;
}

FactorBound factor_bound(const ChannelSpec& spec, const QuantizationScheme& q) {
  if (q.top() > 0.5) throw Error(ErrorCode::ThresholdAboveHalf, "top threshold must be <= 0.5");
  const Decomposition dec = threshold_decomposition(spec, q.top());
  return factor_bound(spec, q, dec, detect_tim(tim_component(spec, dec)));
}

double neighboring_sym_gdof(int S, int M) {
  if (S < 0 || M < 0) throw Error(ErrorCode::InvalidRange, "S and M must be >= 0");
  return M <= S ? 1.0 / (S + M + 1) : 1.0 / (2.0 * (S + 1));
}

NeighboringScheme neighboring_achievability(int S, int M, int K, NeighborLayout layout) {
  NeighboringScheme out;
  out.spec = gen_neighboring(K, S, M, layout);
  const bool all_tim = M <= S;
  out.decomposition = all_tim ? threshold_decomposition(out.spec, 0.0)
                              : threshold_decomposition(out.spec, 0.5);
  const TimSolution tim = tim_solution_for(tim_component(out.spec, out.decomposition),
                                           tim::Neighboring{all_tim ? S + M : S, layout});
  // Medium links sit at exactly half strength, so full power leaves everyone 1/2.
  TinSolution tin;
  tin.r.assign(K, 0.0);
  tin.d = tin_gdof(tin_component(out.spec, out.decomposition), tin.r);
  out.scheme = compose(tim, tin, out.spec);
  out.verified = scheme_gdof(out.spec, out.scheme);
  out.ok = verify_scheme(out.spec, out.scheme);
  return out;
}

ChannelSpec five_user_network() {
  ChannelSpec spec;
  spec.K = 5;
  spec.alpha = Eigen::MatrixXd::Identity(5, 5);
  for (const auto& l : five_user_strong()) spec.alpha(l.first, l.second) = 1.0;
  for (const auto& l : five_user_medium()) spec.alpha(l.first, l.second) = 0.5;
  return spec;
}

Decomposition five_user_decomposition(bool improved) {
  Decomposition dec;
  dec.tim_links.insert(five_user_strong().begin(), five_user_strong().end());
  dec.tin_links.insert(five_user_medium().begin(), five_user_medium().end());
  if (improved) {
    dec.tin_links.erase({1, 2});
    dec.tim_links.insert({1, 2});
  }
  return dec;
}

}  // namespace timtin
