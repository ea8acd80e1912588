#pragma once

#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "timtin/channel.hpp"
#include "timtin/gdof.hpp"

namespace timtin {

/// (receiver, transmitter), zero-based.
using Link = std::pair<int, int>;

/// Partition of the interfering links into a signal-space part (TIM) and a
/// power-level part (TIN).
struct Decomposition {
  std::set<Link> tim_links;
  std::set<Link> tin_links;
};

/// Throws incompatible-decomposition unless the two sets are disjoint and
/// together cover exactly the cross links with alpha > 0.
void validate(const Decomposition& dec, const ChannelSpec& spec);

/// Links with alpha <= t go to TIN, stronger ones to TIM.
Decomposition threshold_decomposition(const ChannelSpec& spec, double t);

/// Original direct links plus the TIN links only.
ChannelSpec tin_component(const ChannelSpec& spec, const Decomposition& dec);
/// Unit direct links plus the TIM links at unit strength.
ChannelSpec tim_component(const ChannelSpec& spec, const Decomposition& dec);

struct TinSolution {
  std::vector<double> r;
  GdofTuple d;
};

/// Scalar TIN GDoF: d_k = max(0, a_kk + r_k - max(0, max_j a_kj + r_j)).
GdofTuple tin_gdof(const ChannelSpec& spec, const std::vector<double>& r);

struct TinFeasibility {
  bool feasible = false;
  std::vector<double> r;          // witness powers when feasible
  std::vector<int> conflict;      // users on a negative cycle when infeasible
};

/// Decides whether some r <= 0 gives every user at least d_target[k] under
/// TIN, as a system of difference constraints checked by Bellman-Ford.
TinFeasibility tin_feasible(const ChannelSpec& spec, const std::vector<double>& d_target);

/// Largest common d that tin_feasible accepts, by bisection to within tol.
TinSolution tin_symmetric_gdof(const ChannelSpec& spec, double tol = 1e-7);

/// a_kk >= strongest interference caused + strongest interference received.
bool tin_optimality_check(const ChannelSpec& spec);

struct TimSolution {
  TxConfig tx;   // one stream per user, powers 0
  GdofTuple d;   // verified on the unit-strength TIM component
};

namespace tim {
/// Beams given by the caller.
struct Explicit {
  TxConfig tx;
};
/// No interfering links to avoid: n = 1, full space for everyone.
struct Empty {};
/// The five-user pattern with strong links 1<-4, 2<-1, 3<-2, 3<-5, 4<-1,
/// 5<-4 (one-based), optionally with 2<-3 as well. n = 2, value 1/2.
struct FiveUserCycle {};
/// One-to-one alignment for neighbors at offsets 1..W over n = W + 1 uses.
/// Strong-only: W = S. Medium treated as strong: W = S + M.
struct Neighboring {
  int width = 0;
  NeighborLayout layout = NeighborLayout::Ring;
};
}  // namespace tim

using TimDescriptor = std::variant<tim::Explicit, tim::Empty, tim::FiveUserCycle, tim::Neighboring>;

/// Builds the beams for a supported construction and evaluates them on the
/// given TIM component.
TimSolution tim_solution_for(const ChannelSpec& tim_channel, const TimDescriptor& descriptor);

/// Picks a supported construction for a TIM component: empty, the
/// five-user pattern, or a neighboring ring/line. Throws unsupported-topology.
TimDescriptor detect_tim(const ChannelSpec& tim_channel);

struct ComposedScheme {
  TxConfig tx;
  GdofTuple tim;
  GdofTuple tin;
  GdofTuple product;
};

ComposedScheme compose(const TimSolution& tim, const TinSolution& tin, const ChannelSpec& spec);

/// GDoF of the composed configuration on the full channel, checked to agree
/// between the closed form and the ZF-SC receivers.
GdofTuple scheme_gdof(const ChannelSpec& spec, const ComposedScheme& scheme);

/// True when the full-channel tuple dominates the claimed product.
bool verify_scheme(const ChannelSpec& spec, const ComposedScheme& scheme, double tol = 1e-9);

struct FactorBound {
  double tin = 0.0;
  double tim = 0.0;
  double achieved = 0.0;
  double outer = 0.0;
  double factor = 0.0;
  double bound = 0.0;
  bool within = false;
};

FactorBound factor_bound(const ChannelSpec& spec, const QuantizationScheme& q,
                         const Decomposition& dec, const TimDescriptor& descriptor);
/// Same, with the threshold decomposition at t_l and a detected TIM construction.
FactorBound factor_bound(const ChannelSpec& spec, const QuantizationScheme& q);

double neighboring_sym_gdof(int S, int M);

struct NeighboringScheme {
  ChannelSpec spec;
  Decomposition decomposition;
  ComposedScheme scheme;
  GdofTuple verified;
  bool ok = false;
};

/// Medium links treated as strong when M <= S, otherwise medium links go to
/// TIN at full power and strong links to TIM.
NeighboringScheme neighboring_achievability(int S, int M, int K,
                                            NeighborLayout layout = NeighborLayout::Ring);

/// Five-user network of the decomposition example (strong 1.0, medium 0.5).
ChannelSpec five_user_network();
/// Medium links to TIN, strong links to TIM; `improved` also moves 2<-3 to TIM.
Decomposition five_user_decomposition(bool improved);

}  // namespace timtin
