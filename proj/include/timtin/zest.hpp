#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "timtin/channel.hpp"
#include "timtin/gdof.hpp"
#include "timtin/parallel.hpp"

namespace timtin {

/// Stream-level effective exponents after zero-forcing and cancellation.
/// Row = receiving stream, column = transmitting stream, both in flat
/// lexicographic (user, stream) order.
struct EffectiveStrengthMatrix {
  Eigen::MatrixXd G;
  std::vector<int> user_of;
  std::vector<int> stream_of;
};

/// The four GDoF tuples recorded in one forward/reverse cycle.
struct ZestIteration {
  int m = 0;
  GdofTuple fwd;
  GdofTuple switch_rev;
  GdofTuple rev;
  GdofTuple switch_fwd;
  int fallbacks = 0;  // degenerate receive vectors encountered in this cycle
};

struct GdofTrace {
  std::vector<ZestIteration> iterations;
};

enum class Direction { Original, Reciprocal };

struct ZestState {
  Direction direction = Direction::Original;
  int m = 1;
  TxConfig tx;
  RxConfig rx;
  GdofTrace trace;
};

struct ZestResult {
  TxConfig tx;
  RxConfig rx;
  GdofTuple gdof;
  GdofTrace trace;
  std::uint64_t seed = 0;
  bool converged = false;
};

struct ZestOptions {
  int max_iter = 100;
  double tol = 1e-6;
};

ZestState zest_init(const ChannelSpec& spec, int n, const std::vector<int>& b,
                    std::uint64_t seed);

/// Wraps a caller-supplied starting configuration (step 1 done by hand).
ZestState zest_state_from(const ChannelSpec& spec, TxConfig tx);

EffectiveStrengthMatrix effective_strengths(const ChannelSpec& spec, const TxConfig& tx,
                                            const RxConfig& rx, double tol = kOrthTol);

/// Dual power update: each stream's exponent becomes minus the strongest
/// surviving interference level it sees (floored at the noise level).
std::vector<double> dual_power_update(const EffectiveStrengthMatrix& g,
                                      const std::vector<double>& r);

/// Per-stream TIN GDoF (not divided by n) of the stream-level channel G.
std::vector<double> stream_tin_gdof(const EffectiveStrengthMatrix& g,
                                    const std::vector<double>& r);

/// One forward/reverse cycle (steps 2 through 5); appends to the trace.
ZestState zest_iterate(const ZestState& state, const ChannelSpec& spec);

ZestResult run_zest_from(const ChannelSpec& spec, ZestState state, const ZestOptions& opts);

ZestResult run_zest(const ChannelSpec& spec, int n, const std::vector<int>& b,
                    std::uint64_t seed, const ZestOptions& opts = {});

enum class Selection { SumGdof, SumRate };

struct MultiInitResult {
  std::size_t best = 0;
  std::vector<ZestResult> runs;
  std::vector<double> sum_rates;  // filled when a power is supplied
};

/// Runs every seed (in parallel when available) and keeps the best run.
/// SumGdof ranks by final sum-GDoF with sum-rate at P as the tie-breaker;
/// SumRate ranks by sum-rate at P alone. Earlier seeds win exact ties.
MultiInitResult multi_init_best(const ChannelSpec& spec, int n, const std::vector<int>& b,
                                const std::vector<std::uint64_t>& seeds,
                                const ZestOptions& opts, std::optional<double> P = std::nullopt,
                                Selection selection = Selection::SumGdof,
                                Execution exec = Execution::Parallel);

/// Stream-level flattening helpers shared with the baselines.
std::vector<double> flatten_powers(const TxConfig& tx);
void assign_powers(TxConfig& tx, const std::vector<double>& flat);

void write_trace_csv(std::ostream& os, const GdofTrace& trace);

}  // namespace timtin
