#pragma once

#include <cstddef>
#include <vector>

#include "timtin/channel.hpp"
#include "timtin/linalg.hpp"

namespace timtin {

/// Residual-norm threshold for linear independence in the span scan.
inline constexpr double kSpanTol = 1e-9;
/// Threshold on |u^H v| below which a stream counts as zero-forced.
inline constexpr double kOrthTol = 1e-7;
/// Received exponents at or below this are at the noise floor.
inline constexpr double kNoiseFloor = 1e-12;

/// Transmit side of a signal-space/power-level configuration over n channel uses.
struct TxConfig {
  int n = 1;
  std::vector<std::vector<CVector>> beams;   // [user][stream], unit norm
  std::vector<std::vector<double>> powers;   // [user][stream], exponents <= 0

  int users() const { return static_cast<int>(beams.size()); }
  int streams(int k) const { return static_cast<int>(beams[k].size()); }
  int total_streams() const;
  /// Flat stream index of (user, stream) in lexicographic order.
  int flat_index(int user, int stream) const;
};

struct RxConfig {
  std::vector<std::vector<CVector>> filters;   // [user][stream], unit norm
  std::vector<std::vector<int>> sc_order;      // per-user permutation of stream ids
  /// Streams whose receive vector fell back to a degenerate choice.
  int fallback_count = 0;
};

struct ExponentSet {
  std::vector<CVector> vectors;
  std::vector<double> exponents;
};

struct DominantSum {
  int gamma = 0;
  double sum = 0.0;
  std::vector<std::size_t> selected;  // indices into the input set, scan order
};

struct GdofTuple {
  std::vector<double> d;

  std::size_t size() const { return d.size(); }
  double operator[](std::size_t k) const { return d[k]; }
  double sum() const;
};

/// Per-stream and per-user GDoF produced by a given receiver.
struct StreamGdof {
  std::vector<std::vector<double>> per_stream;
  GdofTuple per_user;
};

enum class ScOrder { Lexicographic, ReverseLexicographic };

void validate(const TxConfig& tx);
void validate(const RxConfig& rx, const TxConfig& tx);

/// Per-user cancellation orders for the given convention.
std::vector<std::vector<int>> make_sc_order(const TxConfig& tx, ScOrder order);

/// Greedy span scan: walk vectors by descending exponent (stable), keep a
/// vector when its residual against the kept span exceeds tol, and sum the
/// kept exponents. This is the high-SNR slope of log det(I + sum P^k v v^H).
DominantSum dominant_exponent_sum(const ExponentSet& set, double tol = kSpanTol);

GdofTuple gdof_of_config(const ChannelSpec& spec, const TxConfig& tx);

/// Zero-forcing with successive cancellation receivers that attain
/// gdof_of_config for every user.
RxConfig zfsc_receivers(const ChannelSpec& spec, const TxConfig& tx,
                        const std::vector<std::vector<int>>& sc_order);

StreamGdof stream_gdof(const ChannelSpec& spec, const TxConfig& tx, const RxConfig& rx,
                       double tol = kOrthTol);

/// Exact finite-SNR rates (bits per channel use) with optimal joint decoding
/// of each user's own streams and interference treated as Gaussian noise.
std::vector<double> finite_snr_rates(const ChannelSpec& spec, const TxConfig& tx, double P);

}  // namespace timtin
