#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "timtin/channel.hpp"
#include "timtin/gdof.hpp"

namespace timtin {

struct BaselineResult {
  std::string algorithm;
  std::vector<double> rates;   // bits per channel use
  double sum_rate = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;   // sum-rate after each iteration
  TxConfig tx;                 // final configuration
};

/// Equal time sharing: R_k = log2(1 + P^a_kk) / K.
BaselineResult tdma_rates(const ChannelSpec& spec, double P);

/// n = 1, everyone at full power, single-user decoding.
BaselineResult full_power_rates(const ChannelSpec& spec, double P);

struct IterativeOptions {
  int max_iter = 500;
  double tol = 1e-6;
};

/// Alternating SINR-maximizing receive filters in the channel and its
/// reciprocal. Each user's unit power is split evenly across its streams.
/// `init` replaces the seeded random beams (e.g. a ZEST output).
BaselineResult max_sinr(const ChannelSpec& spec, int n, const std::vector<int>& b, double P,
                        std::uint64_t seed, const IterativeOptions& opts = {},
                        const std::optional<TxConfig>& init = std::nullopt);

/// Successive approximation power control: each outer step replaces
/// log(1 + SINR) by its tight a log SINR + b bound and maximizes the
/// (concave in log-power) sum. Starts at full power unless `init_r` gives
/// exponents (e.g. an iGPC output).
BaselineResult sapc(const ChannelSpec& spec, double P, const IterativeOptions& opts = {},
                    const std::optional<std::vector<double>>& init_r = std::nullopt);

struct IgpcResult {
  std::vector<double> r;            // powers for the original channel
  GdofTuple d;                      // their TIN GDoF
  std::vector<GdofTuple> trace;     // one tuple per half-iteration, alternating channels
  int iterations = 0;
  bool converged = false;
};

/// Scalar dual power updates bounced between the channel and its reciprocal,
/// starting from full power.
IgpcResult igpc(const ChannelSpec& spec, int max_iter = 100, double tol = 1e-9);

/// Sum of TIN log2(1 + SINR) rates for scalar powers p_k = P^r_k, n = 1.
std::vector<double> scalar_tin_rates(const ChannelSpec& spec, const std::vector<double>& r,
                                     double P);

}  // namespace timtin
