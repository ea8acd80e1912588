#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "timtin/baselines.hpp"
#include "timtin/channel.hpp"
#include "timtin/decomposition.hpp"
#include "timtin/parallel.hpp"
#include "timtin/zest.hpp"

namespace timtin {

enum class ExperimentKind { Sweep, Converge, Decompose, Neighboring, Gdof };

struct ChannelSource {
  std::optional<std::string> file;  // fixed channel for every realization
  int K = 5;                        // cyclic generator otherwise
  double x = 0.5;
};

struct InitPolicy {
  double switch_db = 30.0;  // below this SNR use `low` initializations
  int low = 30;
  int high = 10;

  int count(double snr_db) const { return snr_db < switch_db ? low : high; }
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Sweep;
  ChannelSource channel;
  std::vector<double> snr_db{20.0, 30.0, 40.0, 50.0, 60.0};
  int realizations = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms{"zest", "max_sinr", "sapc", "tdma", "full_power"};
  int n = 2;
  std::vector<int> b;  // empty: one stream per user
  ZestOptions zest;
  IterativeOptions max_sinr;
  IterativeOptions sapc;
  InitPolicy inits;
  std::optional<std::string> zest_init;  // configuration file used instead of a random start
  std::optional<std::string> output;
};

/// Reads the JSON key/value config; unknown keys and invalid values are
/// reported as parse-error / config-invalid.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
void validate(const ExperimentConfig& cfg);

const std::vector<std::string>& known_algorithms();

struct SweepRow {
  double snr_db = 0.0;
  std::string algorithm;
  double mean = 0.0;
  double stddev = 0.0;
  int count = 0;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  /// [realization][snr][algorithm] sum-rates.
  std::vector<std::vector<std::vector<double>>> samples;
};

/// Channel for realization i: the file channel, or a cyclic draw seeded from
/// the config seed.
ChannelSpec realization_channel(const ExperimentConfig& cfg, int i);

SweepOutput run_sweep(const ExperimentConfig& cfg, Execution exec = Execution::Parallel,
                      std::ostream* dump = nullptr);
void write_sweep_csv(std::ostream& os, const SweepOutput& out);

struct ConvergeRow {
  std::string algorithm;
  int iter = 0;
  double sum_rate = 0.0;
  std::optional<double> sum_gdof;
};

/// Per-iteration traces on realization 0 at the first SNR of the grid.
std::vector<ConvergeRow> run_converge(const ExperimentConfig& cfg);
void write_converge_csv(std::ostream& os, const std::vector<ConvergeRow>& rows);

struct DecomposeReport {
  double tin_sym = 0.0;
  double tim_sym = 0.0;
  double product = 0.0;
  double outer = 0.0;
  double factor = 0.0;
  std::optional<double> factor_limit;  // 1/(1 - t) when t <= 0.5
  double threshold = 0.0;
  GdofTuple claimed;
  GdofTuple verified;
  bool ok = false;
};

/// Decomposes by the given partition (or by threshold t), solves both
/// components and checks the composed scheme on the full channel.
DecomposeReport run_decompose(const ChannelSpec& spec, const std::optional<Decomposition>& dec,
                              std::optional<double> threshold,
                              const std::optional<TimDescriptor>& tim);
void write_decompose_report(std::ostream& os, const DecomposeReport& r);

double db_to_power(double db);

}  // namespace timtin
