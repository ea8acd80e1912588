// Command-line front end: GDoF evaluation, ZEST runs, decomposition reports
// and the finite-SNR experiments.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "timtin/error.hpp"
#include "timtin/experiment.hpp"
#include "timtin/io.hpp"

using namespace timtin;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kVerifyFailed = 2;

void print_tuple(std::ostream& os, const char* label, const GdofTuple& t) {
  os << label;
  for (double d : t.d) os << ' ' << d;
  os << "  (sum " << t.sum() << ")\n";
}

/// Writes to the file when a path is given, stdout otherwise.
template <class Fn>
void with_output(const std::optional<std::string>& path, Fn&& fn) {
  if (!path) {
    fn(std::cout);
    return;
  }
  std::ofstream out(*path);
  if (!out) throw Error(ErrorCode::FileIo, "cannot write " + *path);
  fn(out);
  if (!out) throw Error(ErrorCode::FileIo, "write failed for " + *path);
}

int cmd_gdof(const std::string& channel_path, const std::string& tx_path, std::optional<double> P) {
  const ChannelSpec spec = channel_from_json(read_json_file(channel_path));
  const TxConfig tx = tx_from_json(read_json_file(tx_path));
  const GdofTuple closed = gdof_of_config(spec, tx);
  const RxConfig rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
  const GdofTuple zf = stream_gdof(spec, tx, rx).per_user;
  std::cout << std::setprecision(10);
  print_tuple(std::cout, "gdof", closed);
  print_tuple(std::cout, "zfsc", zf);
  const std::optional<double> power = P ? P : spec.P;
  if (power && spec.theta) {
    std::cout << "rates";
    for (double r : finite_snr_rates(spec, tx, *power)) std::cout << ' ' << r;
    std::cout << '\n';
  }
  for (std::size_t k = 0; k < closed.size(); ++k) {
    if (std::abs(closed[k] - zf[k]) > 1e-9) return kVerifyFailed;
  }
  return kOk;
}

struct ZestArgs {
  std::string channel;
  int n = 2;
  std::vector<int> b;
  std::uint64_t seed = 1;
  int inits = 1;
  ZestOptions opts;
  std::optional<std::string> init;
  std::optional<std::string> trace;
  std::optional<std::string> dump;
};

int cmd_zest(const ZestArgs& a) {
  const ChannelSpec spec = channel_from_json(read_json_file(a.channel));
  std::vector<int> b = a.b;
  if (b.empty()) b.assign(spec.K, 1);
  if (b.size() == 1) b.assign(spec.K, b.front());
  ZestResult result;
  if (a.init) {
    result = run_zest_from(spec, zest_state_from(spec, tx_from_json(read_json_file(*a.init))), a.opts);
  } else {
    std::vector<std::uint64_t> seeds;
    for (int j = 0; j < a.inits; ++j) seeds.push_back(j == 0 ? a.seed : derive_seed(a.seed, j));
    auto multi = multi_init_best(spec, a.n, b, seeds, a.opts, spec.P);
    result = std::move(multi.runs[multi.best]);
  }
  std::cout << std::setprecision(10);
  print_tuple(std::cout, "gdof", result.gdof);
  std::cout << "iterations " << result.trace.iterations.size() << '\n';
  std::cout << "converged " << (result.converged ? "yes" : "no") << '\n';
  if (a.trace) with_output(a.trace, [&](std::ostream& os) { write_trace_csv(os, result.trace); });
  if (a.dump) write_json_file(*a.dump, tx_to_json(result.tx));
  return kOk;
}

int cmd_decompose(const std::string& path, const std::optional<std::string>& dec_path,
                  std::optional<double> threshold) {
  const Json doc = read_json_file(path);
  ChannelSpec spec;
  std::optional<Decomposition> dec;
  std::optional<TimDescriptor> tim;
  if (doc.contains("tim_links")) {
    auto parsed = decomposition_from_json(doc);
    spec = parsed.spec;
    dec = parsed.decomposition;
    tim = parsed.tim;
    if (!threshold) threshold = parsed.threshold;
  } else {
    spec = channel_from_json(doc);
  }
  if (dec_path) {
    auto parsed = decomposition_from_json(read_json_file(*dec_path));
    if (parsed.spec.alpha != spec.alpha) {
      throw Error(ErrorCode::IncompatibleDecomposition, "decomposition is for a different channel");
    }
    dec = parsed.decomposition;
    tim = parsed.tim;
    if (!threshold) threshold = parsed.threshold;
  }
  if (dec && threshold && !dec_path && !doc.contains("tim_links")) dec.reset();
  const DecomposeReport report = run_decompose(spec, dec, threshold, tim);
  write_decompose_report(std::cout, report);
  return report.ok ? kOk : kVerifyFailed;
}

int cmd_sweep(const std::string& config, std::optional<std::string> output,
              const std::optional<std::string>& dump, bool serial) {
  const ExperimentConfig cfg = parse_config(config);
  if (!output) output = cfg.output;
  std::optional<std::ofstream> dump_file;
  if (dump) {
    dump_file.emplace(*dump);
    if (!*dump_file) throw Error(ErrorCode::FileIo, "cannot write " + *dump);
  }
  const SweepOutput out = run_sweep(cfg, serial ? Execution::Serial : Execution::Parallel,
                                    dump_file ? &*dump_file : nullptr);
  with_output(output, [&](std::ostream& os) { write_sweep_csv(os, out); });
  return kOk;
}

int cmd_converge(const std::string& config, std::optional<std::string> output) {
  const ExperimentConfig cfg = parse_config(config);
  if (!output) output = cfg.output;
  const auto rows = run_converge(cfg);
  with_output(output, [&](std::ostream& os) { write_converge_csv(os, rows); });
  return kOk;
}

int cmd_neighboring(int S, int M, int K, const std::string& layout) {
  const NeighboringScheme ns = neighboring_achievability(S, M, K, layout_from_string(layout));
  const double expected = neighboring_sym_gdof(S, M);
  const double got = *std::min_element(ns.verified.d.begin(), ns.verified.d.end());
  std::cout << std::setprecision(10);
  std::cout << "formula " << expected << '\n';
  std::cout << "signal_space_only " << 1.0 / (S + M + 1) << '\n';
  print_tuple(std::cout, "verified", ns.verified);
  std::cout << "verify " << (ns.ok && got >= expected - 1e-9 ? "pass" : "fail") << '\n';
  return ns.ok && got >= expected - 1e-9 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GDoF analysis, ZEST and TIM-TIN decomposition tools"};
  app.require_subcommand(1);

  std::string channel_path, tx_path, config_path, decompose_path, layout = "ring";
  std::optional<double> power, threshold;
  std::optional<std::string> output, dump, dec_path;
  bool serial = false;
  int S = 0, M = 0, K = 0;
  ZestArgs zest_args;

  auto* gdof = app.add_subcommand("gdof", "GDoF of a configuration, closed form and ZF-SC");
  gdof->add_option("channel", channel_path, "channel JSON")->required();
  gdof->add_option("txconfig", tx_path, "configuration JSON")->required();
  gdof->add_option("--P", power, "power for finite-SNR rates");

  auto* zest = app.add_subcommand("zest", "run ZEST on a channel");
  zest->add_option("channel", zest_args.channel, "channel JSON")->required();
  zest->add_option("--n", zest_args.n, "channel uses")->check(CLI::PositiveNumber);
  zest->add_option("--b", zest_args.b, "streams per user (one value or K values)");
  zest->add_option("--seed", zest_args.seed, "initialization seed");
  zest->add_option("--inits", zest_args.inits, "random initializations")->check(CLI::PositiveNumber);
  zest->add_option("--max-iter", zest_args.opts.max_iter, "iteration cap");
  zest->add_option("--tol", zest_args.opts.tol, "sum-GDoF convergence tolerance");
  zest->add_option("--init", zest_args.init, "starting configuration JSON");
  zest->add_option("--trace", zest_args.trace, "write the GDoF trace CSV here");
  zest->add_option("--dump-config", zest_args.dump, "write the final configuration JSON here");

  auto* decompose = app.add_subcommand("decompose", "TIM-TIN decomposition report");
  decompose->add_option("channel", decompose_path, "channel or decomposition JSON")->required();
  auto* dec_opt = decompose->add_option("--decomposition", dec_path, "decomposition JSON");
  decompose->add_option("--threshold", threshold, "send links <= t to TIN")->excludes(dec_opt);

  auto* sweep = app.add_subcommand("sweep", "sum-rate versus SNR");
  sweep->add_option("--config", config_path, "experiment config JSON")->required();
  sweep->add_option("--output", output, "CSV path (default: config output or stdout)");
  sweep->add_option("--dump-config", dump, "JSON lines of the selected ZEST configurations");
  sweep->add_flag("--serial", serial, "run realizations on one thread");

  auto* converge = app.add_subcommand("converge", "per-iteration traces on one realization");
  converge->add_option("--config", config_path, "experiment config JSON")->required();
  converge->add_option("--output", output, "CSV path (default: config output or stdout)");

  auto* neighboring = app.add_subcommand("neighboring", "symmetric neighboring channel check");
  neighboring->add_option("--S", S, "strong half-width")->required()->check(CLI::NonNegativeNumber);
  neighboring->add_option("--M", M, "medium half-width")->required()->check(CLI::NonNegativeNumber);
  neighboring->add_option("--K", K, "number of users")->required();
  neighboring->add_option("--layout", layout, "ring or line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gdof) return cmd_gdof(channel_path, tx_path, power);
    if (*zest) return cmd_zest(zest_args);
    if (*decompose) return cmd_decompose(decompose_path, dec_path, threshold);
    if (*sweep) return cmd_sweep(config_path, output, dump, serial);
    if (*converge) return cmd_converge(config_path, output);
    if (*neighboring) return cmd_neighboring(S, M, K, layout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: parse-error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
