#include "timtin/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "timtin/error.hpp"
#include "timtin/io.hpp"

namespace timtin {

namespace {

constexpr std::uint64_t kMaxSinrStream = 1'000'000;

void check_keys(const Json& doc, std::initializer_list<const char*> allowed, const char* where) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, std::string(where) + " must be an object");
  for (const auto& item : doc.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; })) {
      throw Error(ErrorCode::ParseError, std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

template <class T>
T field(const Json& doc, const char* key, const char* where) {
  try {
    return doc.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::ParseError,
                std::string("field '") + key + "' in " + where + " has the wrong type");
  }
}

void read_iterative(const Json& doc, const char* where, int& max_iter, double& tol) {
  check_keys(doc, {"max_iter", "tol"}, where);
  if (doc.contains("max_iter")) max_iter = field<int>(doc, "max_iter", where);
  if (doc.contains("tol")) tol = field<double>(doc, "tol", where);
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "sweep") return ExperimentKind::Sweep;
  if (s == "converge") return ExperimentKind::Converge;
  if (s == "decompose") return ExperimentKind::Decompose;
  if (s == "neighboring") return ExperimentKind::Neighboring;
  if (s == "gdof") return ExperimentKind::Gdof;
  throw Error(ErrorCode::ParseError, "unknown experiment kind '" + s + "'");
}

ExperimentConfig config_from_json(const Json& doc) {
  check_keys(doc,
             {"kind", "channel", "snr_db", "realizations", "profile", "seed", "algorithms", "n",
              "b", "zest", "max_sinr", "sapc", "inits", "zest_init", "output"},
             "config");
  ExperimentConfig cfg;
  if (doc.contains("kind")) cfg.kind = kind_from_string(field<std::string>(doc, "kind", "config"));
  if (doc.contains("profile")) {
    const auto profile = field<std::string>(doc, "profile", "config");
    if (profile == "ci") {
      cfg.realizations = 20;
    } else if (profile != "full") {
      throw Error(ErrorCode::ParseError, "profile must be 'ci' or 'full'");
    }
  }
  if (doc.contains("channel")) {
    const Json& ch = doc.at("channel");
    check_keys(ch, {"file", "K", "x"}, "channel");
    if (ch.contains("file")) cfg.channel.file = field<std::string>(ch, "file", "channel");
    if (ch.contains("K")) cfg.channel.K = field<int>(ch, "K", "channel");
    if (ch.contains("x")) cfg.channel.x = field<double>(ch, "x", "channel");
  }
  if (doc.contains("snr_db")) cfg.snr_db = field<std::vector<double>>(doc, "snr_db", "config");
  if (doc.contains("realizations")) cfg.realizations = field<int>(doc, "realizations", "config");
  if (doc.contains("seed")) cfg.seed = field<std::uint64_t>(doc, "seed", "config");
  if (doc.contains("algorithms")) {
    cfg.algorithms = field<std::vector<std::string>>(doc, "algorithms", "config");
  }
  if (doc.contains("n")) cfg.n = field<int>(doc, "n", "config");
  if (doc.contains("b")) {
    if (doc.at("b").is_number_integer()) {
      cfg.b.assign(1, doc.at("b").get<int>());
    } else {
      cfg.b = field<std::vector<int>>(doc, "b", "config");
    }
  }
  if (doc.contains("zest")) read_iterative(doc.at("zest"), "zest", cfg.zest.max_iter, cfg.zest.tol);
  if (doc.contains("max_sinr")) {
    read_iterative(doc.at("max_sinr"), "max_sinr", cfg.max_sinr.max_iter, cfg.max_sinr.tol);
  }
  if (doc.contains("sapc")) read_iterative(doc.at("sapc"), "sapc", cfg.sapc.max_iter, cfg.sapc.tol);
  if (doc.contains("inits")) {
    const Json& in = doc.at("inits");
    check_keys(in, {"switch_db", "low", "high"}, "inits");
    if (in.contains("switch_db")) cfg.inits.switch_db = field<double>(in, "switch_db", "inits");
    if (in.contains("low")) cfg.inits.low = field<int>(in, "low", "inits");
    if (in.contains("high")) cfg.inits.high = field<int>(in, "high", "inits");
  }
  if (doc.contains("zest_init")) cfg.zest_init = field<std::string>(doc, "zest_init", "config");
  if (doc.contains("output")) cfg.output = field<std::string>(doc, "output", "config");
  validate(cfg);
  return cfg;
}

std::vector<int> stream_counts(const ExperimentConfig& cfg, int K) {
  if (cfg.b.empty()) return std::vector<int>(K, 1);
  if (cfg.b.size() == 1) return std::vector<int>(K, cfg.b.front());
  if (static_cast<int>(cfg.b.size()) != K) {
    throw Error(ErrorCode::ConfigInvalid, "b must list one stream count per user");
  }
  return cfg.b;
}

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double best_rate(const ChannelSpec& spec, const std::vector<ZestResult>& runs, int count, double P,
                 std::size_t* which = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  const int m = std::min<int>(count, static_cast<int>(runs.size()));
  for (int j = 0; j < m; ++j) {
    const double r = sum_of(finite_snr_rates(spec, runs[j].tx, P));
    if (r > best) {
      best = r;
      if (which) *which = static_cast<std::size_t>(j);
    }
  }
  return best;
}

}  // namespace

double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"zest", "max_sinr", "sapc", "tdma", "full_power"};
  return names;
}

void validate(const ExperimentConfig& cfg) {
  const auto bad = [](const std::string& msg) { throw Error(ErrorCode::ConfigInvalid, msg); };
  if (cfg.snr_db.empty()) bad("snr_db must not be empty");
  for (std::size_t i = 1; i < cfg.snr_db.size(); ++i) {
    if (!(cfg.snr_db[i] > cfg.snr_db[i - 1])) bad("snr_db must be strictly ascending");
  }
  for (double db : cfg.snr_db) {
    if (!(db > 0.0)) bad("snr_db values must be positive (P > 1)");
  }
  if (cfg.realizations < 1) bad("realizations must be >= 1");
  if (cfg.algorithms.empty()) bad("algorithms must not be empty");
  for (const auto& a : cfg.algorithms) {
    const auto& known = known_algorithms();
    if (std::find(known.begin(), known.end(), a) == known.end()) bad("unknown algorithm '" + a + "'");
  }
  if (cfg.n < 1) bad("n must be >= 1");
  for (int b : cfg.b) {
    if (b < 0 || b > cfg.n) bad("stream counts must lie in [0, n]");
  }
  if (!cfg.channel.file) {
    if (cfg.channel.K < 3) bad("generated channels need K >= 3");
    if (!(cfg.channel.x >= 0.5 && cfg.channel.x <= 1.0)) bad("x must lie in [0.5, 1]");
  }
  if (cfg.zest.max_iter < 1 || cfg.max_sinr.max_iter < 1 || cfg.sapc.max_iter < 1) {
    bad("max_iter must be >= 1");
  }
  if (!(cfg.zest.tol > 0.0) || !(cfg.max_sinr.tol > 0.0) || !(cfg.sapc.tol > 0.0)) {
    bad("tol must be positive");
  }
  if (cfg.inits.low < 1 || cfg.inits.high < 1) bad("initialization counts must be >= 1");
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return config_from_json(doc);
}

// Input files named in a config are resolved against the config's directory.
ExperimentConfig parse_config(const std::string& path) {
  ExperimentConfig cfg = config_from_json(read_json_file(path));
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::optional<std::string>& f) {
    if (f && std::filesystem::path(*f).is_relative()) f = (base / *f).lexically_normal().string();
  };
  resolve(cfg.channel.file);
  resolve(cfg.zest_init);
  return cfg;
}

ChannelSpec realization_channel(const ExperimentConfig& cfg, int i) {
  if (cfg.channel.file) {
    ChannelSpec spec = channel_from_json(read_json_file(*cfg.channel.file));
    if (!spec.theta) spec.theta = Eigen::MatrixXd::Zero(spec.K, spec.K);
    return spec;
  }
  return gen_cyclic_random(cfg.channel.K, cfg.channel.x,
                           derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
}

SweepOutput run_sweep(const ExperimentConfig& cfg, Execution exec, std::ostream* dump) {
  validate(cfg);
  const std::size_t S = cfg.snr_db.size();
  const std::size_t A = cfg.algorithms.size();
  std::optional<TxConfig> fixed_init;
  if (cfg.zest_init) fixed_init = tx_from_json(read_json_file(*cfg.zest_init));
  const ChannelSpec file_channel = cfg.channel.file ? realization_channel(cfg, 0) : ChannelSpec{};

  SweepOutput out;
  out.samples.assign(cfg.realizations,
                     std::vector<std::vector<double>>(S, std::vector<double>(A, 0.0)));
  std::vector<std::string> dumps(cfg.realizations);

  for_each_index(static_cast<std::size_t>(cfg.realizations), exec, [&](std::size_t i) {
    const ChannelSpec spec = cfg.channel.file ? file_channel : realization_channel(cfg, static_cast<int>(i));
    const std::uint64_t base = derive_seed(cfg.seed ^ 0x5eedULL, i);
    const std::vector<int> b = stream_counts(cfg, spec.K);
    const int most = std::max(cfg.inits.low, cfg.inits.high);

    std::vector<ZestResult> zest_runs;
    if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), "zest") != cfg.algorithms.end()) {
      if (fixed_init) {
        zest_runs.push_back(run_zest_from(spec, zest_state_from(spec, *fixed_init), cfg.zest));
      } else {
        for (int j = 0; j < most; ++j) {
          zest_runs.push_back(run_zest(spec, cfg.n, b, derive_seed(base, j), cfg.zest));
        }
      }
    }
    std::ostringstream lines;
    for (std::size_t s = 0; s < S; ++s) {
      const double P = db_to_power(cfg.snr_db[s]);
      const int count = cfg.inits.count(cfg.snr_db[s]);
      for (std::size_t a = 0; a < A; ++a) {
        const std::string& alg = cfg.algorithms[a];
        double value = 0.0;
        if (alg == "zest") {
          std::size_t which = 0;
          value = best_rate(spec, zest_runs, count, P, &which);
          if (dump) {
            Json row;
            row["realization"] = i;
            row["snr_db"] = cfg.snr_db[s];
            row["sum_rate"] = value;
            row["sum_gdof"] = zest_runs[which].gdof.sum();
            row["channel"] = channel_to_json(spec);
            row["tx"] = tx_to_json(zest_runs[which].tx);
            lines << row.dump() << '\n';
          }
        } else if (alg == "max_sinr") {
          double best = -std::numeric_limits<double>::infinity();
          for (int j = 0; j < count; ++j) {
            const auto r = max_sinr(spec, cfg.n, b, P, derive_seed(base, kMaxSinrStream + j), cfg.max_sinr);
            best = std::max(best, r.sum_rate);
          }
          value = best;
        } else if (alg == "sapc") {
          value = sapc(spec, P, cfg.sapc).sum_rate;
        } else if (alg == "tdma") {
          value = tdma_rates(spec, P).sum_rate;
        } else {
          value = full_power_rates(spec, P).sum_rate;
        }
        out.samples[i][s][a] = value;
      }
    }
    dumps[i] = lines.str();
  });
  if (dump) {
    for (const auto& d : dumps) *dump << d;
  }

  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      SweepRow row;
      row.snr_db = cfg.snr_db[s];
      row.algorithm = cfg.algorithms[a];
      row.count = cfg.realizations;
      double mean = 0.0;
      for (int i = 0; i < cfg.realizations; ++i) mean += out.samples[i][s][a];
      mean /= cfg.realizations;
      double var = 0.0;
      for (int i = 0; i < cfg.realizations; ++i) {
        var += (out.samples[i][s][a] - mean) * (out.samples[i][s][a] - mean);
      }
      row.mean = mean;
      row.stddev = cfg.realizations > 1 ? std::sqrt(var / (cfg.realizations - 1)) : 0.0;
      out.rows.push_back(row);
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepOutput& out) {
  os << "snr_db,algorithm,mean_sum_rate,std_sum_rate,n_realizations\n";
  os << std::setprecision(12);
  for (const auto& r : out.rows) {
    os << r.snr_db << ',' << r.algorithm << ',' << r.mean << ',' << r.stddev << ',' << r.count << '\n';
  }
}

std::vector<ConvergeRow> run_converge(const ExperimentConfig& cfg) {
  validate(cfg);
  const ChannelSpec spec = realization_channel(cfg, 0);
  const double P = db_to_power(cfg.snr_db.front());
  const std::vector<int> b = stream_counts(cfg, spec.K);
  const std::uint64_t base = derive_seed(cfg.seed ^ 0x5eedULL, 0);
  std::vector<ConvergeRow> rows;
  for (const auto& alg : cfg.algorithms) {
    if (alg == "zest") {
      ZestState state = cfg.zest_init
                            ? zest_state_from(spec, tx_from_json(read_json_file(*cfg.zest_init)))
                            : zest_init(spec, cfg.n, b, derive_seed(base, 0));
      for (int m = 1; m <= cfg.zest.max_iter; ++m) {
        const double rate = sum_of(finite_snr_rates(spec, state.tx, P));
        state = zest_iterate(state, spec);
        const auto& its = state.trace.iterations;
        rows.push_back({alg, m, rate, its.back().fwd.sum()});
        if (its.size() >= 2 && its.back().fwd.sum() - its[its.size() - 2].fwd.sum() < cfg.zest.tol) {
          break;
        }
      }
    } else {
      BaselineResult r;
      if (alg == "max_sinr") {
        r = max_sinr(spec, cfg.n, b, P, derive_seed(base, kMaxSinrStream), cfg.max_sinr);
      } else if (alg == "sapc") {
        r = sapc(spec, P, cfg.sapc);
      } else if (alg == "tdma") {
        r = tdma_rates(spec, P);
      } else {
        r = full_power_rates(spec, P);
      }
      for (std::size_t m = 0; m < r.trace.size(); ++m) {
        rows.push_back({alg, static_cast<int>(m + 1), r.trace[m], std::nullopt});
      }
    }
  }
  return rows;
}

void write_converge_csv(std::ostream& os, const std::vector<ConvergeRow>& rows) {
  os << "algorithm,iter,sum_rate,sum_gdof\n";
  os << std::setprecision(12);
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.iter << ',' << r.sum_rate << ',';
    if (r.sum_gdof) os << *r.sum_gdof;
    os << '\n';
  }
}

DecomposeReport run_decompose(const ChannelSpec& spec, const std::optional<Decomposition>& dec_in,
                              std::optional<double> threshold,
                              const std::optional<TimDescriptor>& tim_in) {
  validate(spec);
  if (!dec_in && !threshold) {
    throw Error(ErrorCode::ConfigInvalid, "need a decomposition or a threshold");
  }
  const Decomposition dec = dec_in ? *dec_in : threshold_decomposition(spec, *threshold);
  validate(dec, spec);

  DecomposeReport r;
  if (threshold) {
    r.threshold = *threshold;
  } else {
    for (const auto& l : dec.tin_links) r.threshold = std::max(r.threshold, spec.alpha(l.first, l.second));
  }
  const ChannelSpec tin_part = tin_component(spec, dec);
  const ChannelSpec tim_part = tim_component(spec, dec);
  const TinSolution tin = tin_symmetric_gdof(tin_part);
  const TimSolution tim = tim_solution_for(tim_part, tim_in ? *tim_in : detect_tim(tim_part));
  const ComposedScheme scheme = compose(tim, tin, spec);

  r.tin_sym = *std::min_element(tin.d.d.begin(), tin.d.d.end());
  r.tim_sym = *std::min_element(tim.d.d.begin(), tim.d.d.end());
  r.product = r.tin_sym * r.tim_sym;
  r.outer = std::min(r.tin_sym, r.tim_sym);
  r.factor = r.product > 0.0 ? r.outer / r.product : std::numeric_limits<double>::infinity();
  if (r.threshold <= 0.5) r.factor_limit = 1.0 / (1.0 - r.threshold);
  r.claimed = scheme.product;
  r.verified = scheme_gdof(spec, scheme);
  r.ok = verify_scheme(spec, scheme);
  return r;
}

void write_decompose_report(std::ostream& os, const DecomposeReport& r) {
  os << std::setprecision(10);
  os << "tin_sym " << r.tin_sym << '\n';
  os << "tim_sym " << r.tim_sym << '\n';
  os << "product " << r.product << '\n';
  os << "outer_bound " << r.outer << '\n';
  os << "factor " << r.factor << '\n';
  os << "threshold " << r.threshold << '\n';
  if (r.factor_limit) os << "factor_limit " << *r.factor_limit << '\n';
  os << "verified";
  for (double d : r.verified.d) os << ' ' << d;
  os << '\n';
  os << "verify " << (r.ok ? "pass" : "fail") << '\n';
}

}  // namespace timtin
