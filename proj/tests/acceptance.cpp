// Acceptance runner: one PASS/FAIL line per primary criterion, INFO lines for
// context. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "logdet_oracle.hpp"
#include "timtin/baselines.hpp"
#include "timtin/decomposition.hpp"
#include "timtin/experiment.hpp"
#include "timtin/zest.hpp"

using namespace timtin;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& line) { std::printf("INFO %s\n", line.c_str()); }

double min_of(const GdofTuple& t) {
  double m = t[0];
  for (std::size_t k = 1; k < t.size(); ++k) m = std::min(m, t[k]);
  return m;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Outcome decomposition_scheme() {
  const auto t0 = Clock::now();
  const auto spec = five_user_network();
  const auto tx = fixtures::example_scheme();
  const auto closed = gdof_of_config(spec, tx);
  const auto rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
  const auto zf = stream_gdof(spec, tx, rx).per_user;
  double err = 0.0;
  for (int k = 0; k < 5; ++k) err = std::max({err, std::abs(closed[k] - 0.3), std::abs(zf[k] - 0.3)});
  const double secs = seconds_since(t0);
  return {err <= 1e-9 && secs < 1.0, "max |d_k - 0.3| = " + fmt(err) + ", " + fmt(secs) + " s"};
}

Outcome closed_form_receiver() {
  const auto f = fixtures::two_stream();
  const double closed = ((0.0 + 1.0) + (-0.1 + 1.0) - (0.0 + 0.7) - (-0.1 + 0.5)) / 2.0;
  const double got = gdof_of_config(f.spec, f.tx)[0];
  return {std::abs(got - closed) <= 1e-9, "d_1 = " + fmt(got) + ", closed form " + fmt(closed)};
}

Outcome zest_example() {
  const auto t0 = Clock::now();
  const auto spec = fixtures::walkthrough_channel();
  const auto st = zest_state_from(spec, fixtures::walkthrough_init());
  const auto res = run_zest_from(spec, st, {});
  const auto& it = res.trace.iterations.front();
  const std::vector<std::pair<const GdofTuple*, std::vector<double>>> want{
      {&it.fwd, {0.3, 0.2, 0, 0, 0.4}},
      {&it.switch_rev, {0.35, 0.35, 0, 0.1, 0.4}},
      {&it.rev, {0.35, 0.35, 0.1, 0.1, 0.5}},
      {&it.switch_fwd, {0.5, 0.5, 0.5, 0.5, 0.5}}};
  double err = 0.0;
  for (const auto& [got, w] : want)
    for (int k = 0; k < 5; ++k) err = std::max(err, std::abs((*got)[k] - w[k]));
  const double secs = seconds_since(t0);
  const bool ok = err <= 1e-9 && std::abs(res.gdof.sum() - 2.5) <= 1e-9 && secs < 1.0;
  return {ok, "tuple error " + fmt(err) + ", final sum " + fmt(res.gdof.sum()) + " after " +
                  std::to_string(res.trace.iterations.size()) + " cycles, " + fmt(secs) + " s"};
}

Outcome monotone_chain() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2718);
  double worst = 0.0;
  const int runs = 600;
  for (int run = 0; run < runs; ++run) {
    const int K = fixtures::uniform_int(rng, 3, 5);
    const int n = fixtures::uniform_int(rng, 1, 3);
    std::vector<int> b(K);
    for (auto& x : b) x = fixtures::uniform_int(rng, 1, n);
    const auto spec = run % 2 ? fixtures::random_spec(rng, K, 1.2)
                              : gen_cyclic_random(K, fixtures::uniform(rng, 0.5, 1.0), rng());
    const auto res = run_zest(spec, n, b, rng());
    const auto& its = res.trace.iterations;
    for (std::size_t m = 0; m < its.size(); ++m) {
      worst = std::min({worst, its[m].switch_rev.sum() - its[m].fwd.sum(),
                        its[m].rev.sum() - its[m].switch_rev.sum(),
                        its[m].switch_fwd.sum() - its[m].rev.sum()});
      if (m + 1 < its.size()) worst = std::min(worst, its[m + 1].fwd.sum() - its[m].switch_fwd.sum());
    }
  }
  const double secs = seconds_since(t0);
  return {worst >= -1e-9 && secs < 60.0,
          std::to_string(runs) + " runs, worst slack " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome zfsc_equivalence() {
  std::mt19937_64 rng(1618);
  double err = 0.0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    const int K = fixtures::uniform_int(rng, 1, 4);
    const int n = fixtures::uniform_int(rng, 1, 3);
    const auto spec = fixtures::random_spec(rng, K, 1.5);
    const auto tx = fixtures::random_tx(rng, K, n, 2);
    const auto closed = gdof_of_config(spec, tx);
    const auto rx = zfsc_receivers(spec, tx, make_sc_order(tx, ScOrder::Lexicographic));
    const auto zf = stream_gdof(spec, tx, rx).per_user;
    for (int k = 0; k < K; ++k) err = std::max(err, std::abs(closed[k] - zf[k]));
  }
  return {err <= 1e-9, std::to_string(trials) + " configurations, max error " + fmt(err)};
}

Outcome span_scan_oracle() {
  std::mt19937_64 rng(31415);
  double err = 0.0;
  const int trials = 120;
  for (int t = 0; t < trials; ++t) {
    const int n = fixtures::uniform_int(rng, 1, 3);
    const int m = fixtures::uniform_int(rng, 1, 5);
    ExponentSet set;
    for (int i = 0; i < m; ++i) {
      if (i > 0 && fixtures::uniform_int(rng, 0, 3) == 0) {
        set.vectors.push_back(set.vectors[fixtures::uniform_int(rng, 0, i - 1)]);
      } else {
        set.vectors.push_back(fixtures::random_unit(rng, n));
      }
      set.exponents.push_back(0.5 * fixtures::uniform_int(rng, 1, 4));
    }
    err = std::max(err, std::abs(dominant_exponent_sum(set).sum -
                                 oracle::slope(set.vectors, set.exponents)));
  }
  return {err <= 1e-3, std::to_string(trials) + " sets, max |scan - slope| " + fmt(err)};
}

Outcome tin_oracle() {
  std::mt19937_64 rng(4242);
  double err = 0.0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const auto spec = fixtures::random_spec(rng, 3, 1.0);
    err = std::max(err, std::abs(min_of(tin_symmetric_gdof(spec).d) -
                                 fixtures::tin_grid_symmetric(spec)));
  }
  const auto spec = five_user_network();
  const double a = min_of(tin_symmetric_gdof(tin_component(spec, five_user_decomposition(false))).d);
  const double b = min_of(tin_symmetric_gdof(tin_component(spec, five_user_decomposition(true))).d);
  const bool ok = err <= 0.02 && std::abs(a - 0.6) <= 1e-6 && std::abs(b - 2.0 / 3.0) <= 1e-6;
  return {ok, "grid gap " + fmt(err) + " over " + std::to_string(trials) + " specs; example " +
                  fmt(a) + " / improved " + fmt(b)};
}

Outcome neighboring_rings() {
  std::string failed;
  int cases = 0;
  for (int S = 0; S <= 4; ++S)
    for (int M = 0; S + M <= 4; ++M) {
      ++cases;
      const int K = 2 * (S + M) + 3;
      const auto ns = neighboring_achievability(S, M, K, NeighborLayout::Ring);
      const double got = min_of(ns.verified);
      const double want = neighboring_sym_gdof(S, M);
      bool ok = std::abs(got - want) <= 1e-9;
      if (M > S + 1) ok = ok && got > 1.0 / (S + M + 1) + 1e-9;
      if (!ok) {
        failed += " (" + std::to_string(S) + "," + std::to_string(M) + ",K=" + std::to_string(K) +
                  ": " + fmt(got) + " vs " + fmt(want) + ")";
      }
    }
  if (failed.empty()) return {true, std::to_string(cases) + " (S,M) pairs"};
  return {false, "short on" + failed};
}

void neighboring_info() {
  int line_ok = 0, cases = 0;
  for (int S = 0; S <= 4; ++S)
    for (int M = 0; S + M <= 4; ++M) {
      ++cases;
      const auto ns = neighboring_achievability(S, M, 2 * (S + M) + 3, NeighborLayout::Line);
      line_ok += std::abs(min_of(ns.verified) - neighboring_sym_gdof(S, M)) <= 1e-9;
    }
  info("neighboring formula met on line layouts for " + std::to_string(line_ok) + "/" +
       std::to_string(cases) + " pairs (K = 2(S+M)+3)");
  int ring_ok = 0, ring_cases = 0;
  for (int S = 0; S <= 4; ++S)
    for (int M = 0; S + M <= 4; ++M) {
      const int W = M <= S ? S + M : S;
      int K = 2 * (S + M) + 3;
      while (K % (W + 1)) ++K;
      ++ring_cases;
      const auto ns = neighboring_achievability(S, M, K, NeighborLayout::Ring);
      ring_ok += std::abs(min_of(ns.verified) - neighboring_sym_gdof(S, M)) <= 1e-9;
    }
  info("neighboring formula met on rings sized to a multiple of the alignment period for " +
       std::to_string(ring_ok) + "/" + std::to_string(ring_cases) + " pairs");
}

Outcome factor_bounds() {
  std::mt19937_64 rng(99);
  double worst = -1.0;
  const int trials = 120;
  for (int t = 0; t < trials; ++t) {
    const double tl = t % 2 ? 0.3 : 0.5;
    const auto layout = t % 3 ? NeighborLayout::Ring : NeighborLayout::Line;
    const int K = 2 * fixtures::uniform_int(rng, 2, 4);
    const auto spec = fixtures::random_two_level(rng, K, tl, layout);
    const auto fb = factor_bound(spec, QuantizationScheme({0.0, tl}));
    worst = std::max(worst, fb.factor - 1.0 / (1.0 - tl));
  }
  const auto spec = five_user_network();
  const QuantizationScheme q({0.0, 0.5});
  const double a = factor_bound(spec, q, five_user_decomposition(false), tim::FiveUserCycle{}).factor;
  const double b = factor_bound(spec, q, five_user_decomposition(true), tim::FiveUserCycle{}).factor;
  const bool ok = worst <= 1e-9 && std::abs(a - 5.0 / 3.0) <= 1e-6 && std::abs(b - 1.5) <= 1e-6;
  return {ok, std::to_string(trials) + " instances, worst factor - bound " + fmt(worst) +
                  "; example factors " + fmt(a) + ", " + fmt(b)};
}

double fitted_slope(const std::vector<double>& db, const std::vector<double>& rate) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    mx += std::log2(db_to_power(db[i]));
    my += rate[i];
  }
  mx /= db.size();
  my /= db.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double x = std::log2(db_to_power(db[i])) - mx;
    sxy += x * (rate[i] - my);
    sxx += x * x;
  }
  return sxy / sxx;
}

Outcome cyclic_sweep() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.channel = {std::nullopt, 5, 0.5};
  cfg.realizations = 20;
  cfg.snr_db = {40, 50, 60};
  cfg.algorithms = {"zest", "tdma", "full_power", "sapc"};
  const auto out = run_sweep(cfg);
  auto mean = [&](const std::string& alg, double db) {
    for (const auto& r : out.rows)
      if (r.algorithm == alg && r.snr_db == db) return r.mean;
    return std::nan("");
  };
  auto slope = [&](const std::string& alg) {
    std::vector<double> rates;
    for (double db : cfg.snr_db) rates.push_back(mean(alg, db));
    return fitted_slope(cfg.snr_db, rates);
  };
  const double z = mean("zest", 50), t = mean("tdma", 50), f = mean("full_power", 50);
  const double sz = slope("zest"), ss = slope("sapc");
  for (double db : cfg.snr_db) {
    info("cyclic model " + fmt(db) + " dB mean sum-rate: zest " + fmt(mean("zest", db)) + ", sapc " +
         fmt(mean("sapc", db)) + ", tdma " + fmt(mean("tdma", db)) + ", full_power " +
         fmt(mean("full_power", db)));
  }
  const double secs = seconds_since(t0);
  const bool ok = z > t && z > f && sz > ss && secs < 600.0;
  return {ok, "50 dB zest " + fmt(z) + " vs tdma " + fmt(t) + ", full_power " + fmt(f) +
                  "; slope zest " + fmt(sz) + " vs sapc " + fmt(ss) + "; " + fmt(secs) + " s"};
}

Outcome igpc_monotone() {
  std::mt19937_64 rng(5150);
  int bad = 0;
  const int trials = 150;
  for (int t = 0; t < trials; ++t) {
    const int K = fixtures::uniform_int(rng, 2, 6);
    const auto spec = fixtures::random_spec(rng, K, 1.2);
    const auto res = igpc(spec);
    for (std::size_t m = 1; m < res.trace.size(); ++m)
      for (int k = 0; k < K; ++k) bad += res.trace[m][k] < res.trace[m - 1][k] - 1e-9;
  }
  return {bad == 0, std::to_string(trials) + " specs, " + std::to_string(bad) + " decreases"};
}

}  // namespace

int main() {
  report("decomposition-example scheme gives 0.3 per user", decomposition_scheme);
  report("two-stream receiver closed form", closed_form_receiver);
  report("ZEST worked example", zest_example);
  report("ZEST monotone chain", monotone_chain);
  report("ZF-SC equals closed-form GDoF", zfsc_equivalence);
  report("span scan vs log-det slope", span_scan_oracle);
  report("TIN symmetric value vs power grid", tin_oracle);
  report("neighboring formula on rings K = 2(S+M)+3", neighboring_rings);
  neighboring_info();
  report("factor bound", factor_bounds);
  report("cyclic-model sum-rate reproduction", cyclic_sweep);
  report("iGPC monotone GDoF trace", igpc_monotone);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
