// Serial vs OpenMP timing for the two parallel kernels: realizations of a
// sweep and random ZEST initializations. Outputs must agree bit for bit.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <vector>

#include "timtin/experiment.hpp"

using namespace timtin;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void line(const char* name, double serial, double parallel, bool same) {
  std::cout << name << ": serial " << serial << " s, parallel " << parallel << " s, speedup "
            << serial / parallel << (same ? ", outputs identical\n" : ", OUTPUTS DIFFER\n");
}

}  // namespace

int main(int argc, char** argv) {
  const int realizations = argc > 1 ? std::atoi(argv[1]) : 8;
  std::cout << "workers " << worker_count() << '\n';
  bool all_same = true;

  ExperimentConfig cfg;
  cfg.realizations = realizations;
  cfg.snr_db = {30.0, 50.0};
  SweepOutput a, b;
  const double ts = seconds([&] { a = run_sweep(cfg, Execution::Serial); });
  const double tp = seconds([&] { b = run_sweep(cfg, Execution::Parallel); });
  const bool same_sweep = a.samples == b.samples;
  line("sweep", ts, tp, same_sweep);
  all_same = all_same && same_sweep;

  const ChannelSpec spec = gen_cyclic_random(5, 0.5, 7);
  std::vector<std::uint64_t> seeds;
  for (int j = 0; j < 64; ++j) seeds.push_back(derive_seed(11, j));
  const std::vector<int> streams(5, 1);
  MultiInitResult ms, mp;
  const double zs = seconds([&] {
    ms = multi_init_best(spec, 2, streams, seeds, {}, 1e5, Selection::SumGdof, Execution::Serial);
  });
  const double zp = seconds([&] {
    mp = multi_init_best(spec, 2, streams, seeds, {}, 1e5, Selection::SumGdof, Execution::Parallel);
  });
  const bool same_zest = ms.best == mp.best && ms.sum_rates == mp.sum_rates;
  line("zest inits", zs, zp, same_zest);
  all_same = all_same && same_zest;

  return all_same ? 0 : 1;
}
