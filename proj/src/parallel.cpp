#include "timtin/parallel.hpp"

#include <cstdlib>
#include <string>

namespace timtin {

int worker_count() {
  int workers = 1;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("TIMTIN_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < workers) workers = cap;
    } catch (const std::exception&) {
      // unparsable values leave the default in place
    }
  }
  return workers < 1 ? 1 : workers;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace timtin
