#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace timtin {

enum class Execution { Serial, Parallel };

/// Worker cap: TIMTIN_THREADS when set, otherwise the OpenMP default.
int worker_count();

/// Runs body(i) for i in [0, count). Each index writes only its own output
/// slot, so the serial and parallel paths produce identical results.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  if (exec == Execution::Serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
#else
  for (std::size_t i = 0; i < count; ++i) body(i);
#endif
}

/// Deterministic per-task seed derived from a base seed (SplitMix64 step).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace timtin
