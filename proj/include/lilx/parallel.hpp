#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace lilx {

/// Runs fn(i) for i in [0, count) across OpenMP threads. Iterations must be
/// independent; the first exception thrown by any iteration is rethrown
/// after the loop.
template <class Fn>
void parallel_for(std::ptrdiff_t count, Fn&& fn) {
  std::exception_ptr failure;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Number of worker threads parallel_for will use.
int parallel_threads();

}  // namespace lilx
