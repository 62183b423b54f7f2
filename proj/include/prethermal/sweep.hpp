#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace prethermal {

/// Worker count used when the caller asks for 0.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs job(i) for i in [0, n) on a bounded pool of `workers` threads.
/// Jobs are claimed in index order from a shared counter; results must be
/// written by the job into caller-owned slot i, so the outcome never
/// depends on scheduling. Exceptions are captured per index.
template <class Job>
std::vector<std::exception_ptr> run_indexed(std::size_t n, unsigned workers, Job&& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count =
      static_cast<unsigned>(std::min<std::size_t>(workers == 0 ? default_workers() : workers, n));
  if (count <= 1) {
    worker();
    return errors;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  }
  return errors;
}

}  // namespace prethermal
