#pragma once

// Deterministic fan-out: results land at their input index, so the outcome
// never depends on the thread count. STIELTJES_THREADS sets the degree
// (default: hardware concurrency; 1 disables threading).

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace stieltjes::detail {

inline unsigned thread_count() {
  if (const char *env = std::getenv("STIELTJES_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1)
        return static_cast<unsigned>(n);
    } catch (const std::exception &) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = f(in[i]). The first exception thrown by any task is rethrown
/// after all workers have joined.
template <class In, class F>
auto parallel_map(const std::vector<In> &in, F &&f) -> std::vector<decltype(f(in.front()))> {
  using Out = decltype(f(in.front()));
  std::vector<Out> out(in.size());
  const unsigned workers = std::min<std::size_t>(thread_count(), in.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i)
      out[i] = f(in[i]);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(in.size());
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < in.size();) {
      try {
        out[i] = f(in[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

} // namespace stieltjes::detail
