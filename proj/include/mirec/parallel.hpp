#pragma once

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace mirec {

/// Worker-thread budget: MIREC_THREADS caps it when set; otherwise the
/// hardware concurrency (at least 1).
inline unsigned thread_budget() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("MIREC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v < static_cast<long>(n))
      n = static_cast<unsigned>(v);
    else if (end != env && v < 1)
      n = 1;
  }
  return n;
}

/// Runs f(i) for i = 0..count-1 across the thread budget with a static
/// partition. Callers keep determinism by writing results into slot i only.
/// The first exception thrown by any worker is rethrown here.
template <class F>
inline void parallel_for(std::size_t count, F&& f) {
  const unsigned budget = thread_budget();
  if (count == 0) return;
  if (budget <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(budget, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t i = w; i < count; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mirec
