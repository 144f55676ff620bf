#include "core/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

namespace sdg {

int max_threads() {
  static const int cached = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("SDG_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1) n = std::min(n, cap);
      } catch (const std::exception&) {
        // ignore malformed values, keep hardware default
      }
    }
    return n;
  }();
  return cached;
}

void parallel_for(int n, const std::function<void(int)>& fn, int threads) {
  if (n <= 0) return;
  if (threads <= 0) threads = max_threads();
  threads = std::min(threads, n);

  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::thread> workers;
  workers.reserve(threads);
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    workers.emplace_back([&, t, begin, end] {
      try {
        for (int i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sdg
