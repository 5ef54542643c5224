#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace draht {

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Results must be
// written to index-addressed storage so scheduling cannot change output.
// The exception of the lowest failing index is rethrown.
template<typename Fn>
void
parallelFor(size_t n, unsigned threads, Fn&& fn)
{
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; i++)
      fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  const size_t count = std::min<size_t>(threads, n);
  for (size_t t = 0; t < count; t++)
    pool.emplace_back(worker);
  for (auto& t : pool)
    t.join();

  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

}  // namespace draht
