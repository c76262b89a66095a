#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nct {

/// Process-wide worker count for data-parallel loops (default 1).
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, count). Each index writes only its own output slot, so results
/// do not depend on scheduling. The exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  std::size_t workers = static_cast<std::size_t>(thread_count());
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (workers > count) workers = count;
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nct
