#include "nct/parallel.hpp"

#include <stdexcept>

namespace nct {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
  if (threads < 1) throw std::invalid_argument("thread count must be positive");
  g_threads = threads;
}

int thread_count() { return g_threads; }

}  // namespace nct
