#include "zollfunk/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "zollfunk/errors.hpp"

namespace zollfunk {

namespace {
std::atomic<int> g_cap{1};
}

void set_thread_cap(int threads) {
  if (threads < 1) throw UsageError("thread cap must be >= 1");
  g_cap = threads;
}

int thread_cap() { return g_cap; }

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int nt = std::min(g_cap.load(), count);
  if (nt <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  const int block = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const int lo = t * block;
    const int hi = std::min(count, lo + block);
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed) std::rethrow_exception(err);
}

}  // namespace zollfunk
