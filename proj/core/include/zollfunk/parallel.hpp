#pragma once

#include <functional>

namespace zollfunk {

/// Global parallelism cap (default 1).  Work items are indexed and
/// independent; each index produces the same bits regardless of the thread
/// count, so results never depend on the cap.
void set_thread_cap(int threads);
int thread_cap();

/// Runs fn(i) for i in [0, count) over contiguous blocks on up to
/// thread_cap() threads.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace zollfunk
