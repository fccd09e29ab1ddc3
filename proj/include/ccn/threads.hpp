#pragma once

#include <functional>

namespace ccn {

/// Worker cap: CCN_THREADS when set, otherwise hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [0, n) across workers. Each index writes only its own
/// output slot, so results are deterministic regardless of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace ccn
