#pragma once

#include <cstddef>
#include <functional>

namespace presslab {

/// Worker count for data-parallel loops. Controlled by the PRESSLAB_THREADS
/// environment variable; defaults to the hardware concurrency.
int thread_count();

/// Run body(i) for i in [0, count) across thread_count() workers.
/// Bodies must write to disjoint slots; iteration order is unspecified but
/// results are deterministic because no reductions happen here.
void parallel_for(size_t count, const std::function<void(size_t)>& body);

} // namespace presslab
