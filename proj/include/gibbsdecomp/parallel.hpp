#pragma once

#include <cstddef>
#include <functional>

namespace gibbsdecomp {

// Worker count: GIBBS_DECOMP_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(k) for every k in [0, count). Iterations may run on different
// threads in any order; callers write results into per-k slots and reduce
// afterwards so outputs do not depend on scheduling. The first exception
// thrown by any iteration is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace gibbsdecomp
