#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mcsp {

/// Serial runs every loop on the calling thread; Parallel lets OpenMP split
/// the independent loops. Both produce identical results.
enum class ExecPolicy { Serial, Parallel };

inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Calls fn(i) for i in [0, count). Iterations must be independent. The first
/// exception thrown by any iteration is rethrown after the loop.
template <typename Fn>
void parallel_for(std::size_t count, ExecPolicy policy, Fn&& fn, std::size_t min_parallel = 2) {
    if (policy == ExecPolicy::Serial || count < min_parallel || worker_count() < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(mcsp_parallel_for_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace mcsp
