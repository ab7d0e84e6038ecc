#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace acbr::detail {

inline int resolve_threads(int threads)
{
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n) across `threads` OpenMP threads. The first
/// exception thrown by any iteration is rethrown after the loop.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn)
{
    std::exception_ptr error;
    std::mutex error_mutex;
    auto const count = static_cast<std::ptrdiff_t>(n);
    [[maybe_unused]] int const workers = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace acbr::detail
