#pragma once

#include <algorithm>
#include <cstdlib>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcrm {

namespace detail {
inline int initial_worker_count() {
    if (const char* env = std::getenv("LCRM_NUM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline int& worker_count_ref() {
    static int n = initial_worker_count();
    return n;
}
}  // namespace detail

inline int worker_count() { return detail::worker_count_ref(); }
inline void set_worker_count(int n) { detail::worker_count_ref() = std::max(1, n); }

/// Parallel loop over [begin, end). The body must write disjoint locations so the
/// result is independent of scheduling.
template <class F>
inline void parallel_for(int begin, int end, F&& body) {
#ifdef _OPENMP
    if (worker_count() > 1 && end - begin > 1) {
#pragma omp parallel for num_threads(worker_count()) schedule(static)
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
#endif
    for (int i = begin; i < end; ++i) body(i);
}

/// Deterministic reduction: per-index partials are computed in parallel and merged
/// in index order, so the result does not depend on the worker count.
template <class F>
inline double ordered_sum(int begin, int end, F&& partial) {
    int n = end - begin;
    if (n <= 0) return 0.0;
    std::vector<double> parts(static_cast<size_t>(n), 0.0);
    parallel_for(begin, end, [&](int i) { parts[static_cast<size_t>(i - begin)] = partial(i); });
    double total = 0.0;
    for (double v : parts) total += v;
    return total;
}

template <class F>
inline double ordered_max(int begin, int end, F&& partial) {
    int n = end - begin;
    if (n <= 0) return 0.0;
    std::vector<double> parts(static_cast<size_t>(n), 0.0);
    parallel_for(begin, end, [&](int i) { parts[static_cast<size_t>(i - begin)] = partial(i); });
    double m = parts[0];
    for (double v : parts) m = std::max(m, v);
    return m;
}

}  // namespace lcrm
