#pragma once

#include <cstddef>

namespace subdiff::par {

// Runs f(i) for i in [0, n). Each index writes only its own outputs, so
// results are bit-identical whether the loop runs serial or parallel.
template <class F>
void for_each_index(std::ptrdiff_t n, bool parallel, F&& f) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
}

} // namespace subdiff::par
