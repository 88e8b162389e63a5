#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace loadshift {

/// Runs body(i) for i in [0, n). When use_parallel is true and the build has
/// OpenMP, iterations are distributed across threads; otherwise they run
/// serially in order. Bodies must only write to iteration-private slots so
/// the two modes produce identical results.
template <typename Body>
void parallel_for(std::size_t n, bool use_parallel, const Body& body) {
#ifdef _OPENMP
  if (use_parallel) {
    #pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)use_parallel;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace loadshift
