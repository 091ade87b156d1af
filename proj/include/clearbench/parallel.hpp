#ifndef CLEARBENCH_PARALLEL_HPP
#define CLEARBENCH_PARALLEL_HPP

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace clearbench {

// Every parallel kernel in this project also runs in Serial mode; the two
// modes must produce bit-identical results. Kernels write per-index results
// into preallocated slots and reductions happen afterwards in index order,
// so the only thing Parallel changes is wall time.
enum class ExecMode { Serial, Parallel };

template <typename Fn>
void for_each_index(std::size_t n, ExecMode mode, Fn&& fn) {
#if defined(_OPENMP)
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace clearbench

#endif  // CLEARBENCH_PARALLEL_HPP
