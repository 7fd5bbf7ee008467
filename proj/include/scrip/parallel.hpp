#pragma once

#include <cstdint>
#include <exception>
#include <utility>

#ifdef SCRIP_HAS_OPENMP
#include <omp.h>
#endif

namespace scrip::parallel {

inline bool enabled() {
#ifdef SCRIP_HAS_OPENMP
  return true;
#else
  return false;
#endif
}

inline int max_threads() {
#ifdef SCRIP_HAS_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int count) {
#ifdef SCRIP_HAS_OPENMP
  if (count > 0) omp_set_num_threads(count);
#else
  (void)count;
#endif
}

/// Parallel loop over [0, count). Each index must write only its own slots;
/// results are then independent of thread count and schedule. Exceptions are
/// captured and the first one rethrown after the loop completes.
template <class F>
void for_index(std::int64_t count, F&& f) {
  std::exception_ptr error = nullptr;
#ifdef SCRIP_HAS_OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
#else
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      f(i);
    } catch (...) {
      if (!error) error = std::current_exception();
    }
  }
#endif
  if (error) std::rethrow_exception(error);
}

}  // namespace scrip::parallel
