#ifndef CASCADELAB_THREADS_HPP
#define CASCADELAB_THREADS_HPP

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascadelab {

// 0 means "auto": CASCADE_LAB_THREADS env var if set, else all cores.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CASCADE_LAB_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace cascadelab

#endif
