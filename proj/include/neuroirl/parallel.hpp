#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace neuroirl {

// Worker cap for parallel regions. NEURO_IRL_THREADS, when set to a positive
// integer, bounds the number of OpenMP workers; otherwise the runtime default
// applies. Parallel and serial execution produce bit-identical results, so
// the cap only affects wall-clock time.
inline int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("NEURO_IRL_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

}  // namespace neuroirl
