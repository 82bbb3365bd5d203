#include "pta/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pta {

int default_thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int env_thread_count() {
  const char* env = std::getenv("PTA_SYNTH_THREADS");
  if (!env || !*env) return default_thread_count();
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0) return default_thread_count();
  if (v == 0) return 1;
  return static_cast<int>(v > 256 ? 256 : v);
}

}  // namespace pta
