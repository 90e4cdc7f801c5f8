#include "dzo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace dzo {

int max_threads() noexcept { return std::max(1, omp_get_max_threads()); }

int sweep_threads() noexcept {
  int threads = max_threads();
  if (const char* env = std::getenv("DZO_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      threads = std::min<long>(threads, cap);
    }
  }
  return threads;
}

}  // namespace dzo
