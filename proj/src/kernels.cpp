#include "rbopt/kernels.hpp"

#include <omp.h>

namespace rbopt::kern {

namespace {
int g_workers = 0;
}

void set_workers(int n) {
  g_workers = n;
  if (n > 0) {
    omp_set_num_threads(n);
  }
}

int workers() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

}  // namespace rbopt::kern
