// Timing comparison of the OpenMP kernels against their serial references.

#include <cstdio>
#include <random>

#include <omp.h>

#include "polyrig/fixtures.hpp"
#include "polyrig/geometry.hpp"
#include "polyrig/rigidity.hpp"
#include "polyrig/wachspress.hpp"

using namespace polyrig;

namespace {

template <typename F>
double time_of(F&& fn, int repeats = 3) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const double t0 = omp_get_wtime();
    fn();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::mt19937_64 rng(7);

  {
    Polytope P = random_polytope(5, 16, rng);
    HPolytope H = polar_dual(P);
    volatile double sink = 0.0;
    const double ts = time_of([&] { sink = volume_serial(H); });
    const double tp = time_of([&] { sink = volume(H); });
    (void)sink;
    report("dual volume (d=5, n=16)", ts, tp);
  }

  {
    Polytope P = random_polytope(3, 12, rng);
    const double ts = time_of([&] { izmestiev_fd_serial(P, 1e-3); }, 2);
    const double tp = time_of([&] { izmestiev_fd(P, 1e-3); }, 2);
    report("fd hessian (d=3, n=12)", ts, tp);
  }

  {
    Polytope P = hypercube(3);
    GraphEmbedding skel = skeleton(P);
    const double ts = time_of([&] { probe_embedding_serial(skel, 400, 1e-2, 11); }, 2);
    const double tp = time_of([&] { probe_embedding(skel, 400, 1e-2, 11); }, 2);
    report("probe (cube, 400 trials)", ts, tp);
  }

  return 0;
}
