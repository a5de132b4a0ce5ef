// Compares the serial and parallel grid scans on a moderately sized block
// map. Not a correctness test (the scan-consistency suite covers equality);
// this just reports wall time and the resulting speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef QMAPS_HAVE_OPENMP
#include <omp.h>
#endif

#include "qmaps/kernel.hpp"
#include "qmaps/qcorners.hpp"

using namespace qmaps;

namespace {

double run_once(const MatrixMap& map, const std::vector<double>& grid, Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  const auto values = detail::scan_resolvent_choi(map, nullptr, grid, exec);
  const auto stop = std::chrono::steady_clock::now();
  // fold the values so the work cannot be optimized away
  double acc = 0;
  for (double v : values) acc += v;
  (void)acc;
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

double best_of(const MatrixMap& map, const std::vector<double>& grid, Exec exec, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) best = std::min(best, run_once(map, grid, exec));
  return best;
}

}  // namespace

int main() {
  Rng rng(7u);
  const EigenvalueList mu{{0.5, 0.3, 0.2}};
  CMatrix omega = CMatrix::Zero(3, 3);
  for (Index i = 0; i < 3; ++i) omega(i, i) = mu.values[static_cast<std::size_t>(i)];
  QCornerParams params;
  params.k = 3;
  params.n = 4;
  params.nprime = 4;
  params.x = random_unitary_commuting_with(omega, rng);
  params.e = random_contraction(1, 1, rng);
  params.lambda = Complex(0.4, 0.3);
  const MatrixMap map = assemble_template(mu, params).to_map();

  const std::vector<double> grid = t_grid(400, 1e-4, 1e6);

  std::printf("scan of %d grid points on an %ld x %ld action matrix\n",
              static_cast<int>(grid.size()), static_cast<long>(map.action().rows()),
              static_cast<long>(map.action().cols()));
#ifdef QMAPS_HAVE_OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both runs are serial\n");
#endif

  (void)best_of(map, grid, Exec::serial, 1);  // warm up allocators and caches
  const double serial = best_of(map, grid, Exec::serial, 3);
  const double parallel = best_of(map, grid, Exec::parallel, 3);

  std::printf("%-10s %10.2f ms\n", "serial", serial);
  std::printf("%-10s %10.2f ms\n", "parallel", parallel);
  std::printf("speedup    %10.2fx\n", parallel > 0 ? serial / parallel : 0.0);
  return 0;
}
