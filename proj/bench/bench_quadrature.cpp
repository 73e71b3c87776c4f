// Wall-clock comparison of the OpenMP quadrature kernel, the same kernel run
// serially, and the naive serial reference.
//
//   bench_quadrature [preset] [grid] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "umbilic/quadrature.hpp"

using namespace umbilic;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, dt);
  }
  return best;
}

bool same(const std::vector<RegionIntegrals>& a, const std::vector<RegionIntegrals>& b, double rel) {
  auto close = [rel](double x, double y) { return std::abs(x - y) <= rel * (1.0 + std::abs(x)); };
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!close(a[k].vol_omega_c, b[k].vol_omega_c) || !close(a[k].I_grad_hring, b[k].I_grad_hring) ||
        !close(a[k].I_grad_H, b[k].I_grad_H) || !close(a[k].area, b[k].area)) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string name = argc > 1 ? argv[1] : "ellipsoid_rev";
  const int n = argc > 2 ? std::atoi(argv[2]) : 128;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
  const ImmersionSpec spec = preset(name, {});
  const GridSpec grid{n, n, 6};
  const std::vector<double> eps{0.5, 0.25, 0.1, 0.05};

  std::vector<RegionIntegrals> par, ser, ref;
  const double t_par = best_of(repeats, [&] { par = region_integrals(spec, eps, grid, Execution::Parallel); });
  const double t_ser = best_of(repeats, [&] { ser = region_integrals(spec, eps, grid, Execution::Serial); });
  const double t_ref = best_of(repeats, [&] { ref = reference::region_integrals(spec, eps, grid); });

  std::printf("%s, grid %dx%d, depth %d, %zu eps levels, %d threads\n", name.c_str(), n, n, grid.adaptive_depth,
              eps.size(), omp_get_max_threads());
  std::printf("  %-10s %10.4f s\n", "parallel", t_par);
  std::printf("  %-10s %10.4f s  (%.2fx)\n", "serial", t_ser, t_ser / t_par);
  std::printf("  %-10s %10.4f s  (%.2fx)\n", "reference", t_ref, t_ref / t_par);
  const bool bitwise = same(par, ser, 0.0);
  const bool agrees = same(par, ref, 1e-12);
  std::printf("  parallel == serial bitwise: %s\n", bitwise ? "yes" : "NO");
  std::printf("  parallel ~ reference (1e-12): %s\n", agrees ? "yes" : "NO");
  return bitwise && agrees ? 0 : 1;
}
