#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "umbilic/quadrature.hpp"

using namespace umbilic;

namespace {

constexpr double kPi = std::numbers::pi;

double area_density(const PointGeometry&) { return 1.0; }

/// sqrt(det g) from first-order jets, flat ambient space only.
double flat_density(const ImmersionSpec& s, double u, double v) {
  const auto f = s.evaluate(u, v, 1);
  double guu = 0.0, guv = 0.0, gvv = 0.0;
  for (const auto& x : f) {
    guu += x.d(1, 0) * x.d(1, 0);
    guv += x.d(1, 0) * x.d(0, 1);
    gvv += x.d(0, 1) * x.d(0, 1);
  }
  return std::sqrt(guu * gvv - guv * guv);
}

/// Brute-force midpoint sum of the area of {|hring| < eps}, no refinement.
double brute_sublevel_area(const ImmersionSpec& s, double eps, int nu, int nv) {
  const Interval iu = s.sample_u(), iv = s.sample_v();
  const double du = iu.length() / nu, dv = iv.length() / nv;
  CompensatedSum sum;
  for (int i = 0; i < nu; ++i) {
    const double u = iu.lo + (i + 0.5) * du;
    for (int j = 0; j < nv; ++j) {
      const double v = iv.lo + (j + 0.5) * dv;
      if (hring_norm2_at(s, u, v) < eps * eps) sum.add(flat_density(s, u, v) * du * dv);
    }
  }
  return sum.value();
}

}  // namespace

TEST_CASE("compensated summation") {
  CompensatedSum s;
  for (double x : {1.0, 1e100, 1.0, -1e100}) s.add(x);
  CHECK(s.value() == 2.0);
  CompensatedSum t;
  for (int i = 0; i < 10; ++i) t.add(0.1);
  CHECK(t.value() == 1.0);
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridSpec{}.validate());
  CHECK_THROWS_AS((GridSpec{8, 64, 6}.validate()), InvalidInput);
  CHECK_THROWS_AS((GridSpec{64, 64, -1}.validate()), InvalidInput);
  CHECK_THROWS_AS((GridSpec{64, 64, 13}.validate()), InvalidInput);
  const GridSpec half = GridSpec{256, 128, 5}.scaled(0.5);
  CHECK(half.nu == 128);
  CHECK(half.nv == 64);
  CHECK(half.adaptive_depth == 5);
}

TEST_CASE("sphere area and total curvature") {
  const ImmersionSpec s = preset("sphere", {{"r", 1.0}});
  const GridSpec grid{256, 256, 6};
  CHECK(integrate(s, area_density, grid, Region::all()) == doctest::Approx(4 * kPi).epsilon(1e-4));
  const EulerCharacteristic chi = euler_characteristic(s, grid);
  CHECK(chi.rounded == 2);
  CHECK_FALSE(chi.warning);
  CHECK(chi.total_R == doctest::Approx(8 * kPi).epsilon(1e-4));
}

TEST_CASE("torus area and total curvature") {
  const ImmersionSpec t = preset("torus", {{"R", 2.0}, {"r", 1.0}});
  const GridSpec grid{64, 64, 6};
  CHECK(integrate(t, area_density, grid, Region::all()) == doctest::Approx(4 * kPi * kPi * 2.0).epsilon(1e-12));
  const EulerCharacteristic chi = euler_characteristic(t, grid);
  CHECK(chi.rounded == 0);
  CHECK(std::abs(chi.total_R) < 1e-10);
}

TEST_CASE("Euler characteristic of a triaxial ellipsoid") {
  const EulerCharacteristic chi = euler_characteristic(preset("ellipsoid_tri", {}), GridSpec{256, 256, 6});
  CHECK(chi.rounded == 2);
  CHECK(chi.estimate == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("torus has no near-umbilic region at small eps") {
  const ImmersionSpec t = preset("torus", {});
  double min_norm2 = INFINITY;
  for (int i = 0; i < 2000; ++i) min_norm2 = std::min(min_norm2, hring_norm2_at(t, 2 * kPi * i / 2000.0, 0.7));
  CHECK(std::sqrt(min_norm2) > 0.4);
  const auto r = region_integrals(t, {0.1}, GridSpec{64, 64, 6});
  CHECK(r[0].vol_omega_c == 0.0);
  CHECK(r[0].inside_nodes == 0);
  CHECK(r[0].I_grad_H == 0.0);
}

TEST_CASE("a sphere lies entirely in the near-umbilic region") {
  const ImmersionSpec s = preset("sphere", {{"r", 0.8}});
  const auto r = region_integrals(s, {0.5, 0.1}, GridSpec{64, 64, 4});
  for (const auto& row : r) {
    CHECK(row.vol_omega_c == doctest::Approx(row.area).epsilon(1e-14));
    CHECK(row.I_grad_H < 1e-20);
    CHECK(row.I_grad_hring < 1e-20);
    CHECK(row.H_sup == doctest::Approx(2.0 / 0.8));
  }
}

TEST_CASE("near-umbilic area against a one-dimensional oracle") {
  const double a = 1.0, b = 2.0;
  const ImmersionSpec s = preset("ellipsoid_rev", {{"a", a}, {"b", b}});
  const auto rows = region_integrals(s, {0.4, 0.2, 0.1}, GridSpec{256, 256, 6});
  const Interval iu = s.sample_u();
  const int n = 200000;
  const double du = iu.length() / n;
  for (const auto& row : rows) {
    CompensatedSum vol;
    for (int i = 0; i < n; ++i) {
      const double u = iu.lo + (i + 0.5) * du;
      if (hring_norm2_at(s, u, 0.0) < row.eps * row.eps) {
        vol.add(2 * kPi * a * std::sin(u) * std::sqrt(a * a * std::cos(u) * std::cos(u) + b * b * std::sin(u) * std::sin(u)) * du);
      }
    }
    CAPTURE(row.eps);
    CHECK(row.vol_omega_c == doctest::Approx(vol.value()).epsilon(1e-3));
  }
}

TEST_CASE("near-umbilic area against a dense brute-force grid") {
  const ImmersionSpec s = preset("ellipsoid_tri", {});
  const double eps = 0.3;
  const double adaptive = region_integrals(s, {eps}, GridSpec{256, 256, 6})[0].vol_omega_c;
  const double dense = brute_sublevel_area(s, eps, 4096, 256);
  REQUIRE(dense > 0.0);
  CHECK(adaptive == doctest::Approx(dense).epsilon(1e-2));
}

TEST_CASE("near-umbilic area grows with eps") {
  const ImmersionSpec s = preset("graph_bump", {});
  const auto rows = region_integrals(s, {1.0, 0.5, 0.25, 0.1, 0.05}, GridSpec{64, 64, 5});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].vol_omega_c <= rows[i - 1].vol_omega_c);
  }
  CHECK_THROWS_AS(region_integrals(s, {0.1, 0.5}, GridSpec{64, 64, 5}), InvalidInput);
  CHECK_THROWS_AS(region_integrals(s, {1.5}, GridSpec{64, 64, 5}), InvalidInput);
}

TEST_CASE("sub- and superlevel integrals add up to the whole") {
  const ImmersionSpec s = preset("ellipsoid_rev", {});
  const GridSpec grid{64, 64, 6};
  const PointField f = [](const PointGeometry& pg) { return pg.gradH_norm2 + pg.R; };
  for (double eps : {0.5, 0.1}) {
    const double all = integrate(s, f, grid, Region::all_refined_at(eps));
    const double in = integrate(s, f, grid, Region::sublevel(eps));
    const double out = integrate(s, f, grid, Region::superlevel(eps));
    CHECK(in + out == doctest::Approx(all).epsilon(1e-12));
    CHECK(in > 0.0);
  }
}

TEST_CASE("region integrals agree with single-field integration") {
  const ImmersionSpec s = preset("ellipsoid_tri", {});
  const GridSpec grid{64, 64, 5};
  const double eps = 0.25;
  const auto r = region_integrals(s, {eps}, grid)[0];
  auto in = [&](const PointField& f) { return integrate(s, f, grid, Region::sublevel(eps)); };
  CHECK(r.vol_omega_c == doctest::Approx(in(area_density)).epsilon(1e-12));
  CHECK(r.I_grad_hring ==
        doctest::Approx(in([](const PointGeometry& pg) { return pg.nabla_hring_norm2 * pg.hring_norm2; })).epsilon(1e-12));
  CHECK(r.I_grad_H_plain == doctest::Approx(in([](const PointGeometry& pg) { return pg.gradH_norm2; })).epsilon(1e-12));
  CHECK(r.total_R ==
        doctest::Approx(integrate(s, [](const PointGeometry& pg) { return pg.R; }, grid, Region::all())).epsilon(1e-12));
  CHECK(r.area == doctest::Approx(integrate(s, area_density, grid, Region::all())).epsilon(1e-12));
}

TEST_CASE("parallel, serial and reference kernels agree") {
  const ImmersionSpec s = preset("graph_bump", {});
  const GridSpec grid{48, 48, 5};
  const std::vector<double> eps{0.5, 0.2};
  const auto par = region_integrals(s, eps, grid, Execution::Parallel);
  const auto ser = region_integrals(s, eps, grid, Execution::Serial);
  const auto ref = reference::region_integrals(s, eps, grid);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(par[i].vol_omega_c == ser[i].vol_omega_c);
    CHECK(par[i].I_grad_H == ser[i].I_grad_H);
    CHECK(par[i].I_R_hring4 == ser[i].I_R_hring4);
    CHECK(par[i].inside_nodes == ref[i].inside_nodes);
    CHECK(par[i].vol_omega_c == doctest::Approx(ref[i].vol_omega_c).epsilon(1e-12));
    CHECK(par[i].I_grad_hring == doctest::Approx(ref[i].I_grad_hring).epsilon(1e-12));
    CHECK(par[i].I_grad_H == doctest::Approx(ref[i].I_grad_H).epsilon(1e-12));
    CHECK(par[i].total_R == doctest::Approx(ref[i].total_R).epsilon(1e-12));
    CHECK(par[i].max_cond2_excess == doctest::Approx(ref[i].max_cond2_excess).epsilon(1e-12));
  }
  const PointField f = [](const PointGeometry& pg) { return pg.hring_norm2; };
  CHECK(integrate(s, f, grid, Region::superlevel(0.2)) ==
        doctest::Approx(reference::integrate(s, f, grid, Region::superlevel(0.2))).epsilon(1e-12));
}

TEST_CASE("results do not depend on the thread count") {
  const ImmersionSpec s = preset("ellipsoid_tri", {});
  const GridSpec grid{48, 48, 5};
  const int saved = omp_get_max_threads();
  std::vector<std::vector<RegionIntegrals>> runs;
  for (int threads : {1, 2, 3, 4}) {
    omp_set_num_threads(threads);
    runs.push_back(region_integrals(s, {0.3, 0.1}, grid));
  }
  omp_set_num_threads(saved);
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.size(); ++i) {
      CHECK(run[i].vol_omega_c == runs[0][i].vol_omega_c);
      CHECK(run[i].I_grad_hring == runs[0][i].I_grad_hring);
      CHECK(run[i].total_R == runs[0][i].total_R);
    }
  }
}

TEST_CASE("errors inside a parallel field evaluation reach the caller") {
  const ImmersionSpec s = preset("sphere", {});
  const PointField bad = [](const PointGeometry& pg) -> double {
    if (pg.at.u > 2.0) throw SingularEvaluation("test field", pg.at.u, pg.at);
    return 1.0;
  };
  CHECK_THROWS_AS(integrate(s, bad, GridSpec{32, 32, 2}, Region::all()), SingularEvaluation);
  CHECK_THROWS_AS(integrate(s, bad, GridSpec{32, 32, 2}, Region::all(), Execution::Serial), SingularEvaluation);
}

TEST_CASE("Richardson extrapolation on synthetic sequences") {
  auto f = [](double h) { return 3.0 + 0.7 * h * h; };
  const RichardsonEstimate r = richardson(f(0.4), f(0.2), f(0.1));
  REQUIRE(r.order.has_value());
  CHECK(*r.order == doctest::Approx(2.0));
  CHECK(r.error == doctest::Approx(std::abs(f(0.1) - 3.0)));
  CHECK_FALSE(r.unstable);

  const RichardsonEstimate flat = richardson(1.0, 2.0, 2.0);
  CHECK(flat.error == 0.0);
  CHECK_FALSE(flat.unstable);

  const RichardsonEstimate bad = richardson(1.0, 1.1, 1.5);
  CHECK(bad.unstable);
  CHECK_FALSE(bad.order.has_value());
  CHECK(bad.error == doctest::Approx(0.4));
}

TEST_CASE("midpoint rule converges at second order") {
  const ImmersionSpec s = preset("sphere", {});
  const auto rows = convergence_study(s, area_density, Region::all(), {{32, 32, 6}, {64, 64, 6}, {128, 128, 6}});
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].order.has_value());
  REQUIRE(rows[2].order.has_value());
  CHECK(*rows[2].order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(rows[2].value - 4 * kPi) < 3.0 * *rows[2].error_estimate);
  CHECK_THROWS_AS(convergence_study(s, area_density, Region::all(), {{32, 32, 6}, {64, 64, 6}}), InvalidInput);
  CHECK_THROWS_AS(convergence_study(s, area_density, Region::all(), {{32, 32, 6}, {64, 64, 6}, {96, 96, 6}}),
                  InvalidInput);
}
