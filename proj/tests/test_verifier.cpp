#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "umbilic/verifier.hpp"

using namespace umbilic;

namespace {

constexpr double kPi = std::numbers::pi;

/// 2 pi int over u of field(u) sqrt(det g) for an ellipsoid of revolution,
/// restricted to |hring| < eps.
double revolution_integral(const ImmersionSpec& s, double eps, const PointField& field, int n = 20000) {
  const double a = s.params().at("a"), b = s.params().at("b");
  const Interval iu = s.sample_u();
  const double du = iu.length() / n;
  CompensatedSum sum;
  for (int i = 0; i < n; ++i) {
    const double u = iu.lo + (i + 0.5) * du;
    const PointGeometry pg = point_geometry(s, u, 0.0);
    if (pg.hring_norm2 >= eps * eps) continue;
    const double density = a * std::sin(u) * std::hypot(a * std::cos(u), b * std::sin(u));
    sum.add(2 * kPi * field(pg) * density * du);
  }
  return sum.value();
}

}  // namespace

TEST_CASE("trend labels") {
  CHECK(classify_trend({3.0, 2.0, 1.0}) == "decreasing");
  CHECK(classify_trend({1.0, 2.0, 3.0}) == "increasing");
  CHECK(classify_trend({1.0, 3.0, 2.0}) == "non-monotone");
  CHECK(classify_trend({5.0, 5.0 + 1e-4, 5.0 - 1e-4}) == "plateau");
  CHECK(classify_trend({1e-59, 2e-59, 3e-59}) == "plateau");
  CHECK(classify_trend({2.0, 2.0, 1.0}) == "non-monotone");
}

TEST_CASE("constant and ladder validation") {
  CHECK(theorem_constant(2.0, 0.0) == 3.0);
  CHECK(theorem_constant(0.0, -1.5) == 7.0);
  CHECK_NOTHROW(validate_ladder({1.0, 0.5, 0.1}));
  CHECK_THROWS_AS(validate_ladder({}), InvalidInput);
  CHECK_THROWS_AS(validate_ladder({1.5, 0.5}), InvalidInput);
  CHECK_THROWS_AS(validate_ladder({0.5, 0.0}), InvalidInput);
  CHECK_THROWS_AS(validate_ladder({0.1, 0.5}), InvalidInput);
  CHECK_THROWS_AS(validate_ladder({0.5, 0.5}), InvalidInput);
}

TEST_CASE("unit sphere has margin 4 pi") {
  VerifyOptions opt;
  opt.grid = {128, 128, 4};
  opt.corollary_eps0 = 0.1;
  const TheoremReport rep = verify_prel(preset("sphere", {{"r", 1.0}}), {0.5, 0.1}, opt);
  CHECK(rep.pass);
  CHECK(rep.verdict() == "PASS");
  CHECK(rep.chi.rounded == 2);
  CHECK(rep.H_sup == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.C_const == doctest::Approx(3.0).epsilon(1e-9));
  REQUIRE(rep.tolerance_grids.size() == 2);
  CHECK(rep.tolerance_grids[0].nu == 32);
  CHECK(rep.tolerance_grids[1].nu == 64);
  for (const TheoremRow& row : rep.rows) {
    CHECK(row.margin == doctest::Approx(4 * kPi).epsilon(1e-2));
    CHECK(std::abs(row.term1) < 1e-15);
    CHECK(std::abs(row.term2) < 1e-15);
    CHECK(row.rhs == doctest::Approx(8 * kPi));
    REQUIRE(row.min_C.has_value());
    CHECK(*row.min_C == doctest::Approx(2.0).epsilon(1e-2));
  }
  REQUIRE(rep.corollary.has_value());
  const CorollaryReport& cor = *rep.corollary;
  CHECK_FALSE(cor.refusal.has_value());
  CHECK_FALSE(cor.region_empty);
  CHECK(cor.cond1_holds);
  CHECK(cor.cond2_holds);
  CHECK(cor.cond3_holds);
  CHECK(cor.implies_positive_umbilic_measure);
}

TEST_CASE("torus rows are all zero and the corollary is refused") {
  VerifyOptions opt;
  opt.grid = {64, 64, 4};
  opt.corollary_eps0 = 0.1;
  const TheoremReport rep = verify_prel(preset("torus", {}), {0.25, 0.05}, opt);
  CHECK(rep.chi.rounded == 0);
  CHECK(rep.pass);
  for (const TheoremRow& row : rep.rows) {
    CHECK(row.vol_omega_c == 0.0);
    CHECK(row.term1 == 0.0);
    CHECK(row.term2 == 0.0);
    CHECK(std::abs(row.rhs) < 1e-9);
    CHECK_FALSE(row.min_C.has_value());
  }
  REQUIRE(rep.corollary.has_value());
  REQUIRE(rep.corollary->refusal.has_value());
  CHECK_FALSE(rep.corollary->implies_positive_umbilic_measure);
}

TEST_CASE("scaled terms against a rotational oracle") {
  const ImmersionSpec s = preset("ellipsoid_rev", {{"a", 1.0}, {"b", 2.0}});
  VerifyOptions opt;
  opt.grid = {256, 256, 6};
  opt.tol_margin = 1.0;
  const double eps = 0.5;
  const TheoremReport rep = verify_prel(s, {eps}, opt);
  const TheoremRow& row = rep.rows.front();
  const double e4 = std::pow(eps, 4);
  const double vol = revolution_integral(s, eps, [](const PointGeometry&) { return 1.0; });
  const double t1 = 2.0 / e4 * revolution_integral(s, eps, [](const PointGeometry& pg) {
                      return pg.nabla_hring_norm2 * pg.hring_norm2;
                    });
  const double t2 = 1.0 / e4 * revolution_integral(s, eps, [](const PointGeometry& pg) {
                      return pg.gradH_norm2 * pg.hring_norm2;
                    });
  CHECK(row.vol_omega_c == doctest::Approx(vol).epsilon(2e-3));
  CHECK(row.term1 == doctest::Approx(t1).epsilon(2e-3));
  CHECK(row.term2 == doctest::Approx(t2).epsilon(2e-3));
  CHECK(row.lhs == doctest::Approx(rep.C_const * row.vol_omega_c));
  CHECK(row.rhs == doctest::Approx(row.term1 - row.term2 + 8 * kPi));
  CHECK(row.sharp_gap == doctest::Approx(row.term2 - row.term1 - 8 * kPi));
  CHECK(row.tol_margin == 1.0);
  CHECK(rep.tolerance_grids.empty());
  CHECK_FALSE(rep.H_sup_change.has_value());
}

TEST_CASE("balance identity holds up to quadrature error") {
  VerifyOptions opt;
  opt.grid = {256, 256, 6};
  opt.tol_margin = 1.0;
  for (const char* name : {"ellipsoid_rev", "ellipsoid_tri", "graph_bump"}) {
    const TheoremReport rep = verify_prel(preset(name, {}), {0.5, 0.25}, opt);
    for (const TheoremRow& row : rep.rows) {
      CAPTURE(name);
      CAPTURE(row.eps);
      const double scale = std::abs(row.term1) + std::abs(row.term2) + 4 * kPi * std::abs(rep.chi.rounded);
      CHECK(std::abs(row.balance_residual) / scale < 1e-2);
    }
  }
}

TEST_CASE("H_sup override changes the constant only") {
  VerifyOptions opt;
  opt.grid = {64, 64, 4};
  opt.tol_margin = 0.1;
  const ImmersionSpec s = preset("ellipsoid_rev", {});
  const TheoremReport base = verify_prel(s, {0.5}, opt);
  opt.hsup_override = 10.0;
  const TheoremReport over = verify_prel(s, {0.5}, opt);
  CHECK(over.H_sup_overridden);
  CHECK(over.H_sup == 10.0);
  CHECK(over.C_const == 51.0);
  CHECK(over.rows[0].term1 == base.rows[0].term1);
  CHECK(over.rows[0].lhs == doctest::Approx(51.0 * base.rows[0].vol_omega_c));
  opt.hsup_override = -1.0;
  CHECK_THROWS_AS(verify_prel(s, {0.5}, opt), InvalidInput);
}

TEST_CASE("input checks") {
  const ImmersionSpec s = preset("sphere", {});
  VerifyOptions opt;
  opt.grid = {32, 32, 4};
  CHECK_THROWS_AS(verify_prel(s, {0.5}, opt), InvalidInput);
  opt.tol_margin = 0.0;
  CHECK_THROWS_AS(verify_prel(s, {0.5}, opt), InvalidInput);
  opt.tol_margin = 0.1;
  CHECK_NOTHROW(verify_prel(s, {0.5}, opt));
  opt.corollary_eps0 = 1.5;
  CHECK_THROWS_AS(verify_prel(s, {0.5}, opt), InvalidInput);
  CHECK_THROWS_AS(verify_prel(s, {0.5, 2.0}, opt), InvalidInput);
}

TEST_CASE("corollary on a non-umbilic sphere-type surface") {
  const CorollaryReport cor = corollary_check(preset("ellipsoid_rev", {}), 0.1, {0.5, 0.25, 0.1}, {64, 64, 5});
  CHECK_FALSE(cor.refusal.has_value());
  CHECK(cor.chi_rounded == 2);
  CHECK_FALSE(cor.region_empty);
  CHECK_FALSE(cor.cond1_holds);
  CHECK(cor.cond1_max_gradH_norm2 > 1e-4);
  CHECK(cor.ladder_eps == std::vector<double>{0.5, 0.25, 0.1});
  CHECK(cor.ladder_cond3.size() == 3);
  CHECK(cor.cond3_trend == classify_trend(cor.ladder_cond3));
  CHECK_FALSE(cor.implies_positive_umbilic_measure);
  CHECK_THROWS_AS(corollary_check(preset("sphere", {}), 0.0, {0.5}, {32, 32, 4}), InvalidInput);
}

TEST_CASE("sharpness gap guards") {
  const std::vector<double> ladder{0.4, 0.2};
  CHECK_THROWS_AS(sharpness_gap(preset("sphere", {}), ladder, {32, 32, 4}), InvalidInput);
  CHECK_THROWS_AS(sharpness_gap(preset("ellipsoid_rev", {{"a", 1.0}, {"b", 1.0005}}), ladder, {32, 32, 4}),
                  InvalidInput);
  const SharpnessReport rep = sharpness_gap(preset("ellipsoid_rev", {{"a", 1.0}, {"b", 1.5}}), ladder, {64, 64, 5});
  CHECK(rep.a == 1.0);
  CHECK(rep.b == 1.5);
  REQUIRE(rep.rows.size() == 2);
  for (const SharpnessRow& row : rep.rows) {
    CHECK(row.sharp_gap == doctest::Approx(row.term2 - row.term1 - 8 * kPi));
    CHECK(row.normalized_gap == doctest::Approx(row.sharp_gap / row.term2));
  }
  CHECK_FALSE(rep.trend.empty());
}
