#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "umbilic/errors.hpp"
#include "umbilic/jet.hpp"

using namespace umbilic;

namespace {

using JetFn = std::function<Jet2(double, double, int)>;
using PlainFn = std::function<double(double, double)>;

// Every coefficient of order <= 4 is checked against a central difference:
// first partials against differences of the plain double function, higher
// partials against differences of the next lower partial (already checked).
void check_against_differences(const JetFn& jet, const PlainFn& plain, double u, double v) {
  const Jet2 J = jet(u, v, 4);
  CHECK(J.value() == doctest::Approx(plain(u, v)).epsilon(1e-13));
  for (int n = 1; n <= 4; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      double fd;
      if (n == 1) {
        fd = a == 1 ? oracle::diff([&](double x) { return plain(x, v); }, u)
                    : oracle::diff([&](double y) { return plain(u, y); }, v);
      } else if (a > 0) {
        fd = oracle::diff([&](double x) { return jet(x, v, n - 1).d(a - 1, b); }, u);
      } else {
        fd = oracle::diff([&](double y) { return jet(u, y, n - 1).d(a, b - 1); }, v);
      }
      const double x = J.d(a, b);
      INFO("partial (" << a << ", " << b << ") at (" << u << ", " << v << "): jet " << x << " vs " << fd);
      CHECK(std::abs(x - fd) <= std::max(1e-6, 1e-6 * std::abs(fd)));
    }
  }
}

Jet2 U(double u, int order) { return Jet2::variable(Var::U, u, order); }
Jet2 V(double v, int order) { return Jet2::variable(Var::V, v, order); }

void check_all_equal(const Jet2& a, const Jet2& b, double rel) {
  REQUIRE(a.order() == b.order());
  for (int n = 0; n <= a.order(); ++n) {
    for (int j = 0; j <= n; ++j) {
      INFO("partial (" << n - j << ", " << j << ")");
      CHECK(oracle::close(a.d(n - j, j), b.d(n - j, j), rel));
    }
  }
}

}  // namespace

TEST_CASE("constant jets carry no derivatives") {
  const Jet2 a = Jet2::constant(3.0, 2);
  CHECK(a.value() == 3.0);
  CHECK(a.order() == 2);
  for (auto [i, j] : {std::pair{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) CHECK(a.d(i, j) == 0.0);

  const Jet2 z = Jet2::constant(0.0, 4);
  for (double c : z.raw()) CHECK(c == 0.0);

  const Jet2 p = Jet2::constant(std::numbers::pi, 1);
  CHECK(p.value() == std::numbers::pi);
  CHECK(p.d(1, 0) == 0.0);
  CHECK(p.d(0, 1) == 0.0);

  CHECK_THROWS_AS(Jet2::constant(1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Jet2::constant(1.0, -1), std::invalid_argument);
}

TEST_CASE("variable jets") {
  const Jet2 u = U(0.5, 2);
  CHECK(u.value() == 0.5);
  CHECK(u.d(1, 0) == 1.0);
  CHECK(u.d(0, 1) == 0.0);
  CHECK(u.d(2, 0) == 0.0);

  const Jet2 v = V(2.0, 4);
  CHECK(v.value() == 2.0);
  CHECK(v.d(0, 1) == 1.0);
  CHECK(v.d(1, 0) == 0.0);
  CHECK(v.d(0, 4) == 0.0);

  CHECK(((U(0.3, 2) * V(-1.2, 2)).d(1, 1)) == 1.0);
  CHECK_THROWS_AS(Jet2::variable(Var::U, 0.0, 0), std::invalid_argument);
}

TEST_CASE("partials beyond the order are not readable") {
  const Jet2 a = U(1.0, 2);
  CHECK_THROWS(a.d(3, 0));
  CHECK_THROWS(a.d(1, 2));
}

TEST_CASE("product and quotient rules") {
  const Jet2 f = U(1.0, 2) * U(1.0, 2) * V(1.0, 2);
  CHECK(f.value() == 1.0);
  CHECK(f.d(1, 0) == 2.0);
  CHECK(f.d(0, 1) == 1.0);
  CHECK(f.d(1, 1) == 2.0);

  const Jet2 q = 1.0 / U(2.0, 2);
  CHECK(q.value() == 0.5);
  CHECK(q.d(1, 0) == -0.25);
  CHECK(q.d(2, 0) == 0.25);
}

TEST_CASE("binary operations take the smaller order") {
  CHECK((U(1.0, 4) + V(1.0, 2)).order() == 2);
  CHECK((U(1.0, 1) * V(1.0, 3)).order() == 1);
  CHECK((U(1.0, 3) / (V(1.0, 4) + 2.0)).order() == 3);
  CHECK((U(1.0, 3) - 2.0).order() == 3);
}

TEST_CASE("Taylor coefficients of elementary functions") {
  const Jet2 s = sin(U(0.0, 3));
  CHECK(s.value() == 0.0);
  CHECK(s.d(1, 0) == doctest::Approx(1.0));
  CHECK(s.d(2, 0) == doctest::Approx(0.0));
  CHECK(s.d(3, 0) == doctest::Approx(-1.0));

  const Jet2 r = sqrt(Jet2::constant(4.0, 3));
  CHECK(r.value() == 2.0);
  for (int n = 1; n <= 3; ++n) {
    for (int j = 0; j <= n; ++j) CHECK(r.d(n - j, j) == 0.0);
  }

  const Jet2 e = exp(U(0.0, 4));
  for (int n = 0; n <= 4; ++n) CHECK(e.d(n, 0) == doctest::Approx(1.0));
  const Jet2 l = log(U(1.0, 4));
  CHECK(l.d(4, 0) == doctest::Approx(-6.0));
  const Jet2 at = atan(U(0.0, 3));
  CHECK(at.d(3, 0) == doctest::Approx(-2.0));
  const Jet2 ch = cosh(U(0.0, 4));
  CHECK(ch.d(2, 0) == doctest::Approx(1.0));
  CHECK(ch.d(4, 0) == doctest::Approx(1.0));
}

TEST_CASE("domain violations raise singular-evaluation errors") {
  CHECK_THROWS_AS(1.0 / Jet2::constant(0.0, 2), SingularEvaluation);
  CHECK_THROWS_AS(U(1.0, 2) / (U(1.0, 2) - 1.0), SingularEvaluation);
  CHECK_THROWS_AS(log(Jet2::constant(-1.0, 1)), SingularEvaluation);
  CHECK_THROWS_AS(sqrt(Jet2::constant(0.0, 1)), SingularEvaluation);
  CHECK_THROWS_AS(pow(Jet2::constant(-2.0, 1), 0.5), SingularEvaluation);
  CHECK_THROWS_AS(pow(Jet2::constant(0.0, 1), -1.0), SingularEvaluation);
  try {
    (void)log(Jet2::constant(-3.0, 1));
    FAIL("expected an exception");
  } catch (const SingularEvaluation& e) {
    CHECK(e.offending_value() == -3.0);
  }
  // A representable quotient whose derivatives overflow is an error, not a nan.
  CHECK((1.0 / Jet2::constant(1e-200, 0)).value() == doctest::Approx(1e200));
  CHECK_THROWS_AS(1.0 / Jet2::constant(1e-200, 1), SingularEvaluation);
}

TEST_CASE("pow with constant exponents") {
  const Jet2 x = U(1.7, 4);
  check_all_equal(pow(x, 3.0), x * x * x, 1e-14);
  check_all_equal(pow(x, -2.0), 1.0 / (x * x), 1e-13);
  check_all_equal(pow(x, 0.5), sqrt(x), 1e-13);
  const Jet2 neg = U(-1.5, 4);
  check_all_equal(pow(neg, 2.0), neg * neg, 1e-14);
  CHECK(pow(x, 0.0).value() == 1.0);
}

TEST_CASE("jet coefficients agree with central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(0.3, 1.4);
  const std::vector<std::pair<JetFn, PlainFn>> cases{
      {[](double u, double v, int k) { return U(u, k) * V(v, k) * U(u, k) + 3.0 * V(v, k); },
       [](double u, double v) { return u * v * u + 3.0 * v; }},
      {[](double u, double v, int k) { return (U(u, k) + 2.0) / (V(v, k) * V(v, k) + 1.0); },
       [](double u, double v) { return (u + 2.0) / (v * v + 1.0); }},
      {[](double u, double v, int k) { return exp(sin(U(u, k) * V(v, k))); },
       [](double u, double v) { return std::exp(std::sin(u * v)); }},
      {[](double u, double v, int k) { return cos(U(u, k) - V(v, k)) * sinh(V(v, k)); },
       [](double u, double v) { return std::cos(u - v) * std::sinh(v); }},
      {[](double u, double v, int k) { return log(U(u, k) + V(v, k)) + sqrt(U(u, k) * V(v, k)); },
       [](double u, double v) { return std::log(u + v) + std::sqrt(u * v); }},
      {[](double u, double v, int k) { return atan(U(u, k) * 2.0 - V(v, k)) * cosh(U(u, k)); },
       [](double u, double v) { return std::atan(u * 2.0 - v) * std::cosh(u); }},
      {[](double u, double v, int k) { return pow(U(u, k) + V(v, k), 1.5) - pow(V(v, k), -3.0); },
       [](double u, double v) { return std::pow(u + v, 1.5) - std::pow(v, -3.0); }},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    for (int trial = 0; trial < 5; ++trial) {
      check_against_differences(cases[i].first, cases[i].second, pick(rng), pick(rng));
    }
  }
}

TEST_CASE("ring laws hold coefficient-wise") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double u = pick(rng), v = pick(rng);
    const Jet2 a = sin(U(u, 4)) + V(v, 4);
    const Jet2 b = exp(U(u, 4) * V(v, 4));
    const Jet2 c = cos(V(v, 4)) * U(u, 4) - 0.7;
    check_all_equal((a + b) + c, a + (b + c), 1e-12);
    check_all_equal(a * (b + c), a * b + a * c, 1e-12);
    check_all_equal((a * b) * c, a * (b * c), 1e-12);
  }
}

TEST_CASE("truncating a higher-order jet equals computing at the lower order") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pick(0.2, 1.2);
  for (int trial = 0; trial < 30; ++trial) {
    const double u = pick(rng), v = pick(rng);
    auto f = [&](int k) { return exp(sin(U(u, k) * V(v, k))) / (1.0 + U(u, k) * U(u, k)) + sqrt(V(v, k)); };
    for (int low = 1; low <= 3; ++low) {
      check_all_equal(f(4).truncated(low), f(low), 1e-14);
    }
  }
}

TEST_CASE("jet derivatives shift coefficients") {
  const Jet2 f = exp(U(0.4, 4) * V(0.9, 4));
  const Jet2 fu = f.du();
  CHECK(fu.order() == 3);
  for (int n = 0; n <= 3; ++n) {
    for (int j = 0; j <= n; ++j) {
      CHECK(fu.d(n - j, j) == f.d(n - j + 1, j));
      CHECK(f.dv().d(n - j, j) == f.d(n - j, j + 1));
    }
  }
  CHECK_THROWS(Jet2::constant(1.0, 0).du());
}
