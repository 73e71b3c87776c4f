#include "umbilic/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "umbilic/errors.hpp"

namespace umbilic {

namespace {

constexpr double kDivisionFloor = 1e-300;

constexpr std::array<double, Jet2::kMaxOrder + 1> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0};

constexpr double binomial(int n, int k) {
  return kFactorial[static_cast<std::size_t>(n)] /
         (kFactorial[static_cast<std::size_t>(k)] * kFactorial[static_cast<std::size_t>(n - k)]);
}

void check_order(int order) {
  if (order < 0 || order > Jet2::kMaxOrder) {
    throw std::invalid_argument("jet order " + std::to_string(order) + " outside [0, 4]");
  }
}

// Taylor-scaled coefficients t(a,b) = d(a,b) / (a! b!). Products and
// compositions are plain polynomial arithmetic in this basis.
using Poly = std::array<double, Jet2::kSize>;

Poly to_taylor(const Jet2& j) {
  Poly t{};
  for (int n = 0; n <= j.order(); ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      t[Jet2::index(a, b)] = j.d(a, b) / (kFactorial[static_cast<std::size_t>(a)] *
                                          kFactorial[static_cast<std::size_t>(b)]);
    }
  }
  return t;
}

Jet2 from_taylor(const Poly& t, int order) {
  Jet2 j = Jet2::constant(0.0, order);
  for (int n = 0; n <= order; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      j.set(a, b, t[Jet2::index(a, b)] * kFactorial[static_cast<std::size_t>(a)] *
                      kFactorial[static_cast<std::size_t>(b)]);
    }
  }
  return j;
}

Poly poly_mul(const Poly& x, const Poly& y, int order) {
  Poly r{};
  for (int n = 0; n <= order; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      double s = 0.0;
      for (int i = 0; i <= a; ++i) {
        for (int k = 0; k <= b; ++k) {
          s += x[Jet2::index(i, k)] * y[Jet2::index(a - i, b - k)];
        }
      }
      r[Jet2::index(a, b)] = s;
    }
  }
  return r;
}

// phi(a) given phi^(k)(a0) for k = 0..order, via
// phi(a0 + delta) = sum_k phi^(k)(a0) / k! * delta^k.
Jet2 compose(const Jet2& a, const std::array<double, Jet2::kMaxOrder + 1>& derivs) {
  const int order = a.order();
  Poly delta = to_taylor(a);
  delta[0] = 0.0;
  Poly result{};
  result[0] = derivs[0];
  Poly power{};
  power[0] = 1.0;
  for (int k = 1; k <= order; ++k) {
    power = poly_mul(power, delta, order);
    const double coef = derivs[static_cast<std::size_t>(k)] / kFactorial[static_cast<std::size_t>(k)];
    if (!std::isfinite(coef)) throw SingularEvaluation("derivative overflow", a.value());
    for (std::size_t i = 0; i < Jet2::size_for(order); ++i) result[i] += coef * power[i];
  }
  return from_taylor(result, order);
}

}  // namespace

Jet2 Jet2::constant(double x, int order) {
  check_order(order);
  Jet2 j;
  j.order_ = order;
  j.c_[0] = x;
  return j;
}

Jet2 Jet2::variable(Var which, double at, int order) {
  check_order(order);
  if (order < 1) throw std::invalid_argument("a jet variable needs order >= 1");
  Jet2 j = constant(at, order);
  if (which == Var::U) {
    j.c_[index(1, 0)] = 1.0;
  } else {
    j.c_[index(0, 1)] = 1.0;
  }
  return j;
}

double Jet2::d(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order_) {
    throw std::out_of_range("jet partial (" + std::to_string(a) + ", " + std::to_string(b) +
                            ") beyond order " + std::to_string(order_));
  }
  return c_[index(a, b)];
}

void Jet2::set(int a, int b, double x) {
  if (a < 0 || b < 0 || a + b > order_) {
    throw std::out_of_range("jet partial beyond order");
  }
  c_[index(a, b)] = x;
}

Jet2 Jet2::du() const {
  if (order_ < 1) throw std::logic_error("cannot differentiate an order-0 jet");
  Jet2 r;
  r.order_ = order_ - 1;
  for (int n = 0; n <= r.order_; ++n) {
    for (int b = 0; b <= n; ++b) r.c_[index(n - b, b)] = c_[index(n - b + 1, b)];
  }
  return r;
}

Jet2 Jet2::dv() const {
  if (order_ < 1) throw std::logic_error("cannot differentiate an order-0 jet");
  Jet2 r;
  r.order_ = order_ - 1;
  for (int n = 0; n <= r.order_; ++n) {
    for (int b = 0; b <= n; ++b) r.c_[index(n - b, b)] = c_[index(n - b, b + 1)];
  }
  return r;
}

Jet2 Jet2::truncated(int order) const {
  check_order(order);
  Jet2 r;
  r.order_ = std::min(order, order_);
  for (std::size_t i = 0; i < size_for(r.order_); ++i) r.c_[i] = c_[i];
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  order_ = std::min(order_, o.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t i = 0; i < n; ++i) c_[i] += o.c_[i];
  for (std::size_t i = n; i < kSize; ++i) c_[i] = 0.0;
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  order_ = std::min(order_, o.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t i = 0; i < n; ++i) c_[i] -= o.c_[i];
  for (std::size_t i = n; i < kSize; ++i) c_[i] = 0.0;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2& Jet2::operator*=(double x) {
  for (std::size_t i = 0; i < size_for(order_); ++i) c_[i] *= x;
  return *this;
}

Jet2& Jet2::operator/=(double x) {
  if (std::abs(x) <= kDivisionFloor) throw SingularEvaluation("division by zero", x);
  for (std::size_t i = 0; i < size_for(order_); ++i) c_[i] /= x;
  return *this;
}

Jet2 operator-(const Jet2& a) { return a * -1.0; }
Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

// General Leibniz rule on raw partials:
// d^a_u d^b_v (fg) = sum C(a,i) C(b,k) f_(i,k) g_(a-i,b-k).
Jet2 operator*(const Jet2& f, const Jet2& g) {
  const int order = std::min(f.order(), g.order());
  const auto& x = f.raw();
  const auto& y = g.raw();
  Jet2 r = Jet2::constant(0.0, order);
  for (int n = 0; n <= order; ++n) {
    for (int b = 0; b <= n; ++b) {
      const int a = n - b;
      double s = 0.0;
      for (int i = 0; i <= a; ++i) {
        const double ca = binomial(a, i);
        for (int k = 0; k <= b; ++k) {
          s += ca * binomial(b, k) * x[Jet2::index(i, k)] * y[Jet2::index(a - i, b - k)];
        }
      }
      r.set(a, b, s);
    }
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
Jet2 operator+(Jet2 a, double x) { return a += x; }
Jet2 operator+(double x, Jet2 a) { return a += x; }
Jet2 operator-(Jet2 a, double x) { return a -= x; }
Jet2 operator-(double x, const Jet2& a) { return -a + x; }
Jet2 operator*(Jet2 a, double x) { return a *= x; }
Jet2 operator*(double x, Jet2 a) { return a *= x; }
Jet2 operator/(Jet2 a, double x) { return a /= x; }
Jet2 operator/(double x, const Jet2& a) { return reciprocal(a) * x; }

Jet2 reciprocal(const Jet2& a) {
  const double x = a.value();
  if (std::abs(x) <= kDivisionFloor) throw SingularEvaluation("division by zero", x);
  const double r = 1.0 / x;
  return compose(a, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r, 24.0 * r * r * r * r * r});
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return compose(a, {s, c, -s, -c, s});
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  return compose(a, {c, -s, -c, s, c});
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value());
  const double c = std::cosh(a.value());
  return compose(a, {s, c, s, c, s});
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value());
  const double c = std::cosh(a.value());
  return compose(a, {c, s, c, s, c});
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  if (!std::isfinite(e)) throw SingularEvaluation("exp overflow", a.value());
  return compose(a, {e, e, e, e, e});
}

Jet2 log(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw SingularEvaluation("log of non-positive value", x);
  const double r = 1.0 / x;
  return compose(a, {std::log(x), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet2 sqrt(const Jet2& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw SingularEvaluation("sqrt of non-positive value", x);
  const double s = std::sqrt(x);
  const double r = 1.0 / x;
  return compose(a, {s, 0.5 * s * r, -0.25 * s * r * r, 0.375 * s * r * r * r,
                     -0.9375 * s * r * r * r * r});
}

Jet2 atan(const Jet2& a) {
  const double x = a.value();
  const double q = 1.0 / (1.0 + x * x);
  return compose(a, {std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q,
                     24.0 * x * (1.0 - x * x) * q * q * q * q});
}

Jet2 pow(const Jet2& a, double p) {
  const int order = a.order();
  if (p == 0.0) return Jet2::constant(1.0, order);
  const bool integral = std::nearbyint(p) == p;
  if (integral && p > 0.0 && p <= 8.0) {
    Jet2 r = a;
    for (int k = 1; k < static_cast<int>(p); ++k) r = r * a;
    return r;
  }
  const double x = a.value();
  if (!integral && !(x > 0.0)) throw SingularEvaluation("non-integer power of non-positive value", x);
  if (p < 0.0 && std::abs(x) <= kDivisionFloor) throw SingularEvaluation("negative power of zero", x);
  std::array<double, Jet2::kMaxOrder + 1> derivs{};
  double falling = 1.0;
  for (int k = 0; k <= order; ++k) {
    derivs[static_cast<std::size_t>(k)] = falling == 0.0 ? 0.0 : falling * std::pow(x, p - k);
    falling *= (p - k);
  }
  return compose(a, derivs);
}

}  // namespace umbilic
