#pragma once

// Truncated bivariate Taylor jets for exact forward-mode differentiation.
//
// A Jet2 of order N carries every partial derivative d^a/du^a d^b/dv^b F
// with a + b <= N. Coefficients are raw partials, NOT divided by a!b!, so
// jet.d(1, 2) is literally F_uvv.

#include <array>
#include <cstddef>

namespace umbilic {

enum class Var { U, V };

class Jet2 {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr std::size_t kSize = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  /// Zero jet of order 0.
  Jet2() = default;

  static Jet2 constant(double x, int order);
  static Jet2 variable(Var which, double at, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }

  /// Raw partial d^a_u d^b_v. Requires a + b <= order().
  double d(int a, int b) const;
  void set(int a, int b, double x);

  /// Partial derivative of the jet itself; the result has order() - 1.
  Jet2 du() const;
  Jet2 dv() const;
  Jet2 partial(Var which) const { return which == Var::U ? du() : dv(); }
  /// Partial along coordinate index 0 (u) or 1 (v).
  Jet2 partial(int k) const { return k == 0 ? du() : dv(); }

  Jet2 truncated(int order) const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator+=(double x) { c_[0] += x; return *this; }
  Jet2& operator-=(double x) { c_[0] -= x; return *this; }
  Jet2& operator*=(double x);
  Jet2& operator/=(double x);

  static constexpr std::size_t index(int a, int b) {
    const int n = a + b;
    return static_cast<std::size_t>(n * (n + 1) / 2 + b);
  }
  /// Number of stored coefficients at a given order.
  static constexpr std::size_t size_for(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }

  const std::array<double, kSize>& raw() const { return c_; }

 private:
  int order_ = 0;
  std::array<double, kSize> c_{};
};

Jet2 operator-(const Jet2& a);
Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator+(Jet2 a, double x);
Jet2 operator+(double x, Jet2 a);
Jet2 operator-(Jet2 a, double x);
Jet2 operator-(double x, const Jet2& a);
Jet2 operator*(Jet2 a, double x);
Jet2 operator*(double x, Jet2 a);
Jet2 operator/(Jet2 a, double x);
Jet2 operator/(double x, const Jet2& a);

Jet2 reciprocal(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 atan(const Jet2& a);
/// a^p for a constant exponent. Non-integer p needs a positive base.
Jet2 pow(const Jet2& a, double p);

}  // namespace umbilic
