#pragma once

#include <iosfwd>
#include <string>

#include "lomap/rational.hpp"

namespace lomap {

/// Element a + b*sqrt(3) of the quadratic field Q[sqrt 3].
struct QRoot3 {
  Rational a;
  Rational b;

  QRoot3() = default;
  QRoot3(int v) : a(v) {}  // NOLINT(google-explicit-constructor)
  QRoot3(Rational a_) : a(std::move(a_)) {}  // NOLINT(google-explicit-constructor)
  QRoot3(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}

  static QRoot3 sqrt3() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  bool is_rational() const { return b.is_zero(); }
  /// a - b*sqrt(3).
  QRoot3 conj() const { return {a, -b}; }
  /// Field norm a^2 - 3b^2.
  Rational norm() const { return a * a - Rational(3) * b * b; }
  double to_double() const;
  /// "a+b√3" style rendering; pure rationals render as "a".
  std::string str() const;

  QRoot3& operator+=(const QRoot3& o) { a += o.a; b += o.b; return *this; }
  QRoot3& operator-=(const QRoot3& o) { a -= o.a; b -= o.b; return *this; }
  QRoot3& operator*=(const QRoot3& o);
  QRoot3& operator/=(const QRoot3& o);

  friend QRoot3 operator+(QRoot3 x, const QRoot3& y) { return x += y; }
  friend QRoot3 operator-(QRoot3 x, const QRoot3& y) { return x -= y; }
  friend QRoot3 operator*(QRoot3 x, const QRoot3& y) { return x *= y; }
  friend QRoot3 operator/(QRoot3 x, const QRoot3& y) { return x /= y; }
  friend QRoot3 operator-(const QRoot3& x) { return {-x.a, -x.b}; }
  friend bool operator==(const QRoot3& x, const QRoot3& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const QRoot3& x, const QRoot3& y) { return !(x == y); }
  friend std::ostream& operator<<(std::ostream& os, const QRoot3& x);
};

}  // namespace lomap
