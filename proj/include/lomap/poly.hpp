#pragma once

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lomap/qroot3.hpp"
#include "lomap/rational.hpp"

namespace lomap {

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const QRoot3& x) { return x.is_zero(); }
inline bool is_zero(const BigInt& x) { return sgn(x) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

namespace detail {
// Found by argument-dependent lookup at instantiation, so later overloads work too.
template <typename T>
bool zero_test(const T& x) {
  using lomap::is_zero;
  return is_zero(x);
}
}  // namespace detail

/// Dense univariate polynomial over a commutative ring, coefficients stored
/// low degree first with no trailing zeros. The zero polynomial has degree -1.
template <typename Scalar>
class Poly {
 public:
  using scalar_type = Scalar;

  Poly() = default;
  explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<Scalar> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const Scalar& c) { return Poly(std::vector<Scalar>{c}); }
  static Poly monomial(const Scalar& c, int k) {
    std::vector<Scalar> v(static_cast<std::size_t>(k) + 1, Scalar(0));
    v.back() = c;
    return Poly(std::move(v));
  }
  /// The indeterminate itself.
  static Poly x() { return monomial(Scalar(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int k) const {
    return (k < 0 || k > degree()) ? Scalar(0) : c_[static_cast<std::size_t>(k)];
  }
  const Scalar& lead() const {
    assert(!c_.empty());
    return c_.back();
  }

  template <typename T>
  T eval(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }
  Scalar operator()(const Scalar& x) const { return eval<Scalar>(x); }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Scalar> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = Scalar(static_cast<int>(k)) * c_[k];
    return Poly(std::move(d));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Scalar(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Scalar(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Poly& operator*=(const Scalar& s) {
    if (detail::zero_test(s)) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::zero_test(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Human-readable rendering in the given variable name, highest degree first.
  std::string str(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const Scalar& v = c_[static_cast<std::size_t>(k)];
      if (detail::zero_test(v)) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << v << ")";
      if (k >= 1) os << "*" << var;
      if (k >= 2) os << "^" << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && detail::zero_test(c_.back())) c_.pop_back();
  }

  std::vector<Scalar> c_;
};

template <typename Scalar>
bool is_zero(const Poly<Scalar>& p) {
  return p.is_zero();
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Poly<Scalar>& p) {
  return os << p.str();
}

template <typename Scalar>
Poly<Scalar> pow(const Poly<Scalar>& p, int e) {
  Poly<Scalar> r = Poly<Scalar>::constant(Scalar(1)), b = p;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

/// outer(inner(x)) by Horner's rule.
template <typename Scalar>
Poly<Scalar> compose(const Poly<Scalar>& outer, const Poly<Scalar>& inner) {
  Poly<Scalar> acc;
  const auto& c = outer.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * inner + Poly<Scalar>::constant(*it);
  return acc;
}

/// Quotient and remainder over a field; throws on division by zero.
template <typename Scalar>
std::pair<Poly<Scalar>, Poly<Scalar>> divmod(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  if (b.is_zero()) throw std::domain_error("Poly divmod: division by zero polynomial");
  if (a.degree() < b.degree()) return {Poly<Scalar>(), a};
  std::vector<Scalar> r = a.coeffs();
  std::vector<Scalar> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Scalar(0));
  const int db = b.degree();
  const Scalar inv_lead = Scalar(1) / b.lead();
  for (int k = a.degree() - db; k >= 0; --k) {
    Scalar f = r[static_cast<std::size_t>(k + db)] * inv_lead;
    q[static_cast<std::size_t>(k)] = f;
    if (detail::zero_test(f)) continue;
    for (int j = 0; j <= db; ++j)
      r[static_cast<std::size_t>(k + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
  }
  r.resize(static_cast<std::size_t>(db));
  return {Poly<Scalar>(std::move(q)), Poly<Scalar>(std::move(r))};
}

/// Monic greatest common divisor over a field (zero if both are zero).
template <typename Scalar>
Poly<Scalar> gcd(Poly<Scalar> a, Poly<Scalar> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (Scalar(1) / a.lead());
}

/// Polynomial in the symbolic matrix dimension N, coefficient k multiplies N^k.
using NPolynomial = Poly<Rational>;

/// q(N) = p(N + c), by Taylor shift.
NPolynomial npoly_shift(const NPolynomial& p, long c);

}  // namespace lomap
