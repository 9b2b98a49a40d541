#pragma once

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lomap/errors.hpp"
#include "lomap/poly.hpp"

namespace lomap {

/// Truncated Laurent series  sum_{e >= valuation} c_e z^e + O(z^truncation).
///
/// Coefficients are stored densely from the valuation upwards. A series whose
/// truncation is kExact is a Laurent polynomial known exactly. Every operation
/// reports the largest truncation justified by its operands and never invents
/// coefficients beyond it.
template <typename Scalar>
class TruncLaurent {
 public:
  static constexpr int kExact = 1 << 28;

  TruncLaurent() = default;
  TruncLaurent(int valuation, std::vector<Scalar> coeffs, int truncation = kExact)
      : val_(valuation), c_(std::move(coeffs)), trunc_(truncation) {
    if (trunc_ > kExact) trunc_ = kExact;
    if (val_ + static_cast<int>(c_.size()) > trunc_)
      c_.resize(static_cast<std::size_t>(std::max(0, trunc_ - val_)));
    normalize();
  }

  static TruncLaurent zero(int truncation = kExact) { return TruncLaurent(truncation, {}, truncation); }
  static TruncLaurent constant(const Scalar& c, int truncation = kExact) {
    return TruncLaurent(0, {c}, truncation);
  }
  static TruncLaurent monomial(const Scalar& c, int exponent, int truncation = kExact) {
    return TruncLaurent(exponent, {c}, truncation);
  }
  static TruncLaurent from_poly(const Poly<Scalar>& p, int truncation = kExact) {
    return TruncLaurent(0, p.coeffs(), truncation);
  }

  /// Lowest exponent with a nonzero coefficient; equals truncation() for a zero series.
  int valuation() const { return val_; }
  /// Exclusive upper exponent bound of the known coefficients.
  int truncation() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExact; }
  bool is_zero() const { return c_.empty(); }
  /// Highest stored exponent (valuation - 1 when zero).
  int top() const { return val_ + static_cast<int>(c_.size()) - 1; }
  const std::vector<Scalar>& stored() const { return c_; }

  Scalar coeff(int e) const {
    if (e >= trunc_) throw TruncationError("coefficient z^" + std::to_string(e) + " beyond truncation " + std::to_string(trunc_));
    if (e < val_ || e > top()) return Scalar(0);
    return c_[static_cast<std::size_t>(e - val_)];
  }

  TruncLaurent truncated(int t) const {
    if (t >= trunc_) return *this;
    return TruncLaurent(std::min(val_, t), slice(std::min(val_, t), t), t);
  }

  TruncLaurent& operator+=(const TruncLaurent& o) { return *this = combine(*this, o, false); }
  TruncLaurent& operator-=(const TruncLaurent& o) { return *this = combine(*this, o, true); }
  TruncLaurent& operator*=(const TruncLaurent& o) { return *this = *this * o; }
  TruncLaurent& operator*=(const Scalar& s) {
    if (detail::zero_test(s)) return *this = zero(trunc_);
    for (auto& v : c_) v *= s;
    normalize();
    return *this;
  }

  friend TruncLaurent operator+(const TruncLaurent& a, const TruncLaurent& b) { return combine(a, b, false); }
  friend TruncLaurent operator-(const TruncLaurent& a, const TruncLaurent& b) { return combine(a, b, true); }
  friend TruncLaurent operator-(TruncLaurent a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend TruncLaurent operator*(TruncLaurent a, const Scalar& s) { return a *= s; }
  friend TruncLaurent operator*(const Scalar& s, TruncLaurent a) { return a *= s; }

  friend TruncLaurent operator*(const TruncLaurent& a, const TruncLaurent& b) {
    int t = std::min(sat_add(a.trunc_, b.val_), sat_add(b.trunc_, a.val_));
    if (a.is_zero() || b.is_zero()) return zero(t);
    int v = a.val_ + b.val_;
    int hi = std::min(t - 1, a.top() + b.top());
    if (hi < v) return zero(t);
    std::vector<Scalar> r(static_cast<std::size_t>(hi - v + 1), Scalar(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::zero_test(a.c_[i])) continue;
      int ei = a.val_ + static_cast<int>(i);
      int jmax = std::min(static_cast<int>(b.c_.size()) - 1, hi - ei - b.val_);
      for (int j = 0; j <= jmax; ++j)
        r[static_cast<std::size_t>(static_cast<int>(i) + j)] += a.c_[i] * b.c_[static_cast<std::size_t>(j)];
    }
    return TruncLaurent(v, std::move(r), t);
  }

  /// Multiplication by z^k.
  TruncLaurent shifted(int k) const {
    TruncLaurent r = *this;
    r.val_ += k;
    r.trunc_ = sat_add(r.trunc_, k);
    return r;
  }

  /// Same valuation, coefficients and truncation.
  friend bool operator==(const TruncLaurent& a, const TruncLaurent& b) {
    return a.trunc_ == b.trunc_ && a.c_ == b.c_ && (a.c_.empty() || a.val_ == b.val_);
  }

  std::string str(const std::string& var = "z") const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (detail::zero_test(c_[i])) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c_[i] << ")*" << var << "^" << (val_ + static_cast<int>(i));
    }
    if (first) os << "0";
    if (!is_exact()) os << " + O(" << var << "^" << trunc_ << ")";
    return os.str();
  }

  static int sat_add(int t, int v) {
    if (t >= kExact) return kExact;
    long r = static_cast<long>(t) + v;
    return r >= kExact ? kExact : static_cast<int>(r);
  }

 private:
  std::vector<Scalar> slice(int lo, int hi_excl) const {
    std::vector<Scalar> r;
    for (int e = lo; e < hi_excl && e <= top(); ++e) r.push_back(e < val_ ? Scalar(0) : c_[static_cast<std::size_t>(e - val_)]);
    return r;
  }

  static TruncLaurent combine(const TruncLaurent& a, const TruncLaurent& b, bool subtract) {
    int t = std::min(a.trunc_, b.trunc_);
    if (a.is_zero() && b.is_zero()) return zero(t);
    int v = a.is_zero() ? b.val_ : (b.is_zero() ? a.val_ : std::min(a.val_, b.val_));
    int hi = std::min(t - 1, std::max(a.is_zero() ? v - 1 : a.top(), b.is_zero() ? v - 1 : b.top()));
    if (hi < v) return zero(t);
    std::vector<Scalar> r(static_cast<std::size_t>(hi - v + 1), Scalar(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      int e = a.val_ + static_cast<int>(i);
      if (e > hi) break;
      r[static_cast<std::size_t>(e - v)] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      int e = b.val_ + static_cast<int>(i);
      if (e > hi) break;
      if (subtract)
        r[static_cast<std::size_t>(e - v)] -= b.c_[i];
      else
        r[static_cast<std::size_t>(e - v)] += b.c_[i];
    }
    return TruncLaurent(v, std::move(r), t);
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && detail::zero_test(c_[lead])) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      val_ = trunc_;
      return;
    }
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
      val_ += static_cast<int>(lead);
    }
    while (!c_.empty() && detail::zero_test(c_.back())) c_.pop_back();
  }

  int val_ = kExact;
  std::vector<Scalar> c_;
  int trunc_ = kExact;
};

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const TruncLaurent<Scalar>& s) {
  return os << s.str();
}

/// d/dz.
template <typename Scalar>
TruncLaurent<Scalar> diff(const TruncLaurent<Scalar>& a) {
  using S = TruncLaurent<Scalar>;
  int t = a.is_exact() ? S::kExact : a.truncation() - 1;
  if (a.is_zero()) return S::zero(t);
  std::vector<Scalar> r;
  r.reserve(a.stored().size());
  for (std::size_t i = 0; i < a.stored().size(); ++i)
    r.push_back(Scalar(a.valuation() + static_cast<int>(i)) * a.stored()[i]);
  return S(a.valuation() - 1, std::move(r), t);
}

/// Reciprocal with relative precision `rel_precision` terms; needed when a is exact.
template <typename Scalar>
TruncLaurent<Scalar> inverse(const TruncLaurent<Scalar>& a, int rel_precision = -1) {
  using S = TruncLaurent<Scalar>;
  if (a.is_zero()) throw DivByZeroSeries("reciprocal of a zero series");
  int v = a.valuation();
  int p = a.is_exact() ? S::kExact : a.truncation() - v;
  if (rel_precision >= 0) p = std::min(p, rel_precision);
  if (p >= S::kExact) {
    if (a.stored().size() == 1) return S::monomial(Scalar(1) / a.stored()[0], -v);
    throw TruncationError("reciprocal of an exact non-monomial series needs an explicit precision");
  }
  const auto& c = a.stored();
  Scalar inv0 = Scalar(1) / c[0];
  std::vector<Scalar> b(static_cast<std::size_t>(p), Scalar(0));
  if (p > 0) b[0] = inv0;
  for (int n = 1; n < p; ++n) {
    Scalar acc(0);
    int kmax = std::min<int>(n, static_cast<int>(c.size()) - 1);
    for (int k = 1; k <= kmax; ++k) acc += c[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(n - k)];
    b[static_cast<std::size_t>(n)] = -acc * inv0;
  }
  return S(-v, std::move(b), -v + p);
}

/// a / b; the relative precision of the quotient is the smaller of the operands'.
template <typename Scalar>
TruncLaurent<Scalar> series_div(const TruncLaurent<Scalar>& a, const TruncLaurent<Scalar>& b) {
  using S = TruncLaurent<Scalar>;
  if (b.is_zero()) throw DivByZeroSeries("division by a zero series");
  if (b.stored().size() == 1 && b.is_exact()) {
    S r = a.shifted(-b.valuation());
    return r * (Scalar(1) / b.stored()[0]);
  }
  int rel = S::kExact;
  if (!a.is_exact()) rel = a.truncation() - (a.is_zero() ? a.truncation() : a.valuation());
  if (a.is_zero() && a.is_exact()) return S::zero();
  if (rel >= S::kExact && b.is_exact())
    throw TruncationError("division of exact series needs an explicit truncation");
  return a * inverse(b, rel >= S::kExact ? -1 : std::max(rel, 0));
}

/// Unique square root with constant term one of a series with constant term one.
template <typename Scalar>
TruncLaurent<Scalar> sqrt1(const TruncLaurent<Scalar>& a, int order = -1) {
  using S = TruncLaurent<Scalar>;
  if (a.is_zero() || a.valuation() != 0 || a.stored()[0] != Scalar(1))
    throw SqrtDomain("argument must have valuation 0 and constant term 1");
  int t = a.truncation();
  if (order >= 0) t = std::min(t, order);
  if (t >= S::kExact) {
    if (a.stored().size() == 1) return S::constant(Scalar(1));
    throw TruncationError("square root of an exact series needs an explicit order");
  }
  const auto& c = a.stored();
  std::vector<Scalar> b(static_cast<std::size_t>(t), Scalar(0));
  b[0] = Scalar(1);
  const Scalar half = Scalar(1) / Scalar(2);
  for (int n = 1; n < t; ++n) {
    Scalar acc = n < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(n)] : Scalar(0);
    for (int k = 1; k < n; ++k) acc -= b[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(n - k)];
    b[static_cast<std::size_t>(n)] = acc * half;
  }
  return S(0, std::move(b), t);
}

/// outer(inner(z)); requires valuation(inner) >= 1 and valuation(outer) >= 0.
template <typename Scalar>
TruncLaurent<Scalar> compose(const TruncLaurent<Scalar>& outer, const TruncLaurent<Scalar>& inner) {
  using S = TruncLaurent<Scalar>;
  if (!outer.is_zero() && outer.valuation() < 0)
    throw ValuationError("outer series has negative valuation");
  if (!inner.is_zero() && inner.valuation() < 1)
    throw ValuationError("inner series must have valuation >= 1");
  int vi = inner.is_zero() ? inner.truncation() : inner.valuation();
  long tl = outer.is_exact() ? S::kExact : static_cast<long>(outer.truncation()) * std::max(vi, 1);
  int t = static_cast<int>(std::min<long>(tl, S::kExact));
  if (outer.top() >= 1) t = std::min(t, inner.truncation());
  if (outer.is_zero()) return S::zero(t);
  S in = inner.truncated(t);
  S acc = S::zero();
  for (int e = outer.top(); e >= 0; --e) {
    acc = (acc * in).truncated(t) + S::constant(outer.coeff(e));
  }
  return acc.truncated(t);
}

template <typename Scalar>
TruncLaurent<Scalar> pow(const TruncLaurent<Scalar>& a, int e) {
  TruncLaurent<Scalar> r = TruncLaurent<Scalar>::constant(Scalar(1));
  TruncLaurent<Scalar> b = a;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

}  // namespace lomap
