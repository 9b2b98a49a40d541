#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "lomap/ratfunc.hpp"
#include "lomap/series.hpp"

namespace lomap {

using QSeries = TruncLaurent<Rational>;

/// a(s) + b(s) sqrt(eta), eta = 1 - 6s + 6s^2.
class AlgElem {
 public:
  AlgElem() = default;
  AlgElem(int c) : even_(c) {}                    // NOLINT(google-explicit-constructor)
  AlgElem(const Rational& c) : even_(c) {}        // NOLINT(google-explicit-constructor)
  AlgElem(RatFunc a) : even_(std::move(a)) {}     // NOLINT(google-explicit-constructor)
  AlgElem(RatFunc a, RatFunc b) : even_(std::move(a)), odd_(std::move(b)) {}

  const RatFunc& even() const { return even_; }
  const RatFunc& odd() const { return odd_; }
  bool is_zero() const { return even_.is_zero() && odd_.is_zero(); }

  AlgElem& operator+=(const AlgElem& o) {
    even_ += o.even_;
    odd_ += o.odd_;
    return *this;
  }
  AlgElem& operator-=(const AlgElem& o) {
    even_ -= o.even_;
    odd_ -= o.odd_;
    return *this;
  }
  AlgElem& operator*=(const AlgElem& o);
  AlgElem& operator*=(const Rational& c) {
    even_ *= c;
    odd_ *= c;
    return *this;
  }

  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator*(AlgElem a, const AlgElem& b) { return a *= b; }
  friend AlgElem operator*(AlgElem a, const Rational& c) { return a *= c; }
  friend AlgElem operator*(const Rational& c, AlgElem a) { return a *= c; }
  friend AlgElem operator-(const AlgElem& a) { return AlgElem(-a.even_, -a.odd_); }
  friend bool operator==(const AlgElem& a, const AlgElem& b) { return (a - b).is_zero(); }
  friend bool operator!=(const AlgElem& a, const AlgElem& b) { return !(a == b); }

  /// (a - b sqrt(eta)) / (a^2 - b^2 eta).
  AlgElem inverse() const;
  std::string str() const;

 private:
  RatFunc even_, odd_;
};

inline bool is_zero(const AlgElem& x) { return x.is_zero(); }
std::ostream& operator<<(std::ostream& os, const AlgElem& x);

namespace alg {
RatFunc s();
RatFunc eta();
/// z = s(1-s)(1-2s)/2.
RatFunc z();
AlgElem sqrt_eta();
/// psi_i for any integer i (negative indices give eta powers, psi_{-2} = 1).
AlgElem psi(int i);
}  // namespace alg

/// Finite Q-combination of psi_i, i >= 0.
class PsiVector {
 public:
  PsiVector() = default;
  static PsiVector unit(int i, const Rational& c = Rational(1));

  const std::map<int, Rational>& entries() const { return e_; }
  bool is_zero() const { return e_.empty(); }
  /// -1 when empty.
  int top_index() const { return e_.empty() ? -1 : e_.rbegin()->first; }
  Rational coeff(int i) const;
  void add(int i, const Rational& c);

  PsiVector& operator+=(const PsiVector& o);
  PsiVector& operator-=(const PsiVector& o);
  PsiVector& operator*=(const Rational& c);
  friend PsiVector operator+(PsiVector a, const PsiVector& b) { return a += b; }
  friend PsiVector operator-(PsiVector a, const PsiVector& b) { return a -= b; }
  friend PsiVector operator*(PsiVector a, const Rational& c) { return a *= c; }
  friend PsiVector operator*(const Rational& c, PsiVector a) { return a *= c; }
  friend bool operator==(const PsiVector& a, const PsiVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const PsiVector& a, const PsiVector& b) { return !(a == b); }

  AlgElem to_alg() const;
  std::string str() const;

 private:
  std::map<int, Rational> e_;
};

std::ostream& operator<<(std::ostream& os, const PsiVector& v);

/// s(z) through z^order (truncation order + 1), by Newton iteration.
QSeries s_of_z(int order);

/// psi_i psi_j expanded in the psi basis.
PsiVector psi_product(int i, int j);
PsiVector psi_product(const PsiVector& a, const PsiVector& b);

/// D = 6 z d/dz.
PsiVector apply_D(const PsiVector& x);
AlgElem apply_D(const AlgElem& x);

/// binom(D/6, i) applied to x, i.e. z^i/i! d^i/dz^i.
AlgElem theta_op(int i, const AlgElem& x);

/// Exact psi expansion; NotInSpan when e is not a finite psi combination.
PsiVector alg_to_psi(const AlgElem& e);
/// As alg_to_psi but also admits a constant term, returned in *constant.
PsiVector alg_to_psi_affine(const AlgElem& e, Rational* constant);

/// Laurent expansion in z through z^order.
QSeries alg_to_zseries(const AlgElem& e, int order);
QSeries ratfunc_to_zseries(const RatFunc& r, int order);
/// Fast expansion of a psi combination through z^order.
QSeries psi_to_zseries(const PsiVector& v, int order);
/// psi_i through z^order.
QSeries psi_zseries(int i, int order);

/// Closed forms of the genus 0 and genus 1 series.
AlgElem base_series(int g);

nlohmann::json to_json(const AlgElem& e);
nlohmann::json to_json(const PsiVector& v);
PsiVector psi_from_json(const nlohmann::json& j);

}  // namespace lomap
