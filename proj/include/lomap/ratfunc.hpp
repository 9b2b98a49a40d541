#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lomap/poly.hpp"
#include "lomap/rational.hpp"

namespace lomap {

using ZPoly = Poly<BigInt>;

/// A squarefree primitive integer polynomial with positive leading coefficient,
/// interned so that equal factors share one id.
struct DenFactor {
  int id;
  ZPoly poly;
  bool irreducible;
};
using FactorRef = std::shared_ptr<const DenFactor>;

/// Returns the interned factor for a squarefree primitive polynomial.
FactorRef intern_factor(const ZPoly& p);

/// Rational function in s over Q.
///
/// Stored as content * n(s) / prod f_j(s)^{e_j} with n primitive over Z and the
/// f_j pairwise coprime interned factors. After every operation the numerator
/// shares no factor with the denominator. numerator()/denominator() give the
/// canonical reduced form with monic denominator.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(int c) : RatFunc(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  RatFunc(const Rational& c);               // NOLINT(google-explicit-constructor)
  explicit RatFunc(const Poly<Rational>& p);
  /// Reduces num/den; throws ZeroDenominator when den = 0.
  RatFunc(const Poly<Rational>& num, const Poly<Rational>& den);

  static RatFunc s();
  /// content * num / prod f^e for pairwise coprime interned factors; reduces.
  static RatFunc from_factored(const Rational& content, const ZPoly& num,
                               std::vector<std::pair<FactorRef, int>> den);

  bool is_zero() const { return content_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.degree() <= 0; }

  /// Reduced numerator over the monic denominator.
  Poly<Rational> numerator() const;
  Poly<Rational> denominator() const;

  /// Factored view: content * primitive numerator / prod f^e.
  const Rational& content() const { return content_; }
  const ZPoly& primitive_numerator() const { return num_; }
  const std::vector<std::pair<FactorRef, int>>& factors() const { return den_; }

  /// Order of vanishing at s = 0 (negative for a pole).
  int valuation_at_zero() const;
  /// Value at a rational point; throws ZeroDenominator at a pole.
  Rational eval(const Rational& x) const;
  RatFunc derivative() const;
  RatFunc inverse() const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator*=(const Rational& c);
  RatFunc& operator/=(const RatFunc& o) { return *this *= o.inverse(); }

  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator*(RatFunc a, const Rational& c) { return a *= c; }
  friend RatFunc operator*(const Rational& c, RatFunc a) { return a *= c; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend RatFunc operator-(RatFunc a) {
    a.content_ = -a.content_;
    return a;
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).is_zero(); }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  std::string str(const std::string& var = "s") const;

 private:
  void cancel(const std::vector<std::pair<FactorRef, int>>* only = nullptr);
  void normalize_content();
  std::pair<Poly<Rational>, Poly<Rational>> expanded() const;
  static RatFunc from_expanded(const Poly<Rational>& num, const Poly<Rational>& den);

  Rational content_;
  ZPoly num_;
  std::vector<std::pair<FactorRef, int>> den_;  // sorted by id
};

inline bool is_zero(const RatFunc& r) { return r.is_zero(); }
RatFunc pow(const RatFunc& r, int e);
std::ostream& operator<<(std::ostream& os, const RatFunc& r);

/// Integer-coefficient helpers.
ZPoly to_zpoly(const Poly<Rational>& p, Rational* scale = nullptr);
Poly<Rational> to_qpoly(const ZPoly& p);
/// Exact quotient a / b when b divides a in Z[s]; false otherwise.
bool zpoly_exact_div(const ZPoly& a, const ZPoly& b, ZPoly* quotient);
/// Squarefree decomposition: p = lead * prod a_i^i (Yun); entry i-1 holds a_i.
std::vector<Poly<Rational>> squarefree_decomposition(const Poly<Rational>& p);

}  // namespace lomap
