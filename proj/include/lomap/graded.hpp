#pragma once

#include <array>
#include <map>
#include <string>

#include "lomap/poly.hpp"

namespace lomap {

/// Exponents of t_1, t_2, t_3.
using Mono3 = std::array<int, 3>;

inline int weight(const Mono3& m) { return m[0] + 2 * m[1] + 3 * m[2]; }
std::string mono_str(const Mono3& m);

/// Truncated series in t_1, t_2, t_3 graded by weight(t_k) = k, with
/// coefficients polynomial in N. Exact for every monomial of weight <= max_weight.
class GradedSeries3 {
 public:
  GradedSeries3() = default;
  explicit GradedSeries3(int max_weight) : max_weight_(max_weight) {}

  static GradedSeries3 constant(const NPolynomial& c, int max_weight);
  /// t_k as a series.
  static GradedSeries3 t(int k, int max_weight);

  int max_weight() const { return max_weight_; }
  const std::map<Mono3, NPolynomial>& terms() const { return terms_; }
  NPolynomial coeff(const Mono3& m) const;
  void set(const Mono3& m, const NPolynomial& c);
  void add(const Mono3& m, const NPolynomial& c);
  /// Drops terms above w and lowers max_weight to w.
  GradedSeries3 truncated(int w) const;

  GradedSeries3& operator+=(const GradedSeries3& o);
  GradedSeries3& operator-=(const GradedSeries3& o);
  GradedSeries3& operator*=(const NPolynomial& c);
  friend GradedSeries3 operator+(GradedSeries3 a, const GradedSeries3& b) { return a += b; }
  friend GradedSeries3 operator-(GradedSeries3 a, const GradedSeries3& b) { return a -= b; }
  friend GradedSeries3 operator*(GradedSeries3 a, const NPolynomial& c) { return a *= c; }
  friend GradedSeries3 operator*(const NPolynomial& c, GradedSeries3 a) { return a *= c; }
  friend GradedSeries3 operator*(const GradedSeries3& a, const GradedSeries3& b);

  /// d/dt_k; exact through max_weight - k.
  GradedSeries3 derivative(int k) const;
  /// Substitutes N -> N + c in every coefficient.
  GradedSeries3 shift_N(long c) const;
  /// Homogeneous part of weight w.
  GradedSeries3 part(int w) const;
  /// Coefficients of x^e after t_i = x delta_{i,3}.
  std::map<int, NPolynomial> restrict_t3() const;

 private:
  int max_weight_ = 0;
  std::map<Mono3, NPolynomial> terms_;
};

/// log and exp of a series whose constant term is 1 (log) or 0 (exp).
GradedSeries3 log(const GradedSeries3& z);
GradedSeries3 exp(const GradedSeries3& y);

}  // namespace lomap
