#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lomap/errors.hpp"
#include "lomap/rational.hpp"

namespace lomap {

template <typename T>
using DynMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Antisymmetric matrix of even dimension; built from the strict upper triangle.
template <typename T>
class AntisymMatrix {
 public:
  explicit AntisymMatrix(int dim) : a_(dim, dim) {
    if (dim % 2 != 0) throw OddDimension("AntisymMatrix: dimension " + std::to_string(dim) + " is odd");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a_(i, j) = T{};
  }
  /// Throws when m is not antisymmetric or has odd dimension.
  static AntisymMatrix from_matrix(const DynMatrix<T>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("AntisymMatrix: not square");
    AntisymMatrix r(static_cast<int>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!(m(i, i) == T{})) throw std::invalid_argument("AntisymMatrix: nonzero diagonal");
      for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
        if (!(m(j, i) == -m(i, j))) throw std::invalid_argument("AntisymMatrix: not antisymmetric");
        r.set(static_cast<int>(i), static_cast<int>(j), m(i, j));
      }
    }
    return r;
  }

  int dim() const { return static_cast<int>(a_.rows()); }
  const T& operator()(int i, int j) const { return a_(i, j); }
  /// Sets a(i, j) = v and a(j, i) = -v for i != j.
  void set(int i, int j, const T& v) {
    if (i == j) throw std::invalid_argument("AntisymMatrix: diagonal entries are zero");
    a_(i, j) = v;
    a_(j, i) = -v;
  }
  const DynMatrix<T>& matrix() const { return a_; }

 private:
  DynMatrix<T> a_;
};

namespace detail {

template <typename T, typename Entry>
T pfaffian_masked(std::uint32_t mask, const Entry& entry, std::unordered_map<std::uint32_t, T>& memo) {
  if (mask == 0) return T(1);
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  int first = __builtin_ctz(mask);
  std::uint32_t rest = mask & (mask - 1);
  T acc{};
  int pos = 2;
  for (std::uint32_t r = rest; r; r &= r - 1, ++pos) {
    int j = __builtin_ctz(r);
    T sub = pfaffian_masked<T>(rest & ~(1u << j), entry, memo);
    T term = entry(first, j) * sub;
    if (pos % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  memo.emplace(mask, acc);
  return acc;
}

}  // namespace detail

/// Pfaffian of the pairing entry(p, q) on positions 0..n-1 by first-row
/// expansion, memoized on the set of remaining positions.
template <typename T, typename Entry>
T pfaffian_of(int n, const Entry& entry) {
  if (n % 2 != 0) throw OddDimension("pfaffian: odd length " + std::to_string(n));
  if (n > 30) throw SizeLimit("pfaffian: dimension too large");
  std::unordered_map<std::uint32_t, T> memo;
  std::uint32_t full = n == 0 ? 0u : ((1u << n) - 1);
  return detail::pfaffian_masked<T>(full, entry, memo);
}

template <typename T>
T pfaffian(const AntisymMatrix<T>& a) {
  return pfaffian_of<T>(a.dim(), [&](int i, int j) { return a(i, j); });
}

/// Pfaffian of the principal submatrix taken in the order of idx.
template <typename T>
T pfaffian(const AntisymMatrix<T>& a, const std::vector<int>& idx) {
  return pfaffian_of<T>(static_cast<int>(idx.size()), [&](int p, int q) {
    return a(idx[static_cast<std::size_t>(p)], idx[static_cast<std::size_t>(q)]);
  });
}

/// Exact determinant by Gaussian elimination.
Rational det_exact(DynMatrix<Rational> m);

/// Seeded antisymmetric matrix with small random rational entries.
AntisymMatrix<Rational> random_antisym(int dim, std::mt19937_64& rng);

/// Block-diagonal direct sum.
template <typename T>
AntisymMatrix<T> direct_sum(const AntisymMatrix<T>& a, const AntisymMatrix<T>& b) {
  AntisymMatrix<T> r(a.dim() + b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) r.set(i, j, a(i, j));
  for (int i = 0; i < b.dim(); ++i)
    for (int j = i + 1; j < b.dim(); ++j) r.set(a.dim() + i, a.dim() + j, b(i, j));
  return r;
}

/// Polynomial in formal antisymmetric symbols mu_{i,j}, i < j.
class FormalPoly {
 public:
  using Symbol = std::pair<int, int>;
  using Monomial = std::vector<Symbol>;  // sorted, with repetition

  FormalPoly() = default;
  FormalPoly(int c) : FormalPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  FormalPoly(const Rational& c);                  // NOLINT(google-explicit-constructor)
  /// mu_{i,j}; zero when i = j and -mu_{j,i} when i > j.
  static FormalPoly mu(int i, int j);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  FormalPoly& operator+=(const FormalPoly& o);
  FormalPoly& operator-=(const FormalPoly& o);
  friend FormalPoly operator+(FormalPoly a, const FormalPoly& b) { return a += b; }
  friend FormalPoly operator-(FormalPoly a, const FormalPoly& b) { return a -= b; }
  friend FormalPoly operator-(const FormalPoly& a) { return FormalPoly() - a; }
  friend FormalPoly operator*(const FormalPoly& a, const FormalPoly& b);
  friend FormalPoly operator*(FormalPoly a, const Rational& c);
  friend bool operator==(const FormalPoly& a, const FormalPoly& b) { return a.terms_ == b.terms_; }

  /// d/dt_k under the rule 2k d mu_{i,j} = mu_{i+k,j} + mu_{i,j+k}.
  FormalPoly derivative(int k) const;
  std::string str() const;

 private:
  void add_term(Monomial m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

/// (a_1, ..., a_{2m}) with pairing (a, b) = mu_{a,b}.
FormalPoly formal_pfaffian(const std::vector<int>& labels);

}  // namespace lomap
