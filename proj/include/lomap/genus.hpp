#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lomap/algebraic.hpp"
#include "lomap/errors.hpp"

namespace lomap {

/// Affine expression c + sum_k d[k] D^k L in a single unknown series L.
struct LinearForm {
  AlgElem c;
  std::vector<AlgElem> d;

  LinearForm() = default;
  LinearForm(AlgElem constant) : c(std::move(constant)) {}  // NOLINT(google-explicit-constructor)
  static LinearForm unknown();

  bool is_constant() const;
  /// Value after substituting L.
  AlgElem substitute(const AlgElem& l) const;

  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(const Rational& r);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& r) { return a *= r; }
  friend LinearForm operator*(const Rational& r, LinearForm a) { return a *= r; }
  /// Throws when both factors depend on L.
  friend LinearForm operator*(const LinearForm& a, const LinearForm& b);
};

LinearForm apply_D(const LinearForm& x);

/// Left and right sides of the genus-graded master recursion, assembled from
/// T_i = L_i + delta terms and the shifted-series coefficients V_k. Every
/// intermediate is memoized by index, so one instance can serve a sequence of g.
template <typename V>
class GenusRecursion {
 public:
  using Source = std::function<V(int)>;
  using Op = std::function<V(const V&)>;

  /// T(i) and L(i) are only queried for i >= 0; z2 multiplies by z^2.
  GenusRecursion(Source t, Source l, Op d, Op z2, V zero)
      : t_(std::move(t)), l_(std::move(l)), d_(std::move(d)), z2_(std::move(z2)), zero_(std::move(zero)) {}

  /// Lets another context answer for every quantity built only from indices below `below`.
  void delegate_below(int below, std::function<std::optional<V>(char, int, int)> lift) {
    below_ = below;
    lift_ = std::move(lift);
  }

  const V& T(int i) { return memo(t_memo_, 'T', i, 0, [&] { return i < 0 ? zero_ : t_(i); }); }
  /// (D+4) T_i.
  const V& U(int i) {
    return memo(u_memo_, 'U', i, 0, [&] { return i < 0 ? zero_ : shift(T(i), 4); });
  }
  /// (D+12)(D+8)(D+4) T_i.
  const V& W(int i) {
    return memo(w_memo_, 'W', i, 0, [&] { return i < 0 ? zero_ : shift(shift(U(i), 8), 12); });
  }
  /// sum_{i=0}^m U_i U_{m-i}.
  const V& S(int m) {
    return memo(s_memo_, 'S', m, 0, [&] {
      if (m < 0) return zero_;
      V acc = zero_;
      for (int i = 0; i < m - i; ++i) acc += U(i) * U(m - i) * Rational(2);
      if (m % 2 == 0) acc += U(m / 2) * U(m / 2);
      return acc;
    });
  }
  /// binom(D/6, i) L_t.
  const V& theta(int t, int i) {
    return memo(theta_memo_, 'H', t, i, [&] {
      if (i == 0) return l_(t);
      const V& prev = theta(t, i - 1);
      return (d_(prev) * Rational(1, 6) - prev * Rational(i - 1)) * Rational(1, i);
    });
  }
  const V& Vk(int k) {
    return memo(v_memo_, 'V', k, 0, [&] {
      V acc = zero_;
      for (int t = k; t >= 0; t -= 2) {
        Rational p = pow(Rational(2), k - t + 3);
        for (int i = 0; i <= k - t + 2; ++i) {
          Rational b = binomial(2 - t, k - t - i + 2);
          if (b.is_zero()) continue;
          acc += theta(t, i) * (p * b);
        }
      }
      return acc;
    });
  }
  /// 2z^2 W_{m-2} - (D+6)T_m / 2 + 6 z^2 S(m).
  const V& X(int m) {
    return memo(x_memo_, 'X', m, 0, [&] {
      V a = z2_(W(m - 2) * Rational(2) + S(m) * Rational(6));
      return a - shift(T(m), 6) * Rational(1, 2);
    });
  }
  V lhs(int g) {
    V a = z2_(shift(W(g - 2), 12) * Rational(4) + shift(S(g), 12) * Rational(12));
    return a - shift(d_(T(g)), 6);
  }
  V rhs(int g) {
    V acc = zero_;
    for (int k = 0; k <= g; ++k) acc += Vk(k) * X(g - k);
    return acc;
  }
  V residual(int g) { return lhs(g) - rhs(g); }

 private:
  V shift(const V& x, int c) { return d_(x) + x * Rational(c); }

  template <typename F>
  const V& memo(std::map<std::pair<int, int>, V>& m, char kind, int i, int j, F make) {
    auto key = std::make_pair(i, j);
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    if (lift_ && i < below_) {
      if (auto v = lift_(kind, i, j)) return m.emplace(key, std::move(*v)).first->second;
    }
    V v = make();
    return m.emplace(key, std::move(v)).first->second;
  }

  Source t_, l_;
  Op d_, z2_;
  V zero_;
  int below_ = -1;
  std::function<std::optional<V>(char, int, int)> lift_;
  std::map<std::pair<int, int>, V> t_memo_, u_memo_, w_memo_, s_memo_, theta_memo_, v_memo_, x_memo_;

 public:
  /// Memoized quantity by kind tag, for delegation.
  std::optional<V> lookup(char kind, int i, int j) {
    switch (kind) {
      case 'T': return T(i);
      case 'U': return U(i);
      case 'W': return W(i);
      case 'S': return S(i);
      case 'H': return theta(i, j);
      case 'V': return Vk(i);
      case 'X': return X(i);
      default: return std::nullopt;
    }
  }
};

/// One solved or closed-form genus.
struct GenusRecord {
  int g = 0;
  AlgElem alg;                    // always populated
  std::optional<PsiVector> psi;   // g >= 2
  std::string provenance;         // "closed-form", "solved" or "cached"
  bool residual_checked = false;
};

/// Diagnostics from one solve.
struct SolveInfo {
  PsiVector operator_constant[3];  // q_k minus its constant part, k = 0, 1, 2
  Rational operator_scalar[3];
  PsiVector rhs;                   // R_g
  int unknowns = 0;
  int equations = 0;
  int rank = 0;
};

/// Gap-free table of L_g from g = 0.
class GenusTable {
 public:
  GenusTable();

  int max_g() const { return static_cast<int>(rec_.size()) - 1; }
  const GenusRecord& record(int g) const;
  const AlgElem& alg(int g) const { return record(g).alg; }
  /// L_g through z^order.
  QSeries zseries(int g, int order) const;

  /// Solves every missing genus up to g; cache_dir may be empty.
  void extend_to(int g, const std::string& cache_dir = "", const std::function<void(int)>& progress = {});
  /// Installs a solved genus (used by the cache loader); must be the next one.
  void push(GenusRecord r);

  GenusRecursion<AlgElem>& recursion() { return *cor_; }
  const SolveInfo& last_solve() const { return info_; }

 private:
  friend PsiVector solve_genus(int g, GenusTable& table);
  std::vector<GenusRecord> rec_;
  std::unique_ptr<GenusRecursion<AlgElem>> cor_;
  SolveInfo info_;
};

/// L_g + delta_{g,1} + (1 - 1/(2z)) delta_{g,0}.
AlgElem t_series(int g, const GenusTable& table);
/// V_k of the genus-graded recursion.
AlgElem v_coefficient(int k, GenusTable& table);
/// Solves for L_g (table must hold 0..g-1), verifies the raw residual, appends to the table.
PsiVector solve_genus(int g, GenusTable& table);
/// [z^n] L_g for 1 <= n <= n_max.
std::vector<Rational> coefficients(int g, int n_max, const GenusTable& table);

/// Raw recursion residual at genus g as a z-series (inputs expanded through z^order).
QSeries recursion_zseries_residual(int g, int order, const GenusTable& table);

struct MasterReport {
  int g_max = 0;
  int z_order = 0;
  bool pass = true;
  /// First nonzero residual coefficient (z exponent, w exponent), if any.
  std::optional<std::pair<int, int>> first_failure;
  bool v_match = true;
  /// Result of the variant with 6x^2 in place of 6x^4 on the right side.
  bool proof_line_variant_pass = false;
  std::optional<std::pair<int, int>> proof_line_variant_failure;
};

/// Checks the (z, w) master equation directly by series substitution.
MasterReport residual_master(int g_max, int z_order, GenusTable& table);

/// Cache helpers: cache_dir/genus/g_<k>.json.
std::string genus_cache_path(const std::string& cache_dir, int g);
nlohmann::json genus_cache_json(const GenusRecord& r);
void write_genus_cache(const std::string& cache_dir, const GenusRecord& r);
std::optional<GenusRecord> read_genus_cache(const std::string& cache_dir, int g);

}  // namespace lomap
