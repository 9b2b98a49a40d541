#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lomap/qroot3.hpp"
#include "lomap/rational.hpp"

namespace lomap {

class GenusTable;

/// Exact constant tables. u and v index the z^{-5g/2} and z^{-5g/4} gradings.
struct ConstTables {
  std::vector<Rational> u;
  std::vector<QRoot3> v;
  std::vector<QRoot3> beta;
  std::vector<QRoot3> mu;
  std::vector<QRoot3> nu;
  std::map<std::string, std::string> conventions;

  /// u_{k/2} with u at half-integers equal to zero.
  Rational u_half(int k) const;
  /// v_k with v_{-1} = 0.
  QRoot3 v_at(int k) const;
};

/// Coefficients of u = z^{1/2} sum u_g z^{-5g/2} with u^2 - u''/6 = z.
std::vector<Rational> u_coeffs(int G);
/// Coefficients of v = z^{1/4} sum v_g z^{-5g/4} with 2v' - v^2 + 3u = 0, v_0 = -sqrt 3.
std::vector<QRoot3> v_coeffs(int G, const std::vector<Rational>& u);

/// Which bounds the triple sum of the beta recursion uses.
enum class TripleSum { Statement, Proof };

/// beta_0..beta_G from the five-term recursion.
std::vector<QRoot3> beta_recursion(int G, TripleSum variant = TripleSum::Statement);
/// beta_k = (2/3)^k 9 ((5k-6) v_{k-1} - 4 u_{k/2}).
std::vector<QRoot3> beta_from_uv(int G, const std::vector<Rational>& u, const std::vector<QRoot3>& v);
/// (5g-6) alpha_g, divided by sqrt 3 for odd g; alpha_g is the top psi coefficient of L_g.
QRoot3 beta_from_genus(int g, const GenusTable& table);

std::vector<QRoot3> mu_coeffs(int L, const std::vector<Rational>& u);
std::vector<QRoot3> nu_coeffs(int L, const std::vector<QRoot3>& v);

/// Builds every table deep enough for index G (v and u to G + 2).
ConstTables build_tables(int G);

/// Finite sum of c z^e with rational exponents. Terms with exponent >= lo are exact;
/// anything below lo is unknown.
struct Puiseux {
  std::map<Rational, QRoot3> terms;
  Rational lo;

  Rational top() const;
  QRoot3 coeff(const Rational& e) const;
  Puiseux operator+(const Puiseux& o) const;
  Puiseux operator-(const Puiseux& o) const;
  Puiseux operator*(const Puiseux& o) const;
  Puiseux operator*(const QRoot3& c) const;
  /// Multiplication by z^k.
  Puiseux shifted(const Rational& k) const;
};
Puiseux derivative(const Puiseux& p);

/// u(z), v(z) and beta(z) = sum beta_n (3/2)^n z^{-(5n-2)/4} through index n_max.
Puiseux u_series(const ConstTables& t, int n_max);
Puiseux v_series(const ConstTables& t, int n_max);
Puiseux beta_series(const std::vector<QRoot3>& beta, int n_max);
/// Left side of the fifth-order beta equation; exact above its lo.
Puiseux beta_ode_residual(const Puiseux& beta);

struct OdeReport {
  int order = 0;
  bool recursion_ode_zero = false;
  bool uv_ode_zero = false;
  bool identity_holds = false;
  /// Number of residual exponents that were checked.
  int checked_terms = 0;
  std::optional<int> first_identity_failure;
  nlohmann::json to_json() const;
};
/// Checks the beta equation for the recursion series and -36(u + v'), and their termwise equality, for n <= order.
OdeReport beta_ode_check(int order);

/// u_g over the truncated transseries formula; S/(2 pi i) = -3^{1/4}/(2 pi^{3/2}).
double asymptotic_ratio_u(int g, int L, const ConstTables& t);

struct StokesEstimate {
  int g = 0;
  int L = 0;
  double value = 0;
  /// Estimate at each g in the trajectory.
  std::vector<std::pair<int, double>> trajectory;
};
/// v_g (A/2)^g / Gamma(g) / (1 + truncated nu sum) at g = g_max.
StokesEstimate stokes_estimate(int g_max, int L, const ConstTables& t);

struct MapConstant {
  int g = 0;
  /// p_{(g+1)/2} for odd g.
  std::optional<double> p;
  /// t_g from u_g = -2^{g-2} Gamma((5g-1)/2) t_g.
  double t_variant_a = 0;
  /// t_g from u_g = 2^{g-2} Gamma((5g-1)/4) t_g.
  double t_variant_b = 0;
};
std::vector<MapConstant> map_constants(int G, const ConstTables& t);

/// Leading Darboux estimate of [z^n] L_g, as a natural log together with its sign.
struct LogValue {
  double log_abs = 0;
  int sign = 0;
  double value() const;
};
LogValue darboux_estimate(int g, int n, const ConstTables& t);
/// Exact [z^n] L_g divided by the estimate; the table must hold g.
double darboux_compare(int g, int n, const GenusTable& table, const ConstTables& t);
/// Ratios for several n from one series expansion.
std::vector<double> darboux_compare(int g, const std::vector<int>& ns, const GenusTable& table, const ConstTables& t);

/// ln|r| for an exact rational of any size.
double log_abs(const Rational& r);

/// eta / (1 - z/z_c)^{1/2} evaluated exactly in Q[sqrt 3] at s = s_c - delta, then rounded.
double eta_singular_ratio(const Rational& delta);

constexpr double kA = 2.7712812921102037;  // 8 sqrt 3 / 5

nlohmann::json tables_to_json(const ConstTables& t);

}  // namespace lomap
