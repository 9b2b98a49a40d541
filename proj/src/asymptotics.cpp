#include "lomap/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lomap/errors.hpp"
#include "lomap/genus.hpp"
#include "lomap/serialize.hpp"

namespace lomap {

namespace {

const double kPi = std::acos(-1.0);
const double kSqrt3 = std::sqrt(3.0);

QRoot3 at(const std::vector<QRoot3>& xs, int i) {
  if (i < 0 || i >= static_cast<int>(xs.size())) return QRoot3();
  return xs[static_cast<std::size_t>(i)];
}

}  // namespace

Rational ConstTables::u_half(int k) const {
  if (k < 0 || k % 2 != 0) return Rational(0);
  std::size_t i = static_cast<std::size_t>(k / 2);
  if (i >= u.size()) throw MissingDependency("u table too short for index " + std::to_string(i));
  return u[i];
}

QRoot3 ConstTables::v_at(int k) const {
  if (k < 0) return QRoot3();
  if (k >= static_cast<int>(v.size())) throw MissingDependency("v table too short for index " + std::to_string(k));
  return v[static_cast<std::size_t>(k)];
}

std::vector<Rational> u_coeffs(int G) {
  std::vector<Rational> u{Rational(1)};
  for (int k = 1; k <= G; ++k) {
    Rational e(1 - 5 * (k - 1), 2);
    Rational rhs = u[static_cast<std::size_t>(k - 1)] * e * (e - Rational(1)) * Rational(1, 6);
    for (int g = 1; g < k; ++g) rhs -= u[static_cast<std::size_t>(g)] * u[static_cast<std::size_t>(k - g)];
    u.push_back(rhs / Rational(2));
  }
  return u;
}

std::vector<QRoot3> v_coeffs(int G, const std::vector<Rational>& u) {
  std::vector<QRoot3> v{QRoot3(0, -1)};
  for (int k = 1; k <= G; ++k) {
    Rational e(1 - 5 * (k - 1), 4);
    QRoot3 acc = v[static_cast<std::size_t>(k - 1)] * QRoot3(e * Rational(2));
    for (int g = 1; g < k; ++g) acc -= v[static_cast<std::size_t>(g)] * v[static_cast<std::size_t>(k - g)];
    if (k % 2 == 0) {
      if (static_cast<std::size_t>(k / 2) >= u.size()) throw MissingDependency("v_coeffs: u table too short");
      acc += QRoot3(Rational(3) * u[static_cast<std::size_t>(k / 2)]);
    }
    v.push_back(acc / (v[0] * QRoot3(2)));
  }
  return v;
}

std::vector<QRoot3> beta_recursion(int G, TripleSum variant) {
  std::vector<QRoot3> b{QRoot3(-36), QRoot3(0, 6)};
  for (int g = 2; g <= G; ++g) {
    auto B = [&](int i) { return at(b, i); };
    QRoot3 acc = B(g - 2) * QRoot3(Rational((5 * g - 8) * (5 * g - 12) * (5 * g - 6), 162));
    acc -= B(g - 4) * QRoot3(Rational(static_cast<long>(5 * g - 6) * (5 * g - 10) * (5 * g - 14) * (5 * g - 18) *
                                          (5 * g - 22),
                                      729L * 120));
    QRoot3 s2;
    for (int i = 1; i <= g - 1; ++i) s2 += B(i) * B(g - i);
    acc += s2 * QRoot3(Rational(8 * (5 * g - 6), 432));
    QRoot3 s3;
    for (int i = 2; i <= g - 1; ++i) s3 += QRoot3((5 * i - 8) * (5 * i - 12)) * B(i - 2) * B(g - i);
    acc -= s3 * QRoot3(Rational(5 * g - 6, 8 * 729));
    QRoot3 s4;
    int i_max = variant == TripleSum::Statement ? g - 1 : g - 2;
    for (int i = 1; i <= i_max; ++i)
      for (int j = 1; j <= g - i - 1; ++j) s4 += QRoot3(5 * i - 2) * B(i) * B(j) * B(g - i - j);
    acc -= s4 * QRoot3(Rational(1, 8 * 243));
    b.push_back(acc / QRoot3(Rational(8 * (g - 1), 3)));
  }
  b.resize(static_cast<std::size_t>(std::max(G, 0) + 1));
  return b;
}

std::vector<QRoot3> beta_from_uv(int G, const std::vector<Rational>& u, const std::vector<QRoot3>& v) {
  ConstTables t;
  t.u = u;
  t.v = v;
  std::vector<QRoot3> b;
  for (int k = 0; k <= G; ++k) {
    QRoot3 inner = t.v_at(k - 1) * QRoot3(5 * k - 6) - QRoot3(Rational(4) * t.u_half(k));
    b.push_back(inner * QRoot3(pow(Rational(2, 3), k) * Rational(9)));
  }
  return b;
}

QRoot3 beta_from_genus(int g, const GenusTable& table) {
  if (g < 2 || g > table.max_g()) throw MissingDependency("beta_from_genus: genus " + std::to_string(g) + " not in table");
  const auto& rec = table.record(g);
  if (!rec.psi) throw MissingDependency("beta_from_genus: no psi expansion for genus " + std::to_string(g));
  Rational alpha = rec.psi->coeff(5 * g - 8);
  QRoot3 b(alpha * Rational(5 * g - 6));
  if (g % 2 == 1) b /= QRoot3::sqrt3();
  return b;
}

std::vector<QRoot3> mu_coeffs(int L, const std::vector<Rational>& u) {
  ConstTables t;
  t.u = u;
  std::vector<QRoot3> mu{QRoot3(1)};
  for (int l = 1; l <= L; ++l) {
    QRoot3 s;
    for (int k = 0; k < l; ++k) s += mu[static_cast<std::size_t>(k)] * QRoot3(t.u_half(l - k + 1));
    QRoot3 inner = s * QRoot3(Rational(192, 25)) -
                   mu[static_cast<std::size_t>(l - 1)] * QRoot3((Rational(l) - Rational(9, 10)) * (Rational(l) - Rational(1, 10)));
    // 5/(16 sqrt3 l) = 5 sqrt3 / (48 l)
    mu.push_back(inner * QRoot3(Rational(0), Rational(5, 48 * l)));
  }
  return mu;
}

std::vector<QRoot3> nu_coeffs(int L, const std::vector<QRoot3>& v) {
  ConstTables t;
  t.v = v;
  std::vector<QRoot3> nu{QRoot3(1)};
  for (int l = 1; l <= L; ++l) {
    QRoot3 s;
    for (int k = 0; k < l; ++k) s += t.v_at(l + 1 - k) * nu[static_cast<std::size_t>(k)];
    nu.push_back(s * QRoot3(Rational(-4, 5 * l)));
  }
  return nu;
}

ConstTables build_tables(int G) {
  ConstTables t;
  int depth = std::max(G, 0) + 2;
  t.u = u_coeffs(depth);
  t.v = v_coeffs(depth, t.u);
  t.beta = beta_recursion(std::max(G, 1));
  t.mu = mu_coeffs(std::max(G, 0), t.u);
  t.nu = nu_coeffs(std::max(G, 0), t.v);
  t.conventions = {
      {"u", "u(z) = z^(1/2) sum u_g z^(-5g/2), u^2 - u''/6 = z, u_0 = 1"},
      {"v", "v(z) = z^(1/4) sum v_g z^(-5g/4), 2v' - v^2 + 3u = 0, v_0 = -sqrt3"},
      {"beta", "five-term recursion, beta_0 = -36, beta_1 = 18/sqrt3, negative indices zero"},
      {"beta_from_uv", "v_{-1} = 0, u_{k/2} = 0 for odd k"},
      {"mu", "u_{n/2} = 0 for odd n"},
  };
  return t;
}

// ---- Puiseux series ------------------------------------------------------

Rational Puiseux::top() const {
  if (terms.empty()) return lo;
  return terms.rbegin()->first;
}

QRoot3 Puiseux::coeff(const Rational& e) const {
  if (e < lo) throw TruncationError("Puiseux coefficient below the exact range");
  auto it = terms.find(e);
  return it == terms.end() ? QRoot3() : it->second;
}

namespace {

void add_term(std::map<Rational, QRoot3>& m, const Rational& e, const QRoot3& c) {
  auto [it, inserted] = m.emplace(e, c);
  if (!inserted) it->second += c;
  if (it->second.is_zero()) m.erase(it);
}

void prune(Puiseux& p) {
  for (auto it = p.terms.begin(); it != p.terms.end() && it->first < p.lo;) it = p.terms.erase(it);
}

}  // namespace

Puiseux Puiseux::operator+(const Puiseux& o) const {
  Puiseux r = *this;
  for (const auto& [e, c] : o.terms) add_term(r.terms, e, c);
  r.lo = std::max(lo, o.lo);
  prune(r);
  return r;
}

Puiseux Puiseux::operator-(const Puiseux& o) const { return *this + o * QRoot3(-1); }

Puiseux Puiseux::operator*(const Puiseux& o) const {
  Puiseux r;
  r.lo = std::min(lo + o.top(), o.lo + top());
  for (const auto& [ea, ca] : terms)
    for (const auto& [eb, cb] : o.terms) {
      Rational e = ea + eb;
      if (e < r.lo) continue;
      add_term(r.terms, e, ca * cb);
    }
  return r;
}

Puiseux Puiseux::operator*(const QRoot3& c) const {
  Puiseux r;
  r.lo = lo;
  if (c.is_zero()) return r;
  for (const auto& [e, x] : terms) r.terms.emplace(e, x * c);
  return r;
}

Puiseux Puiseux::shifted(const Rational& k) const {
  Puiseux r;
  r.lo = lo + k;
  for (const auto& [e, x] : terms) r.terms.emplace(e + k, x);
  return r;
}

Puiseux derivative(const Puiseux& p) {
  Puiseux r;
  r.lo = p.lo - Rational(1);
  for (const auto& [e, x] : p.terms)
    if (!e.is_zero()) r.terms.emplace(e - Rational(1), x * QRoot3(e));
  return r;
}

Puiseux u_series(const ConstTables& t, int n_max) {
  Puiseux p;
  int g_max = n_max / 2;
  for (int g = 0; g <= g_max; ++g)
    add_term(p.terms, Rational(1 - 5 * g, 2), QRoot3(t.u.at(static_cast<std::size_t>(g))));
  p.lo = Rational(1 - 5 * g_max, 2) - Rational(5, 2) + Rational(1, 4);  // next term is strictly below
  return p;
}

Puiseux v_series(const ConstTables& t, int n_max) {
  Puiseux p;
  for (int g = 0; g <= n_max; ++g) add_term(p.terms, Rational(1 - 5 * g, 4), t.v_at(g));
  p.lo = Rational(1 - 5 * n_max, 4) - Rational(1, 4);
  return p;
}

Puiseux beta_series(const std::vector<QRoot3>& beta, int n_max) {
  Puiseux p;
  for (int n = 0; n <= n_max; ++n)
    add_term(p.terms, Rational(2 - 5 * n, 4), at(beta, n) * QRoot3(pow(Rational(3, 2), n)));
  p.lo = Rational(2 - 5 * n_max, 4) - Rational(1, 4);
  return p;
}

Puiseux beta_ode_residual(const Puiseux& b) {
  Puiseux d1 = derivative(b);
  Puiseux d2 = derivative(d1);
  Puiseux d3 = derivative(d2);
  Puiseux d5 = derivative(derivative(d3));
  Puiseux r = d1.shifted(Rational(1)) * QRoot3(Rational(-8, 15));
  r = r + b * QRoot3(Rational(-16, 15));
  r = r + d5 * QRoot3(Rational(8, 135));
  r = r + d2 * d1 * QRoot3(Rational(2, 81));
  r = r + d3 * b * QRoot3(Rational(2, 81));
  r = r + b * b * d1 * QRoot3(Rational(1, 486));
  return r;
}

nlohmann::json OdeReport::to_json() const {
  nlohmann::json j{{"order", order},
                   {"recursion_ode_zero", recursion_ode_zero},
                   {"uv_ode_zero", uv_ode_zero},
                   {"identity_holds", identity_holds},
                   {"checked_terms", checked_terms}};
  j["first_identity_failure"] = first_identity_failure ? nlohmann::json(*first_identity_failure) : nlohmann::json();
  return j;
}

OdeReport beta_ode_check(int order) {
  OdeReport rep;
  rep.order = order;
  ConstTables t = build_tables(order + 1);
  Puiseux br = beta_series(beta_recursion(order), order);
  // -36 (u + v'); v' reaches index n through v_{n-1}, u through u_{n/2}.
  Puiseux uv = (u_series(t, order) + derivative(v_series(t, order - 1))) * QRoot3(-36);
  uv.lo = std::max(uv.lo, br.lo);
  prune(uv);

  rep.identity_holds = true;
  for (int n = 0; n <= order; ++n) {
    Rational e(2 - 5 * n, 4);
    if (br.coeff(e) != uv.coeff(e)) {
      rep.identity_holds = false;
      rep.first_identity_failure = n;
      break;
    }
  }
  Puiseux r1 = beta_ode_residual(br);
  Puiseux r2 = beta_ode_residual(uv);
  rep.recursion_ode_zero = r1.terms.empty();
  rep.uv_ode_zero = r2.terms.empty();
  // Quarter-grid exponents from the leading z^{1/2} balance down to the exact floor.
  Rational span = (Rational(1, 2) - r1.lo) * Rational(4);
  rep.checked_terms = static_cast<int>(span.to_double()) + 1;
  return rep;
}

// ---- numeric side ---------------------------------------------------------

double asymptotic_ratio_u(int g, int L, const ConstTables& t) {
  if (g >= static_cast<int>(t.u.size()) || L >= static_cast<int>(t.mu.size()))
    throw MissingDependency("asymptotic_ratio_u: tables too short");
  const double x = 2.0 * g - 0.5;
  double corr = 1.0;
  double prod = 1.0;
  for (int l = 1; l <= L; ++l) {
    prod *= (x - l);
    corr += t.mu[static_cast<std::size_t>(l)].to_double() * std::pow(kA, l) / prod;
  }
  // ln|A^{-x} Gamma(x) S/(2 pi i)|, the prefactor being negative.
  double log_pref = -x * std::log(kA) + std::lgamma(x) + 0.25 * std::log(3.0) - std::log(2.0) - 1.5 * std::log(kPi);
  double ug = t.u[static_cast<std::size_t>(g)].to_double();
  return -ug / std::exp(log_pref) / corr;
}

StokesEstimate stokes_estimate(int g_max, int L, const ConstTables& t) {
  if (g_max >= static_cast<int>(t.v.size()) || L >= static_cast<int>(t.nu.size()))
    throw MissingDependency("stokes_estimate: tables too short");
  StokesEstimate est;
  est.g = g_max;
  est.L = L;
  const double h = kA / 2;
  for (int g = std::max(L + 1, 2); g <= g_max; ++g) {
    double corr = 1.0;
    double prod = 1.0;
    for (int l = 1; l <= L; ++l) {
      prod *= (g - l);
      corr += t.nu[static_cast<std::size_t>(l)].to_double() * std::pow(h, l) / prod;
    }
    double vg = t.v[static_cast<std::size_t>(g)].to_double();
    double val = vg * std::exp(g * std::log(h) - std::lgamma(g)) / corr;
    est.trajectory.emplace_back(g, val);
  }
  if (!est.trajectory.empty()) est.value = est.trajectory.back().second;
  return est;
}

std::vector<MapConstant> map_constants(int G, const ConstTables& t) {
  std::vector<MapConstant> out;
  for (int g = 0; g <= G; ++g) {
    MapConstant m;
    m.g = g;
    double ug = t.u.at(static_cast<std::size_t>(g)).to_double();
    m.t_variant_a = -ug / (std::pow(2.0, g - 2) * std::tgamma((5.0 * g - 1) / 2));
    m.t_variant_b = ug / (std::pow(2.0, g - 2) * std::tgamma((5.0 * g - 1) / 4));
    if (g % 2 == 1) m.p = t.v_at(g).to_double() / (std::pow(2.0, (g - 3) / 2.0) * std::tgamma((5.0 * g - 1) / 4));
    out.push_back(m);
  }
  return out;
}

double LogValue::value() const { return sign * std::exp(log_abs); }

double log_abs(const Rational& r) {
  if (r.is_zero()) return -INFINITY;
  auto lg = [](const BigInt& x) {
    long e = 0;
    double d = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log(std::fabs(d)) + static_cast<double>(e) * std::log(2.0);
  };
  return lg(r.num()) - lg(r.den());
}

LogValue darboux_estimate(int g, int n, const ConstTables& t) {
  if (g < 2) throw std::invalid_argument("darboux_estimate: g >= 2 required");
  if (g >= static_cast<int>(t.beta.size())) throw MissingDependency("darboux_estimate: beta table too short");
  double b = t.beta[static_cast<std::size_t>(g)].to_double() / (5 * g - 6);
  double a = (5.0 * g - 6) / 4;
  LogValue v;
  v.sign = b > 0 ? 1 : (b < 0 ? -1 : 0);
  v.log_abs = std::log(std::fabs(b)) + a * std::log(1.5) + 1.25 * (g - 2) * std::log(static_cast<double>(n)) -
              std::lgamma(a) + n * std::log(12 * kSqrt3);
  return v;
}

std::vector<double> darboux_compare(int g, const std::vector<int>& ns, const GenusTable& table, const ConstTables& t) {
  int n_max = ns.empty() ? 0 : *std::max_element(ns.begin(), ns.end());
  auto c = coefficients(g, n_max, table);
  std::vector<double> out;
  for (int n : ns) {
    const Rational& exact = c.at(static_cast<std::size_t>(n - 1));
    LogValue est = darboux_estimate(g, n, t);
    out.push_back(exact.sign() * est.sign * std::exp(log_abs(exact) - est.log_abs));
  }
  return out;
}

double darboux_compare(int g, int n, const GenusTable& table, const ConstTables& t) {
  return darboux_compare(g, std::vector<int>{n}, table, t).front();
}

double eta_singular_ratio(const Rational& delta) {
  // s_c = (3 - sqrt3)/6, z_c = sqrt3/36.
  QRoot3 s = QRoot3(Rational(1, 2), Rational(-1, 6)) - QRoot3(delta);
  QRoot3 eta = QRoot3(1) - QRoot3(6) * s + QRoot3(6) * s * s;
  QRoot3 z = QRoot3(Rational(1, 2)) * s * (QRoot3(1) - s) * (QRoot3(1) - QRoot3(2) * s);
  QRoot3 zc(Rational(0), Rational(1, 36));
  QRoot3 gap = QRoot3(1) - z / zc;
  // Ratio squared is exact; take the root only at the end.
  QRoot3 sq = eta * eta / gap;
  return std::sqrt(sq.to_double());
}

nlohmann::json tables_to_json(const ConstTables& t) {
  auto col = [](const auto& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      QRoot3 q(xs[i]);
      a.push_back({{"index", i}, {"exact", q.str()}, {"float", q.to_double()}});
    }
    return a;
  };
  return {{"u", col(t.u)}, {"v", col(t.v)}, {"beta", col(t.beta)}, {"mu", col(t.mu)}, {"nu", col(t.nu)},
          {"conventions", t.conventions}};
}

}  // namespace lomap
