#include "lomap/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <mutex>
#include <random>

#include "lomap/errors.hpp"
#include "lomap/pfaffian.hpp"

namespace lomap {

namespace {

NPolynomial npc(const Rational& c) { return NPolynomial::constant(c); }
const NPolynomial kN = NPolynomial::x();

std::mutex g_moment_mu;
std::map<std::pair<std::vector<int>, int>, NPolynomial> g_moments;

NPolynomial cached_moment(const std::vector<int>& ks, WickMethod method, int threads) {
  auto key = std::make_pair(ks, static_cast<int>(method));
  {
    std::lock_guard<std::mutex> lock(g_moment_mu);
    auto it = g_moments.find(key);
    if (it != g_moments.end()) return it->second;
  }
  NPolynomial m = wick_moment(ks, method, threads);
  std::lock_guard<std::mutex> lock(g_moment_mu);
  g_moments.emplace(key, m);
  return m;
}

std::vector<int> trace_powers(const Mono3& m) {
  std::vector<int> ks;
  for (int k = 1; k <= 3; ++k)
    for (int i = 0; i < m[static_cast<std::size_t>(k - 1)]; ++i) ks.push_back(k);
  return ks;
}

// Laurent series in x with NPolynomial coefficients, exact through `order`.
struct XSeries {
  std::map<int, NPolynomial> c;
  int order = 0;

  NPolynomial at(int e) const {
    auto it = c.find(e);
    return it == c.end() ? NPolynomial() : it->second;
  }
  int valuation() const { return c.empty() ? order + 1 : c.begin()->first; }
  void add(int e, const NPolynomial& v) {
    if (e > order || v.is_zero()) return;
    auto [it, ins] = c.emplace(e, v);
    if (!ins) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }
};

XSeries operator+(const XSeries& a, const XSeries& b) {
  XSeries r;
  r.order = std::min(a.order, b.order);
  for (const auto& [e, v] : a.c) r.add(e, v);
  for (const auto& [e, v] : b.c) r.add(e, v);
  return r;
}

XSeries scaled(const XSeries& a, const NPolynomial& s) {
  XSeries r;
  r.order = a.order;
  for (const auto& [e, v] : a.c) r.add(e, v * s);
  return r;
}

XSeries times_x(const XSeries& a, int k) {
  XSeries r;
  r.order = a.order + k;
  for (const auto& [e, v] : a.c) r.add(e + k, v);
  return r;
}

// (D + s) with D = 3x d/dx.
XSeries d_shift(const XSeries& a, int s) {
  XSeries r;
  r.order = a.order;
  for (const auto& [e, v] : a.c) r.add(e, v * Rational(3 * e + s));
  return r;
}

XSeries from_graded(const GradedSeries3& g) {
  XSeries r;
  r.order = g.max_weight() / 3;
  for (const auto& [e, v] : g.restrict_t3()) r.add(e, v);
  return r;
}

std::optional<std::string> first_nonzero(const GradedSeries3& r, int max_weight) {
  for (const auto& [m, c] : r.terms())
    if (weight(m) <= max_weight && !c.is_zero()) return mono_str(m);
  return std::nullopt;
}

}  // namespace

GradedSeries3 zN_graded(int max_weight, WickMethod method, int threads) {
  GradedSeries3 z(max_weight);
  for (int e3 = 0; 3 * e3 <= max_weight; ++e3)
    for (int e2 = 0; 3 * e3 + 2 * e2 <= max_weight; ++e2)
      for (int e1 = 0; 3 * e3 + 2 * e2 + e1 <= max_weight; ++e1) {
        Mono3 m{e1, e2, e3};
        if (weight(m) % 2 != 0) continue;
        Rational scale(1);
        for (int k = 1; k <= 3; ++k) {
          int e = m[static_cast<std::size_t>(k - 1)];
          scale /= pow(Rational(2 * k), e) * factorial(e);
        }
        z.set(m, cached_moment(trace_powers(m), method, threads) * scale);
      }
  return z;
}

GradedSeries3 log_zN(int max_weight, WickMethod method, int threads) {
  return log(zN_graded(max_weight, method, threads));
}

std::map<int, NPolynomial> map_series_oracle(int v_max, WickMethod method, int threads) {
  const int limit = method == WickMethod::Memo ? kWickMemoLimit : kWickEnumerateLimit;
  if (3 * (v_max - v_max % 2) > limit) throw SizeLimit("map_series_oracle: " + std::to_string(v_max) + " vertices exceed the Wick bound");
  std::vector<NPolynomial> z(static_cast<std::size_t>(v_max) + 1), y(z.size());
  z[0] = npc(Rational(1));
  for (int v = 2; v <= v_max; v += 2) {
    Rational scale = Rational(1) / (pow(Rational(6), v) * factorial(v));
    z[static_cast<std::size_t>(v)] = cached_moment(std::vector<int>(static_cast<std::size_t>(v), 3), method, threads) * scale;
  }
  std::map<int, NPolynomial> out;
  for (int v = 1; v <= v_max; ++v) {
    NPolynomial acc = z[static_cast<std::size_t>(v)] * Rational(v);
    for (int j = 1; j < v; ++j) acc -= y[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(v - j)] * Rational(j);
    y[static_cast<std::size_t>(v)] = acc * Rational(1, v);
    if (v % 2 == 0) out.emplace(v, y[static_cast<std::size_t>(v)] * Rational(6 * v));
  }
  return out;
}

std::vector<Rational> genus_split(int V, const NPolynomial& coeff) {
  const int top = 2 + V / 2;
  if (coeff.degree() > top) throw std::domain_error("genus_split: N-degree exceeds 2 + V/2");
  std::vector<Rational> out(static_cast<std::size_t>(top) + 1);
  for (int f = 0; f <= coeff.degree(); ++f) out[static_cast<std::size_t>(top - f)] = coeff.coeff(f);
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j{{"check", check}, {"variant", variant}, {"max_weight", max_weight},
                   {"status", pass ? "pass" : "fail"}};
  j["first_failure"] = first_failure ? nlohmann::json(*first_failure) : nlohmann::json();
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json();
  if (!details.empty()) j["details"] = details;
  return j;
}

VerifyReport verify_virasoro(int max_weight) {
  VerifyReport rep;
  rep.check = "virasoro";
  rep.variant = "both";
  rep.max_weight = max_weight;
  const int W = max_weight + 2;
  GradedSeries3 y = log_zN(W);
  GradedSeries3 d1 = y.derivative(1), d2 = y.derivative(2), d3 = y.derivative(3);
  auto t = [&](int k) { return GradedSeries3::t(k, W); };

  GradedSeries3 r1 = d1 - t(2) * d1 - t(3) * d2 * npc(Rational(2)) - t(1) * (kN * Rational(1, 2));
  GradedSeries3 constant = GradedSeries3::constant((kN * kN + kN) * Rational(1, 4), W);
  GradedSeries3 r2 = d2 - t(1) * d1 * npc(Rational(1, 2)) - t(2) * d2 - t(3) * d3 * npc(Rational(3, 2)) - constant;

  auto f1 = first_nonzero(r1, max_weight);
  auto f2 = first_nonzero(r2, max_weight);
  rep.pass = !f1 && !f2 && r1.max_weight() >= max_weight && r2.max_weight() >= max_weight;
  if (f1) rep.first_failure = "eq1 " + *f1;
  else if (f2) rep.first_failure = "eq2 " + *f2;
  rep.details["eq1"] = f1 ? "fail" : "pass";
  rep.details["eq2"] = f2 ? "fail" : "pass";
  rep.details["d2_at_zero"] = d2.coeff({0, 0, 0}).str("N");
  return rep;
}

VerifyReport verify_bkp(int max_weight, BkpVariant variant) {
  VerifyReport rep;
  rep.check = "bkp";
  rep.variant = variant == BkpVariant::Proof ? "proof" : "statement";
  rep.max_weight = max_weight;
  const int W = max_weight + 4;
  GradedSeries3 y = log_zN(W);
  GradedSeries3 d11 = y.derivative(1).derivative(1);
  GradedSeries3 d1111 = d11.derivative(1).derivative(1);
  GradedSeries3 d22 = y.derivative(2).derivative(2);
  GradedSeries3 d31 = y.derivative(3).derivative(1);
  const Rational sign = variant == BkpVariant::Proof ? Rational(-3) : Rational(3);
  GradedSeries3 lhs = d1111 + d22 * npc(Rational(3)) + d31 * npc(sign) + d11 * d11 * npc(Rational(6));
  GradedSeries3 shifted = y.shift_N(2) + y.shift_N(-2) - y * npc(Rational(2));
  const Rational pref = variant == BkpVariant::Proof ? Rational(3, 4) : Rational(3);
  GradedSeries3 rhs = exp(shifted) * (mehta_ratio() * pref);
  GradedSeries3 r = lhs - rhs;
  rep.first_failure = first_nonzero(r, max_weight);
  rep.pass = !rep.first_failure && r.max_weight() >= max_weight;
  rep.details["lhs_t0"] = lhs.coeff({0, 0, 0}).str("N");
  rep.details["rhs_t0"] = rhs.coeff({0, 0, 0}).str("N");
  rep.details["cumulants_t0"] = {{"d1d1", d11.coeff({0, 0, 0}).str("N")},
                                 {"d2d2", d22.coeff({0, 0, 0}).str("N")},
                                 {"d3d1", d31.coeff({0, 0, 0}).str("N")},
                                 {"d1d1d1d1", d1111.coeff({0, 0, 0}).str("N")}};
  return rep;
}

VerifyReport verify_y_reductions(int x_order) {
  VerifyReport rep;
  rep.check = "y-reductions";
  rep.variant = "Y11,Y1111,Y22,Y13";
  const int W = 3 * x_order + 4;
  rep.max_weight = W;
  GradedSeries3 y = log_zN(W);
  XSeries yx = from_graded(y);
  // T = 6x d/dx Y + N(N+1) - N/(2x^2).
  XSeries t;
  t.order = yx.order;
  for (const auto& [e, v] : yx.c)
    if (e > 0) t.add(e, v * Rational(6 * e));
  t.add(0, kN * kN + kN);
  t.add(-2, kN * Rational(-1, 2));
  XSeries n_term;
  n_term.order = 1000;
  n_term.add(-2, kN * Rational(-1, 4));

  XSeries dt4 = d_shift(t, 4);
  struct Eq {
    const char* name;
    XSeries lhs, rhs;
  };
  std::vector<Eq> eqs{
      {"Y11", from_graded(y.derivative(1).derivative(1)), scaled(times_x(dt4, 2), npc(Rational(1, 2)))},
      {"Y1111", from_graded(y.derivative(1).derivative(1).derivative(1).derivative(1)),
       scaled(times_x(d_shift(d_shift(dt4, 8), 12), 4), npc(Rational(1, 2)))},
      {"Y22", from_graded(y.derivative(2).derivative(2)), scaled(d_shift(t, 2), npc(Rational(1, 8))) + n_term},
      {"Y13", from_graded(y.derivative(1).derivative(3)), scaled(d_shift(t, 3), npc(Rational(1, 6))) + n_term},
  };
  rep.pass = true;
  for (const auto& eq : eqs) {
    bool ok = eq.lhs.order >= x_order && eq.rhs.order >= x_order;
    for (int e = -2; e <= x_order && ok; ++e) {
      if (eq.lhs.at(e) != eq.rhs.at(e)) {
        ok = false;
        if (!rep.first_failure) rep.first_failure = std::string(eq.name) + " x^" + std::to_string(e);
      }
    }
    rep.details[eq.name] = ok ? "pass" : "fail";
    rep.pass = rep.pass && ok;
  }
  rep.details["x_order"] = x_order;
  return rep;
}

NPolynomial mehta_ratio() { return kN * kN - kN; }

double mehta_norm_closed(int n) {
  double lg = -std::lgamma(n + 1.0) + (n / 2.0 + n * (n - 1) / 4.0) * std::log(2.0) + (n / 2.0) * std::log(2 * M_PI);
  for (int j = 1; j <= n; ++j) lg += std::lgamma(1 + j / 2.0) - std::lgamma(1.5);
  return std::exp(lg);
}

double mehta_norm_quadrature(int n) {
  if (n < 0 || n > 4) throw SizeLimit("mehta_norm_quadrature: n <= 4");
  if (n == 0) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> x(static_cast<std::size_t>(n));
  // Over x_1 < ... < x_n the Vandermonde is positive, and the n! orderings cancel the 1/n!.
  std::function<double(int)> level = [&](int d) -> double {
    if (d == n) {
      double v = 1.0, q = 0.0;
      for (int i = 0; i < n; ++i) {
        q += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) v *= x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(i)];
      }
      return v * std::exp(-q / 4);
    }
    // The weight is below e^{-64} past |x| = 16.
    const double cut = 16.0;
    double lo = d == 0 ? -cut : x[static_cast<std::size_t>(d - 1)];
    auto f = [&](double t) {
      x[static_cast<std::size_t>(d)] = t;
      return level(d + 1);
    };
    return gauss_kronrod<double, 61>::integrate(f, lo, cut, 0);
  };
  return level(0);
}

VerifyReport verify_pfaffian_det(int count, int max_dim, std::uint64_t seed) {
  VerifyReport rep;
  rep.check = "pfaffian";
  rep.variant = "pf-squared-det";
  rep.max_weight = max_dim;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> half(1, max_dim / 2);
  rep.pass = true;
  int direct_sums = 0;
  for (int i = 0; i < count; ++i) {
    int dim = 2 * half(rng);
    auto a = random_antisym(dim, rng);
    Rational pf = pfaffian(a);
    if (pf * pf != det_exact(a.matrix())) {
      rep.pass = false;
      rep.first_failure = "matrix " + std::to_string(i) + " dim " + std::to_string(dim);
      break;
    }
    if (dim + 2 <= max_dim) {
      auto b = random_antisym(2, rng);
      if (pfaffian(direct_sum(a, b)) != pf * pfaffian(b)) {
        rep.pass = false;
        rep.first_failure = "direct sum " + std::to_string(i);
        break;
      }
      ++direct_sums;
    }
  }
  rep.details["matrices"] = count;
  rep.details["direct_sums"] = direct_sums;
  return rep;
}

VerifyReport verify_pfaffian_quadratic(int m, int n, std::uint64_t seed, bool zero_entries) {
  VerifyReport rep;
  rep.check = "pfaffian";
  rep.variant = "quadratic m=" + std::to_string(m) + " n=" + std::to_string(n) + (zero_entries ? " zero" : "");
  rep.max_weight = 2 * m + 2 * n;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  AntisymMatrix<Rational> a = zero_entries ? AntisymMatrix<Rational>(2 * m + 2 * n) : random_antisym(2 * m + 2 * n, rng);
  std::vector<int> as, bs;
  for (int i = 0; i < 2 * m; ++i) as.push_back(i);
  for (int i = 0; i < 2 * n; ++i) bs.push_back(2 * m + i);
  auto cat = [](std::vector<int> x, const std::vector<int>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  Rational lhs = pfaffian(a, cat(as, bs)) * pfaffian(a, bs);
  Rational rhs(0);
  for (int j = 2; j <= 2 * m; ++j) {
    std::vector<int> pair{as[0], as[static_cast<std::size_t>(j - 1)]};
    std::vector<int> rest;
    for (int p = 2; p <= 2 * m; ++p)
      if (p != j) rest.push_back(as[static_cast<std::size_t>(p - 1)]);
    Rational term = pfaffian(a, cat(pair, bs)) * pfaffian(a, cat(rest, bs));
    rhs += j % 2 == 0 ? term : -term;
  }
  rep.pass = lhs == rhs;
  if (!rep.pass) rep.first_failure = "lhs " + lhs.str() + " rhs " + rhs.str();
  return rep;
}

VerifyReport verify_pfaffian_derivative(int k, int dim) {
  VerifyReport rep;
  rep.check = "pfaffian";
  rep.variant = "derivative k=" + std::to_string(k) + " 2N=" + std::to_string(dim);
  rep.max_weight = dim;
  std::vector<int> labels;
  for (int i = 1; i <= dim; ++i) labels.push_back(i);
  FormalPoly lhs = formal_pfaffian(labels).derivative(k) * Rational(2 * k);
  FormalPoly rhs;
  for (int j = 0; j < dim; ++j) {
    auto l = labels;
    l[static_cast<std::size_t>(j)] += k;
    rhs += formal_pfaffian(l);
  }
  rep.pass = lhs == rhs;
  if (!rep.pass) rep.first_failure = (lhs - rhs).str();
  rep.details["terms"] = lhs.terms().size();
  return rep;
}

}  // namespace lomap
