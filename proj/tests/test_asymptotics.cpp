#include <doctest.h>

#include <cmath>

#include "lomap/asymptotics.hpp"
#include "lomap/genus.hpp"

using namespace lomap;

namespace {
const QRoot3 r3 = QRoot3::sqrt3();
QRoot3 q(long p, long d = 1) { return QRoot3(Rational(p, d)); }
QRoot3 qs(long p, long d = 1) { return QRoot3(Rational(0), Rational(p, d)); }
}  // namespace

TEST_CASE("u and v coefficients") {
  auto u = u_coeffs(6);
  CHECK(u[0] == Rational(1));
  CHECK(u[1] == Rational(-1, 48));
  CHECK(u[2] == Rational(-49, 4608));
  auto v = v_coeffs(6, u);
  CHECK(v[0] == qs(-1));
  CHECK(v[1] == q(1, 4));
  CHECK(v[2] == qs(5, 48));
  CHECK(v[3] == q(25, 96));
}

TEST_CASE("parity structure of the tables") {
  ConstTables t = build_tables(20);
  for (std::size_t g = 0; g < t.v.size(); ++g) {
    if (g % 2 == 1)
      CHECK(t.v[g].b.is_zero());
    else
      CHECK(t.v[g].a.is_zero());
  }
  for (std::size_t g = 0; g < t.beta.size(); ++g) {
    if (g % 2 == 0)
      CHECK(t.beta[g].b.is_zero());
    else
      CHECK(t.beta[g].a.is_zero());
  }
}

TEST_CASE("beta seeds and low values") {
  auto b = beta_recursion(4);
  CHECK(b[0] == q(-36));
  CHECK(b[1] == QRoot3(18) / r3);
  CHECK(b[2] == q(13, 3));
  CHECK(b[3] == qs(5, 2));
  CHECK(b[4] == q(4249, 648));
}

TEST_CASE("beta agrees across three routes") {
  const int G = 12;
  auto rec = beta_recursion(G);
  auto rec_alt = beta_recursion(G, TripleSum::Proof);
  auto u = u_coeffs(G + 2);
  auto v = v_coeffs(G + 2, u);
  auto uv = beta_from_uv(G, u, v);
  CHECK(uv[0] == q(-36));
  CHECK(uv[1] == qs(6));
  GenusTable table;
  table.extend_to(G);
  for (int g = 2; g <= G; ++g) {
    CAPTURE(g);
    CHECK(rec[static_cast<std::size_t>(g)] == uv[static_cast<std::size_t>(g)]);
    CHECK(rec[static_cast<std::size_t>(g)] == rec_alt[static_cast<std::size_t>(g)]);
    CHECK(rec[static_cast<std::size_t>(g)] == beta_from_genus(g, table));
  }
}

TEST_CASE("mu and nu") {
  ConstTables t = build_tables(6);
  CHECK(t.mu[0] == q(1));
  CHECK(t.mu[1] == qs(-5, 192));
  CHECK(t.mu[2] == q(75, 8192));
  CHECK(t.nu[0] == q(1));
  CHECK(t.nu[1] == qs(-1, 12));
  CHECK(t.nu[2] == q(-3, 32));
  CHECK(t.nu[2] == (t.v[3] + t.v[2] * t.nu[1]) * q(-2, 5));
}

TEST_CASE("beta ODE and the (u, v) identity") {
  auto rep = beta_ode_check(12);
  CHECK(rep.identity_holds);
  CHECK(rep.recursion_ode_zero);
  CHECK(rep.uv_ode_zero);
  CHECK(rep.checked_terms > 0);

  // A perturbed beta_5 must show up in the residual.
  auto b = beta_recursion(8);
  b[5] += q(1);
  CHECK_FALSE(beta_ode_residual(beta_series(b, 8)).terms.empty());

  // Leading balance: the beta_0 term alone; both linear terms and the cubic land on z^{1/2}.
  Puiseux b0 = beta_series(beta_recursion(0), 0);
  Puiseux lin = derivative(b0).shifted(Rational(1)) * q(-8, 15) + b0 * q(-16, 15);
  CHECK(lin.coeff(Rational(1, 2)) == q(48));
  CHECK(beta_ode_residual(b0).coeff(Rational(1, 2)).is_zero());
}

TEST_CASE("u transseries ratio") {
  ConstTables t = build_tables(24);
  double r0 = asymptotic_ratio_u(20, 0, t);
  double r3v = asymptotic_ratio_u(20, 3, t);
  CHECK(std::fabs(r0 - 1) < 0.05);
  CHECK(std::fabs(r3v - 1) < std::fabs(r0 - 1));
  CHECK(std::fabs(r3v - 1) < 0.01);
  double e10 = std::fabs(asymptotic_ratio_u(10, 3, t) - 1);
  double e15 = std::fabs(asymptotic_ratio_u(15, 3, t) - 1);
  double e20 = std::fabs(r3v - 1);
  CHECK(e15 < e10);
  CHECK(e20 < e15);
}

TEST_CASE("Stokes estimate stabilizes") {
  ConstTables t = build_tables(40);
  auto e30 = stokes_estimate(30, 6, t);
  auto e40 = stokes_estimate(40, 6, t);
  CHECK(e40.value != 0);
  CHECK(std::fabs(e30.value - e40.value) / std::fabs(e40.value) < 5e-4);
  for (const auto& [g, val] : e40.trajectory)
    if (g >= 20) CHECK(std::signbit(val) == std::signbit(e40.value));
}

TEST_CASE("map constants") {
  ConstTables t = build_tables(4);
  auto mc = map_constants(3, t);
  CHECK_FALSE(mc[0].p.has_value());
  REQUIRE(mc[1].p.has_value());
  CHECK(*mc[1].p == doctest::Approx(0.5));
  // Variant A gives the planar constant 2/sqrt(pi).
  CHECK(mc[0].t_variant_a == doctest::Approx(2 / std::sqrt(std::acos(-1.0))));
  CHECK(mc[1].t_variant_a != doctest::Approx(mc[1].t_variant_b));
}

TEST_CASE("Darboux leading term") {
  ConstTables t = build_tables(4);
  for (int n : {1, 5, 30}) {
    LogValue e = darboux_estimate(2, n, t);
    CHECK(e.sign == 1);
    CHECK(e.log_abs == doctest::Approx(std::log(13.0 / 8) + n * std::log(12 * std::sqrt(3.0))));
  }
}

TEST_CASE("eta singular expansion constant") {
  const double target = std::sqrt(6.0) / 3;
  double prev = 1;
  for (long k : {1000L, 100000L, 10000000L, 1000000000L}) {
    double err = std::fabs(eta_singular_ratio(Rational(1, k)) - target);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-8);
}
