#include <doctest.h>

#include <cmath>

#include "lomap/genus.hpp"
#include "lomap/oracle.hpp"
#include "lomap/pfaffian.hpp"

using namespace lomap;

namespace {
NPolynomial np(std::initializer_list<long> cs) {
  std::vector<Rational> v;
  for (long c : cs) v.emplace_back(c);
  return NPolynomial(std::move(v));
}
std::uint64_t double_factorial(int n) {
  std::uint64_t r = 1;
  for (int k = n; k > 1; k -= 2) r *= static_cast<std::uint64_t>(k);
  return r;
}
}  // namespace

TEST_CASE("wick moments") {
  CHECK(wick_moment({3}).is_zero());
  CHECK(wick_moment({2}) == np({0, 1, 1}));
  CHECK(wick_moment({3, 3}) == np({0, 42, 54, 24}));
  CHECK(wick_moment({1, 1}) == np({0, 2}));
  CHECK(wick_moment({}) == np({1}));
  CHECK_THROWS_AS(wick_moment(std::vector<int>(10, 3), WickMethod::Memo), SizeLimit);
  CHECK_THROWS_AS(wick_moment({3, 3, 3, 3, 3, 3, 2}, WickMethod::Enumerate), SizeLimit);
}

TEST_CASE("wick methods agree and enumerate (2m-1)!! matchings") {
  std::vector<std::vector<int>> cases{{1, 1}, {2, 2}, {1, 3}, {3, 3, 2}, {1, 2, 3, 2}, {3, 3, 3, 3}, {1, 1, 1, 3, 2, 2, 2}};
  for (const auto& ks : cases) {
    WickStats st;
    NPolynomial e = wick_moment(ks, WickMethod::Enumerate, 0, &st);
    CHECK(e == wick_moment(ks, WickMethod::Memo));
    int h = 0;
    for (int k : ks) h += k;
    CHECK(st.matchings == double_factorial(h - 1));
    CHECK(st.resolutions == st.matchings << (h / 2));
  }
}

TEST_CASE("wick result does not depend on partitioning") {
  std::vector<int> ks{3, 3, 3, 3};
  auto one = wick_moment(ks, WickMethod::Memo, 1);
  CHECK(one == wick_moment(ks, WickMethod::Memo, 4));
  CHECK(one == wick_moment(ks, WickMethod::Enumerate, 3));
  CHECK(wick_moment({2, 3, 3}) == wick_moment({3, 2, 3}));
}

TEST_CASE("graded log and exp") {
  GradedSeries3 y = log_zN(8);
  CHECK(y.coeff({0, 0, 0}).is_zero());
  CHECK(y.coeff({0, 0, 2}) == NPolynomial({Rational(0), Rational(7, 12), Rational(3, 4), Rational(1, 3)}));
  CHECK(y.coeff({2, 0, 0}) == NPolynomial({Rational(0), Rational(1, 4)}));
  GradedSeries3 z = zN_graded(8);
  GradedSeries3 back = exp(y) - z;
  CHECK(back.terms().empty());
}

TEST_CASE("map series oracle and genus splits") {
  auto L = map_series_oracle(4);
  CHECK(L.at(2) == np({0, 7, 9, 4}));
  auto s2 = genus_split(2, L.at(2));
  CHECK(s2 == std::vector<Rational>{4, 9, 7, 0});
  GenusTable table;
  table.extend_to(4);
  auto s4 = genus_split(4, L.at(4));
  std::vector<Rational> expect;
  for (int g = 0; g <= 4; ++g) expect.push_back(table.zseries(g, 2).coeff(2));
  CHECK(s4 == expect);
  CHECK(s4[0] == Rational(32));
  CHECK(s4[1] == Rational(118));
  CHECK(s4[2] == Rational(202));
  for (const auto& [v, c] : L) CHECK(c.degree() <= 2 + v / 2);
}

TEST_CASE("virasoro") {
  auto r = verify_virasoro(6);
  CHECK(r.pass);
  CHECK(r.details["d2_at_zero"] == NPolynomial({Rational(0), Rational(1, 4), Rational(1, 4)}).str("N"));
}

TEST_CASE("bkp variants") {
  auto proof = verify_bkp(6, BkpVariant::Proof);
  CHECK(proof.pass);
  CHECK(proof.details["lhs_t0"] == NPolynomial({Rational(0), Rational(-3, 4), Rational(3, 4)}).str("N"));
  auto stmt = verify_bkp(6, BkpVariant::Statement);
  CHECK_FALSE(stmt.pass);
  CHECK(stmt.first_failure == std::optional<std::string>("1"));
}

TEST_CASE("y reductions") {
  auto r = verify_y_reductions(3);
  CHECK(r.pass);
}

TEST_CASE("mehta normalization") {
  CHECK(mehta_ratio() == np({0, -1, 1}));
  CHECK(mehta_ratio().eval(Rational(2)) == Rational(2));
  CHECK(mehta_ratio().eval(Rational(1)) == Rational(0));
  CHECK(mehta_norm_closed(1) == doctest::Approx(2 * std::sqrt(M_PI)));
  for (int n : {1, 2, 4}) CHECK(std::fabs(mehta_norm_quadrature(n) / mehta_norm_closed(n) - 1) < 1e-6);
  double ratio = mehta_norm_quadrature(4) * mehta_norm_quadrature(0) / std::pow(mehta_norm_quadrature(2), 2);
  CHECK(std::fabs(ratio / 2 - 1) < 1e-6);
}

TEST_CASE("pfaffian basics") {
  AntisymMatrix<Rational> a(2);
  a.set(0, 1, Rational(5, 3));
  CHECK(pfaffian(a) == Rational(5, 3));
  CHECK_THROWS_AS(AntisymMatrix<Rational>(3), OddDimension);

  FormalPoly pf4 = formal_pfaffian({1, 2, 3, 4});
  FormalPoly expect = FormalPoly::mu(1, 2) * FormalPoly::mu(3, 4) - FormalPoly::mu(1, 3) * FormalPoly::mu(2, 4) +
                      FormalPoly::mu(1, 4) * FormalPoly::mu(2, 3);
  CHECK(pf4 == expect);

  AntisymMatrix<double> d(4);
  d.set(0, 1, 1.5);
  d.set(2, 3, 2.0);
  CHECK(pfaffian(d) == doctest::Approx(3.0));
}

TEST_CASE("pfaffian identities") {
  CHECK(verify_pfaffian_det(100, 10, 20240601).pass);
  CHECK(verify_pfaffian_quadratic(1, 1, 7).pass);
  CHECK(verify_pfaffian_quadratic(2, 2, 11).pass);
  CHECK(verify_pfaffian_quadratic(2, 1, 13).pass);
  CHECK(verify_pfaffian_quadratic(2, 2, 0, true).pass);
  for (int dim : {2, 4, 6})
    for (int k = 1; k <= 3; ++k) {
      CAPTURE(dim);
      CAPTURE(k);
      CHECK(verify_pfaffian_derivative(k, dim).pass);
    }
}

TEST_CASE("report json shape") {
  auto j = verify_pfaffian_quadratic(1, 1, 5).to_json();
  for (const char* key : {"check", "variant", "max_weight", "status", "first_failure", "seed"}) CHECK(j.contains(key));
  CHECK(j["first_failure"].is_null());
  CHECK(j["seed"] == 5);
}
