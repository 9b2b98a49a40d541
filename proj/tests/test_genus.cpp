#include <chrono>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lomap/genus.hpp"

using namespace lomap;
using Q = Rational;

namespace {

GenusTable& shared_table() {
  static GenusTable t;
  return t;
}

PsiVector psi_of(std::vector<Q> mu) {
  PsiVector v;
  for (std::size_t i = 0; i < mu.size(); ++i) v.add(static_cast<int>(i), mu[i]);
  return v;
}

}  // namespace

TEST_CASE("t series deltas") {
  GenusTable& t = shared_table();
  AlgElem t0 = t_series(0, t);
  CHECK(t0 - base_series(0) == AlgElem(RatFunc(1) - (alg::z() * Q(2)).inverse()));
  CHECK(t_series(1, t) == base_series(1) + AlgElem(1));
  CHECK_THROWS_AS(t_series(5, t), MissingDependency);
}

TEST_CASE("V coefficients at k = 0, 1") {
  GenusTable& t = shared_table();
  AlgElem l0 = base_series(0), l1 = base_series(1);
  AlgElem z = AlgElem(alg::z());
  AlgElem expect0 = (l0 + theta_op(1, l0) * Q(2) + theta_op(2, l0)) * Q(8);
  CHECK(v_coefficient(0, t) == expect0);
  CHECK(v_coefficient(1, t) == (theta_op(1, l1) * Q(8) + theta_op(2, l1) * Q(8)));
}

TEST_CASE("genus two base case and the operator") {
  GenusTable& t = shared_table();
  PsiVector l2 = solve_genus(2, t);
  CHECK(l2 == psi_of({Q(23, 12), Q(-3), Q(13, 12)}));
  CHECK(t.record(2).residual_checked);
  // Normalized operator: (4/3)D^2 - 4(g psi2 + psi0 - 4)D - (4/3)(2psi4 + 9g(3-g)psi2 + 12psi0 - 32)
  const SolveInfo& info = t.last_solve();
  int g = 2;
  CHECK(info.operator_scalar[2] == Q(4, 3));
  CHECK(info.operator_constant[2].is_zero());
  CHECK(info.operator_scalar[1] == Q(16));
  CHECK(info.operator_constant[1] == PsiVector::unit(2, Q(-4 * g)) + PsiVector::unit(0, Q(-4)));
  CHECK(info.operator_scalar[0] == Q(128, 3));
  CHECK(info.operator_constant[0] == PsiVector::unit(4, Q(-8, 3)) + PsiVector::unit(2, Q(-12 * g * (3 - g))) + PsiVector::unit(0, Q(-16)));
  auto c = coefficients(2, 3, t);
  CHECK(c[0] == Q(7));
  CHECK(c[1] == Q(202));
  CHECK(c[2] == Q(4900));
}

TEST_CASE("genus three and four against the brute-force solve") {
  GenusTable& t = shared_table();
  PsiVector l3 = solve_genus(3, t);
  CHECK(l3 == psi_of({Q(5, 6), Q(-5, 8), Q(37, 36), Q(-4, 3), Q(-41, 36), Q(9, 8), Q(-13, 18), Q(5, 6)}));
  PsiVector l4 = solve_genus(4, t);
  CHECK(l4 == psi_of({Q(-497, 2592), Q(5, 72), Q(12445, 5184), Q(-505, 144), Q(-1007, 5184), Q(125, 48), Q(-6259, 1728),
                      Q(545, 144), Q(-1807, 5184), Q(-245, 144), Q(241, 162), Q(-5, 4), Q(607, 1296)}));
  const SolveInfo& info = t.last_solve();
  CHECK(info.operator_constant[1] == PsiVector::unit(2, Q(-16)) + PsiVector::unit(0, Q(-4)));
  CHECK(info.rank == info.unknowns);
  CHECK(coefficients(3, 2, t)[1] == Q(128));
}

TEST_CASE("structure, integrality and z-series residual up to g = 8") {
  GenusTable& t = shared_table();
  t.extend_to(8);
  for (int g = 2; g <= 8; ++g) {
    CHECK(t.record(g).psi->top_index() <= 5 * g - 8);
    CHECK(t.record(g).residual_checked);
    QSeries s = t.zseries(g, 12);
    CHECK(s.coeff(0) == Q(0));
    for (int n = 1; n <= 12; ++n) {
      CHECK(s.coeff(n).is_integer());
      CHECK(s.coeff(n) >= Q(0));
    }
    QSeries r = recursion_zseries_residual(g, 14, t);
    CHECK(r.truncation() > 12);
    CHECK(r.truncated(13).is_zero());
  }
}

TEST_CASE("master equation in (z, w)") {
  GenusTable& t = shared_table();
  MasterReport r = residual_master(2, 6, t);
  CHECK(r.pass);
  CHECK(r.v_match);
  CHECK_FALSE(r.proof_line_variant_pass);
  MasterReport v = residual_master(0, 0, t);
  CHECK(v.pass);
}

TEST_CASE("cache round trip is byte identical") {
  GenusTable& t = shared_table();
  auto dir = std::filesystem::temp_directory_path() / "lomap_cache_test";
  std::filesystem::remove_all(dir);
  write_genus_cache(dir.string(), t.record(2));
  std::ifstream in(genus_cache_path(dir.string(), 2));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == "{\"g\":2,\"psi\":[[\"0\",\"23/12\"],[\"1\",\"-3\"],[\"2\",\"13/12\"]],\"residual_checked\":true}\n");
  auto back = read_genus_cache(dir.string(), 2);
  REQUIRE(back);
  CHECK(*back->psi == *t.record(2).psi);
  GenusTable fresh;
  fresh.extend_to(3, dir.string());
  write_genus_cache(dir.string(), fresh.record(3));
  std::ifstream in3(genus_cache_path(dir.string(), 3));
  std::string t3((std::istreambuf_iterator<char>(in3)), std::istreambuf_iterator<char>());
  CHECK(t3 == genus_cache_json(t.record(3)).dump() + "\n");
  std::filesystem::remove_all(dir);
}
