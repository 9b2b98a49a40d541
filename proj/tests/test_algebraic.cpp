#include "doctest.h"
#include "lomap/algebraic.hpp"
#include "lomap/errors.hpp"

using namespace lomap;
using Q = Rational;
using QP = Poly<Rational>;

namespace {

QSeries zser(std::initializer_list<Q> c, int from = 1) { return QSeries(from, std::vector<Q>(c)); }

QSeries six_z_ddz(const QSeries& x) {
  return (diff(x) * Q(6)).shifted(1);
}

bool agree(const QSeries& a, const QSeries& b, int order) {
  for (int n = std::min(a.valuation(), b.valuation()); n <= order; ++n)
    if (a.coeff(n) != b.coeff(n)) return false;
  return true;
}

}  // namespace

TEST_CASE("s of z") {
  QSeries s1 = s_of_z(1);
  CHECK(s1.truncation() == 2);
  CHECK(s1.coeff(1) == Q(2));
  QSeries s3 = s_of_z(3);
  CHECK(s3.coeff(1) == Q(2));
  CHECK(s3.coeff(2) == Q(12));
  CHECK(s3.coeff(3) == Q(128));
  QSeries s = s_of_z(10);
  QSeries cubic = QSeries::from_poly(QP({Q(0), Q(1, 2), Q(-3, 2), Q(1)}));
  QSeries zz = compose(cubic, s);
  CHECK(zz.truncation() == 11);
  CHECK(zz == QSeries(1, {Q(1)}, 11));
  // fixed point s = 2z + 3s^2 - 2s^3 as an independent route
  QSeries it = QSeries::zero(12);
  QSeries z = QSeries::monomial(Q(1), 1);
  for (int k = 0; k < 12; ++k) it = (z * Q(2) + it * it * Q(3) - it * it * it * Q(2)).truncated(12);
  CHECK(s_of_z(11) == it);
}

TEST_CASE("psi product rules") {
  CHECK(psi_product(0, 0) == PsiVector::unit(2));
  CHECK(psi_product(1, 1) == PsiVector::unit(4, Q(1, 3)) + PsiVector::unit(2, Q(2, 3)));
  CHECK(psi_product(1, 2) == PsiVector::unit(5));
  for (int i = 0; i <= 12; ++i)
    for (int j = i; j <= 12; ++j) {
      AlgElem lhs = alg::psi(i) * alg::psi(j);
      CHECK(psi_product(i, j).to_alg() == lhs);
      CHECK(psi_to_zseries(psi_product(i, j), 20) == (psi_zseries(i, 20) * psi_zseries(j, 20)).truncated(21));
    }
  CHECK(alg_to_zseries(psi_product(1, 1).to_alg(), 12) == (alg_to_zseries(alg::psi(1), 12) * alg_to_zseries(alg::psi(1), 12)).truncated(13));
}

TEST_CASE("psi embedding conventions") {
  CHECK(alg::psi(0) == AlgElem(alg::eta().inverse()));
  CHECK(alg::psi(-2) == AlgElem(1));
  CHECK(alg::psi(-4) == AlgElem(alg::eta()));
  // psi_1 = (1-2s) eta^{-3/2}; its square is (1-2s)^2 / eta^3
  AlgElem p1 = alg::psi(1);
  RatFunc one_m2s(QP({Q(1), Q(-2)}));
  CHECK(p1 * p1 == AlgElem(one_m2s * one_m2s * pow(alg::eta(), -3)));
}

TEST_CASE("D operator") {
  CHECK(apply_D(PsiVector::unit(0)) == PsiVector::unit(4, Q(2)) + PsiVector::unit(2, Q(2)) + PsiVector::unit(0, Q(-4)));
  CHECK(apply_D(PsiVector::unit(1)) == PsiVector::unit(5, Q(3)) + PsiVector::unit(3, Q(1)) + PsiVector::unit(1, Q(-4)));
  for (int i = 0; i <= 8; ++i) {
    CHECK(apply_D(alg::psi(i)) == apply_D(PsiVector::unit(i)).to_alg());
    QSeries x = psi_zseries(i, 13);
    CHECK(agree(alg_to_zseries(apply_D(alg::psi(i)), 12), six_z_ddz(x), 12));
  }
  for (int g = 0; g <= 1; ++g) {
    QSeries x = alg_to_zseries(base_series(g), 13);
    CHECK(agree(alg_to_zseries(apply_D(base_series(g)), 12), six_z_ddz(x), 12));
  }
  // D z = 6 z
  CHECK(apply_D(AlgElem(alg::z())) == AlgElem(alg::z() * Q(6)));
}

TEST_CASE("theta operator") {
  AlgElem l0 = base_series(0);
  CHECK(theta_op(0, l0) == l0);
  CHECK(theta_op(1, l0) == apply_D(l0) * Q(1, 6));
  QSeries x = psi_zseries(0, 14);
  QSeries expect = (diff(diff(x)) * Q(1, 2)).shifted(2);
  CHECK(agree(alg_to_zseries(theta_op(2, alg::psi(0)), 12), expect, 12));
  QSeries x1 = alg_to_zseries(base_series(1), 16);
  QSeries e3 = (diff(diff(diff(x1))) * Q(1, 6)).shifted(3);
  CHECK(agree(alg_to_zseries(theta_op(3, base_series(1)), 12), e3, 12));
}

TEST_CASE("alg to psi") {
  CHECK(alg_to_psi(AlgElem(alg::eta().inverse())) == PsiVector::unit(0));
  AlgElem p1(RatFunc(), RatFunc(QP({Q(1), Q(-2)})) * pow(alg::eta(), -2));
  CHECK(alg_to_psi(p1) == PsiVector::unit(1));
  CHECK_THROWS_AS(alg_to_psi(AlgElem(alg::s() * alg::eta().inverse())), NotInSpan);
  CHECK_THROWS_AS(alg_to_psi(AlgElem(1)), NotInSpan);
  CHECK_THROWS_AS(alg_to_psi(base_series(0)), NotInSpan);
  CHECK_THROWS_AS(alg_to_psi(alg::psi(-1)), NotInSpan);
  Q c;
  CHECK(alg_to_psi_affine(AlgElem(Q(3)) + alg::psi(2), &c) == PsiVector::unit(2));
  CHECK(c == Q(3));
  PsiVector v;
  for (int i = 0; i <= 40; ++i) v.add(i, Q(i * i - 7 * i + 3, i + 1));
  CHECK(alg_to_psi(v.to_alg()) == v);
  CHECK(v.top_index() == 40);
}

TEST_CASE("z expansions") {
  CHECK(alg_to_zseries(AlgElem(alg::z()), 8) == QSeries(1, {Q(1)}, 9));
  QSeries l0 = alg_to_zseries(base_series(0), 4);
  CHECK(agree(l0, zser({Q(4), Q(32), Q(336), Q(4096)}), 4));
  CHECK(l0.coeff(0) == Q(0));
  QSeries l1 = alg_to_zseries(base_series(1), 2);
  CHECK(agree(l1, zser({Q(9), Q(118)}), 2));
  AlgElem inv2z = AlgElem(alg::z() * Q(2)).inverse();
  QSeries r = alg_to_zseries(inv2z, 3);
  CHECK(r.valuation() == -1);
  CHECK(r.coeff(-1) == Q(1, 2));
  CHECK(r.truncation() == 4);
}

TEST_CASE("genus zero factorization identities") {
  using P = Poly<RatFunc>;
  RatFunc s = alg::s(), one(1);
  RatFunc x = alg::z();
  RatFunc t01 = s * s * (one - s) * (one - s * Q(3)) * Q(1, 4);
  // polynomials in y with rational-function coefficients
  P y = P::x();
  P lhs = P::constant(one) - y;
  lhs = lhs * lhs + P({RatFunc(), RatFunc(), RatFunc(), RatFunc(4)}) * (P::constant(x) - y * x + y * t01);
  RatFunc q1 = s - one, r1 = s * Q(-2), r2 = s * Q(-2) + s * s * Q(3);
  P f1 = P::constant(one) + y * q1;
  P f2 = P::constant(one) + y * r1 + y * y * r2;
  CHECK(lhs == f1 * f1 * f2);
  RatFunc om = one - s;
  CHECK(one + r1 / om + r2 / (om * om) == alg::eta() / (om * om));
  RatFunc t03 = s * s * s * (one - s) * (one - s * Q(4) + s * s * Q(2)) * Q(1, 2);
  CHECK(AlgElem(t03 / (x * x)) == base_series(0));
}

TEST_CASE("serialization") {
  PsiVector v = PsiVector::unit(0, Q(23, 12)) + PsiVector::unit(1, Q(-3)) + PsiVector::unit(2, Q(13, 12));
  CHECK(to_json(v).dump() == R"([[0,"23/12"],[1,"-3"],[2,"13/12"]])");
  CHECK(psi_from_json(to_json(v)) == v);
  auto j = to_json(base_series(1));
  CHECK(j.contains("even"));
  CHECK(j["odd"]["num"].size() == 1);
}
