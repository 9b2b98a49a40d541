#include <random>

#include "doctest.h"
#include "lomap/errors.hpp"
#include "lomap/poly.hpp"
#include "lomap/qroot3.hpp"
#include "lomap/ratfunc.hpp"
#include "lomap/serialize.hpp"
#include "lomap/series.hpp"

using namespace lomap;
using Q = Rational;
using QS = TruncLaurent<Rational>;
using QP = Poly<Rational>;

namespace {

Q rnd(std::mt19937_64& g) {
  std::uniform_int_distribution<int> n(-20, 20), d(1, 9);
  return Q(n(g), d(g));
}

QS rnd_series(std::mt19937_64& g, int val, int len, int trunc) {
  std::vector<Q> c;
  for (int i = 0; i < len; ++i) c.push_back(rnd(g));
  return QS(val, c, trunc);
}

QP rnd_poly(std::mt19937_64& g, int deg) {
  std::vector<Q> c;
  for (int i = 0; i <= deg; ++i) c.push_back(rnd(g));
  return QP(c);
}

}  // namespace

TEST_CASE("rational canonical form and parsing") {
  CHECK(Q(6, -4).str() == "-3/2");
  CHECK(Q::parse("-10/4") == Q(-5, 2));
  CHECK(Q::parse("7") == Q(7));
  CHECK_THROWS_AS(Q::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Q::parse("x"), ParseError);
  CHECK(binomial(-1, 3) == Q(-1));
  CHECK(binomial(2, 3) == Q(0));
  CHECK(binomial(5, -1) == Q(0));
}

TEST_CASE("qroot3 field and conjugation homomorphism") {
  std::mt19937_64 g(1);
  for (int t = 0; t < 50; ++t) {
    QRoot3 x(rnd(g), rnd(g)), y(rnd(g), rnd(g));
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK((x + y).conj() == x.conj() + y.conj());
    if (!y.is_zero()) CHECK((x / y) * y == x);
  }
  CHECK(QRoot3::sqrt3() * QRoot3::sqrt3() == QRoot3(3));
  CHECK(QRoot3(Q(0), Q(-1)).str() == "-√3");
  CHECK_THROWS(QRoot3(1) / QRoot3(0));
}

TEST_CASE("series arithmetic basics") {
  QS a(0, {Q(1), Q(-12), Q(-48)}, 3);
  QS r = sqrt1(a);
  CHECK((r * r) == a);
  CHECK(r.coeff(1) == Q(-6));
  QS zinv = QS::monomial(Q(1), -1);
  QS z = QS::monomial(Q(1), 1);
  CHECK(zinv * z == QS::constant(Q(1)));
  CHECK_THROWS_AS(series_div(z, QS::zero()), DivByZeroSeries);
  CHECK_THROWS_AS(sqrt1(QS(0, {Q(2)}, 4)), SqrtDomain);
  CHECK_THROWS_AS(sqrt1(QS(1, {Q(1)}, 4)), SqrtDomain);
  // sqrt(eta) squared is eta
  QS eta(0, {Q(1), Q(-6), Q(6)}, 12);
  QS se = sqrt1(eta);
  CHECK((se * se) == eta);
}

TEST_CASE("series truncation bookkeeping") {
  QS a(0, {Q(1), Q(2)}, 5);
  QS b(2, {Q(3)}, 4);
  QS p = a * b;
  // min(5 + 2, 4 + 0)
  CHECK(p.truncation() == 4);
  CHECK((a + b).truncation() == 4);
  CHECK(diff(a).truncation() == 4);
  CHECK_THROWS_AS(p.coeff(4), TruncationError);
  QS inv = inverse(QS(0, {Q(1), Q(-1)}, 6));
  for (int k = 0; k < 6; ++k) CHECK(inv.coeff(k) == Q(1));
}

TEST_CASE("series ring properties") {
  std::mt19937_64 g(7);
  for (int t = 0; t < 20; ++t) {
    QS a = rnd_series(g, -1, 6, 7), b = rnd_series(g, 0, 8, 9), c = rnd_series(g, 2, 5, 10);
    QS l = (a * b) * c, r = a * (b * c);
    int tr = std::min(l.truncation(), r.truncation());
    CHECK(l.truncated(tr) == r.truncated(tr));
    QS d1 = diff(a * b), d2 = diff(a) * b + a * diff(b);
    int td = std::min(d1.truncation(), d2.truncation());
    CHECK(d1.truncated(td) == d2.truncated(td));
    CHECK((a - a).is_zero());
    QS q = series_div(b, a);
    QS back = q * a;
    CHECK(back.truncated(back.truncation()) == b.truncated(back.truncation()));
  }
}

TEST_CASE("series composition") {
  QS s2 = QS::monomial(Q(1), 2);
  QS inner(1, {Q(2), Q(12)});
  QS out = compose(s2, inner);
  CHECK(out == QS(2, {Q(4), Q(48), Q(144)}));
  QS x = QS::monomial(Q(1), 1);
  std::mt19937_64 g(3);
  QS o = rnd_series(g, 0, 6, 9);
  CHECK(compose(o, x) == o);
  CHECK_THROWS_AS(compose(o, QS::constant(Q(1))), ValuationError);
  // brute-force substitution on polynomials of degree <= 8
  for (int t = 0; t < 10; ++t) {
    QP op = rnd_poly(g, 8), ip = rnd_poly(g, 4);
    ip = ip - QP::constant(ip.coeff(0));
    if (ip.is_zero()) continue;
    QS c = compose(QS::from_poly(op), QS::from_poly(ip));
    QP brute = compose(op, ip);
    CHECK(c == QS::from_poly(brute));
  }
}

TEST_CASE("ratfunc reduce") {
  QP s = QP::x();
  QP num({Q(0), Q(2), Q(-8), Q(4)});
  QP den({Q(1), Q(-5), Q(8), Q(-4)});
  RatFunc r(num, den);
  // 2s(1-4s+2s^2) / ((1-s)(1-2s)^2), monic denominator
  CHECK(r.denominator() == QP({Q(-1, 4), Q(5, 4), Q(-2), Q(1)}));
  CHECK(r.numerator() == num * Q(-1, 4));
  CHECK(RatFunc(s * s - s * s, QP({Q(1), Q(-1)})).is_zero());
  QP one_minus_s({Q(1), Q(-1)});
  RatFunc c(one_minus_s * one_minus_s, one_minus_s);
  CHECK(c.is_polynomial());
  CHECK(c.numerator() == one_minus_s);
  CHECK_THROWS_AS(RatFunc(s, QP()), ZeroDenominator);
}

TEST_CASE("ratfunc ring axioms and canonical equality") {
  std::mt19937_64 g(11);
  QP s = QP::x();
  std::vector<QP> dens = {s, QP({Q(1), Q(-1)}), QP({Q(1), Q(-6), Q(6)}), QP({Q(2), Q(0), Q(1)}), QP({Q(3), Q(1)})};
  auto rf = [&]() {
    QP d = QP::constant(Q(1));
    for (int k = 0; k < 2; ++k) d = d * dens[g() % dens.size()];
    return RatFunc(rnd_poly(g, 3), d);
  };
  for (int t = 0; t < 30; ++t) {
    RatFunc a = rf(), b = rf(), c = rf();
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    CHECK((a * b).numerator() == (b * a).numerator());
    CHECK((a * b).denominator() == (b * a).denominator());
    if (!b.is_zero()) CHECK((a / b) * b == a);
    // derivative: product rule
    CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    Q x(7, 3);
    CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
  }
  // non-coprime factors from different sources
  RatFunc u(QP::constant(Q(1)), s * QP({Q(1), Q(-1)}) * QP({Q(5), Q(0), Q(1)}) * QP({Q(1), Q(0), Q(1)}));
  RatFunc v(QP::constant(Q(1)), QP({Q(5), Q(0), Q(1)}));
  CHECK((u * v) / v == u);
  CHECK((u + v) - v == u);
}

TEST_CASE("npoly shift") {
  QP n2({Q(0), Q(0), Q(1)});
  CHECK(npoly_shift(n2, 2) == QP({Q(4), Q(4), Q(1)}));
  CHECK(npoly_shift(QP({Q(0), Q(1), Q(1)}), -2) == QP({Q(2), Q(-3), Q(1)}));
  QP p({Q(0), Q(7), Q(9), Q(4)});
  CHECK(npoly_shift(p, 0) == p);
  for (int n = -3; n < 5; ++n) CHECK(npoly_shift(p, 3)(Q(n)) == p(Q(n + 3)));
}

TEST_CASE("serialization round trip") {
  Q r(-22, 7);
  CHECK(rational_from_json(to_json(r)) == r);
  QRoot3 x(Q(1, 3), Q(-5, 2));
  CHECK(qroot3_from_json(to_json(x)) == x);
  QS s(-1, {Q(1, 2), Q(0), Q(3)}, 5);
  CHECK(series_from_json<Q>(series_to_json(s)) == s);
  QS e = QS::from_poly(QP({Q(1), Q(2)}));
  CHECK(series_from_json<Q>(json::parse(series_to_json(e).dump())) == e);
}
