#include "lomap/algebraic.hpp"

#include <mutex>
#include <ostream>
#include <sstream>

#include "lomap/errors.hpp"
#include "lomap/serialize.hpp"

namespace lomap {

using QP = Poly<Rational>;
using ZSeries = TruncLaurent<BigInt>;

namespace {

const FactorRef& eta_factor() {
  static const FactorRef f = intern_factor(ZPoly({BigInt(1), BigInt(-6), BigInt(6)}));
  return f;
}

RatFunc eta_power(int k) {
  if (k >= 0) return pow(alg::eta(), k);
  return RatFunc::from_factored(Rational(1), ZPoly({BigInt(1)}), {{eta_factor(), -k}});
}

const QP& eta_poly() {
  static const QP p({Rational(1), Rational(-6), Rational(6)});
  return p;
}

// Digits c_l of N = sum c_l eta^l; NotInSpan when some remainder is not constant.
std::vector<Rational> eta_digits(QP n) {
  std::vector<Rational> d;
  while (!n.is_zero()) {
    auto [q, r] = divmod(n, eta_poly());
    if (r.degree() >= 1) throw NotInSpan("numerator is not a polynomial in eta");
    d.push_back(r.coeff(0));
    n = std::move(q);
  }
  return d;
}

// Exponent of eta in the denominator; NotInSpan for any other factor.
int eta_only_denominator(const RatFunc& r) {
  int m = 0;
  for (const auto& [f, e] : r.factors()) {
    if (f->id != eta_factor()->id) throw NotInSpan("denominator factor " + to_qpoly(f->poly).str("s") + " other than eta");
    m = e;
  }
  return m;
}

struct SCache {
  std::mutex mu;
  QSeries q;
  ZSeries z;
  int order = 0;
};

SCache& s_cache() {
  static SCache c;
  return c;
}

QSeries s_of_z_newton(int order) {
  const QSeries z = QSeries::monomial(Rational(1), 1);
  QSeries s(1, {Rational(2)}, 2);
  int have = 2;
  const int target = order + 1;
  while (have < target) {
    int next = std::min(2 * have, target);
    s = QSeries(s.valuation(), s.stored(), next);
    QSeries s2 = s * s;
    QSeries f = (s - Rational(3) * s2 + Rational(2) * s2 * s) * Rational(1, 2) - z;
    QSeries fp = (QSeries::constant(Rational(1)) - Rational(6) * s + Rational(6) * s2) * Rational(1, 2);
    s = (s - series_div(f.truncated(next), fp.truncated(next))).truncated(next);
    have = next;
  }
  return s.truncated(target);
}

ZSeries to_zseries_int(const QSeries& q) {
  std::vector<BigInt> c;
  for (const auto& v : q.stored()) {
    if (!v.is_integer()) throw Error("s(z) coefficient is not an integer");
    c.push_back(v.num());
  }
  return ZSeries(q.valuation(), std::move(c), q.truncation());
}

QSeries to_qseries(const ZSeries& z) {
  std::vector<Rational> c;
  for (const auto& v : z.stored()) c.emplace_back(v);
  return QSeries(z.valuation(), std::move(c), z.truncation());
}

ZSeries s_of_z_int(int order) {
  auto& c = s_cache();
  std::lock_guard<std::mutex> lock(c.mu);
  if (c.order < order) {
    c.q = s_of_z_newton(order);
    c.z = to_zseries_int(c.q);
    c.order = order;
  }
  return c.z.truncated(order + 1);
}

ZSeries zpoly_of_s(const ZPoly& p, const ZSeries& s) {
  return compose(ZSeries::from_poly(p), s);
}

struct PsiSeriesCache {
  std::mutex mu;
  std::map<int, std::vector<QSeries>> by_order;
};

PsiSeriesCache& psi_series_cache() {
  static PsiSeriesCache c;
  return c;
}

}  // namespace

AlgElem& AlgElem::operator*=(const AlgElem& o) {
  if (odd_.is_zero() && o.odd_.is_zero()) {
    even_ *= o.even_;
    return *this;
  }
  RatFunc a = even_ * o.even_;
  if (!odd_.is_zero() && !o.odd_.is_zero()) a += odd_ * o.odd_ * alg::eta();
  RatFunc b = even_ * o.odd_ + odd_ * o.even_;
  even_ = std::move(a);
  odd_ = std::move(b);
  return *this;
}

AlgElem AlgElem::inverse() const {
  if (is_zero()) throw ZeroDenominator("inverse of zero");
  RatFunc n = even_ * even_ - odd_ * odd_ * alg::eta();
  RatFunc ni = n.inverse();
  return {even_ * ni, -(odd_ * ni)};
}

std::string AlgElem::str() const {
  if (is_zero()) return "0";
  std::string r;
  if (!even_.is_zero()) r = even_.str();
  if (!odd_.is_zero()) {
    if (!r.empty()) r += " + ";
    r += "(" + odd_.str() + ")*sqrt(1 - 6*s + 6*s^2)";
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, const AlgElem& x) { return os << x.str(); }

namespace alg {

RatFunc s() { return RatFunc::s(); }
RatFunc eta() { return RatFunc(eta_poly()); }
RatFunc z() { return RatFunc(QP({Rational(0), Rational(1, 2), Rational(-3, 2), Rational(1)})); }
AlgElem sqrt_eta() { return {RatFunc(), RatFunc(1)}; }

AlgElem psi(int i) {
  if (i % 2 == 0) return AlgElem(eta_power(-(i / 2 + 1)));
  // i odd: (1-2s) eta^{-(i+3)/2} sqrt(eta)
  int k = (i + 3) / 2;
  RatFunc b = RatFunc(QP({Rational(1), Rational(-2)})) * eta_power(-k);
  return {RatFunc(), b};
}

}  // namespace alg

PsiVector PsiVector::unit(int i, const Rational& c) {
  PsiVector v;
  v.add(i, c);
  return v;
}

Rational PsiVector::coeff(int i) const {
  auto it = e_.find(i);
  return it == e_.end() ? Rational(0) : it->second;
}

void PsiVector::add(int i, const Rational& c) {
  if (c.is_zero()) return;
  if (i < 0) throw NotInSpan("negative psi index");
  auto [it, inserted] = e_.emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) e_.erase(it);
  }
}

PsiVector& PsiVector::operator+=(const PsiVector& o) {
  for (const auto& [i, c] : o.e_) add(i, c);
  return *this;
}

PsiVector& PsiVector::operator-=(const PsiVector& o) {
  for (const auto& [i, c] : o.e_) add(i, -c);
  return *this;
}

PsiVector& PsiVector::operator*=(const Rational& c) {
  if (c.is_zero()) {
    e_.clear();
    return *this;
  }
  for (auto& [i, v] : e_) v *= c;
  return *this;
}

AlgElem PsiVector::to_alg() const {
  // Collect as polynomials in 1/eta to keep a single common denominator.
  int top_even = 0, top_odd = 0;
  for (const auto& [i, c] : e_) {
    if (i % 2 == 0)
      top_even = std::max(top_even, i / 2 + 1);
    else
      top_odd = std::max(top_odd, (i + 3) / 2);
  }
  QP ne, no;
  std::vector<QP> eta_pows{QP::constant(Rational(1))};
  auto eta_pow = [&](int k) -> const QP& {
    while (static_cast<int>(eta_pows.size()) <= k) eta_pows.push_back(eta_pows.back() * eta_poly());
    return eta_pows[static_cast<std::size_t>(k)];
  };
  for (const auto& [i, c] : e_) {
    if (i % 2 == 0)
      ne += eta_pow(top_even - (i / 2 + 1)) * c;
    else
      no += eta_pow(top_odd - (i + 3) / 2) * c;
  }
  no = no * QP({Rational(1), Rational(-2)});
  Rational ce, co;
  ZPoly ze = to_zpoly(ne, &ce), zo = to_zpoly(no, &co);
  RatFunc a = ne.is_zero() ? RatFunc() : RatFunc::from_factored(ce, ze, {{eta_factor(), top_even}});
  RatFunc b = no.is_zero() ? RatFunc() : RatFunc::from_factored(co, zo, {{eta_factor(), top_odd}});
  return {a, b};
}

std::string PsiVector::str() const {
  if (e_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : e_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")*psi" << i;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const PsiVector& v) { return os << v.str(); }

QSeries s_of_z(int order) {
  if (order < 1) throw std::invalid_argument("s_of_z: order must be >= 1");
  s_of_z_int(order);
  auto& c = s_cache();
  std::lock_guard<std::mutex> lock(c.mu);
  return c.q.truncated(order + 1);
}

PsiVector psi_product(int i, int j) {
  PsiVector r;
  if (i % 2 != 0 && j % 2 != 0) {
    r.add(i + j + 2, Rational(1, 3));
    r.add(i + j, Rational(2, 3));
  } else {
    r.add(i + j + 2, Rational(1));
  }
  return r;
}

PsiVector psi_product(const PsiVector& a, const PsiVector& b) {
  PsiVector r;
  for (const auto& [i, ci] : a.entries())
    for (const auto& [j, cj] : b.entries()) {
      Rational c = ci * cj;
      if (i % 2 != 0 && j % 2 != 0) {
        r.add(i + j + 2, c * Rational(1, 3));
        r.add(i + j, c * Rational(2, 3));
      } else {
        r.add(i + j + 2, c);
      }
    }
  return r;
}

PsiVector apply_D(const PsiVector& x) {
  PsiVector r;
  for (const auto& [i, c] : x.entries()) {
    if (i % 2 == 0) {
      r.add(i + 4, c * Rational(i + 2));
      r.add(i + 2, c * Rational(i + 2));
      r.add(i, c * Rational(-2 * (i + 2)));
    } else {
      r.add(i + 4, c * Rational(i + 2));
      r.add(i + 2, c * Rational(i));
      r.add(i, c * Rational(-2 * (i + 1)));
    }
  }
  return r;
}

AlgElem apply_D(const AlgElem& x) {
  // D = 6 s(1-s)(1-2s)/eta d/ds; d(b sqrt(eta)) = (b' + b eta'/(2 eta)) sqrt(eta), eta' = -6(1-2s).
  static const RatFunc k = RatFunc(QP({Rational(0), Rational(6), Rational(-18), Rational(12)})) * eta_power(-1);
  static const RatFunc odd_shift = RatFunc(QP({Rational(-3), Rational(6)})) * eta_power(-1);
  RatFunc a, b;
  if (!x.even().is_zero()) a = k * x.even().derivative();
  if (!x.odd().is_zero()) b = k * (x.odd().derivative() + x.odd() * odd_shift);
  return {a, b};
}

AlgElem theta_op(int i, const AlgElem& x) {
  if (i < 0) throw std::invalid_argument("theta_op: negative order");
  AlgElem t = x;
  for (int k = 0; k < i; ++k) t = (apply_D(t) * Rational(1, 6) - t * Rational(k)) * Rational(1, k + 1);
  return t;
}

PsiVector alg_to_psi_affine(const AlgElem& e, Rational* constant) {
  PsiVector v;
  *constant = Rational(0);
  if (!e.even().is_zero()) {
    int m = eta_only_denominator(e.even());
    auto digits = eta_digits(to_qpoly(e.even().primitive_numerator()) * e.even().content());
    // even() = sum_l c_l eta^{l-m}; the eta^{-j} term is psi_{2j-2}.
    for (std::size_t l = 0; l < digits.size(); ++l) {
      int j = m - static_cast<int>(l);
      if (digits[l].is_zero()) continue;
      if (j >= 1)
        v.add(2 * j - 2, digits[l]);
      else if (j == 0)
        *constant = digits[l];
      else
        throw NotInSpan("positive power of eta in the even part");
    }
  }
  if (!e.odd().is_zero()) {
    int m = eta_only_denominator(e.odd());
    QP n = to_qpoly(e.odd().primitive_numerator()) * e.odd().content();
    auto [q, r] = divmod(n, QP({Rational(1), Rational(-2)}));
    if (!r.is_zero()) throw NotInSpan("odd part not divisible by 1-2s");
    auto digits = eta_digits(q);
    for (std::size_t l = 0; l < digits.size(); ++l) {
      int j = m - static_cast<int>(l);
      if (digits[l].is_zero()) continue;
      if (j < 2) throw NotInSpan("odd part outside the psi ladder");
      v.add(2 * j - 3, digits[l]);
    }
  }
  return v;
}

PsiVector alg_to_psi(const AlgElem& e) {
  Rational c;
  PsiVector v = alg_to_psi_affine(e, &c);
  if (!c.is_zero()) throw NotInSpan("nonzero constant term " + c.str());
  return v;
}

QSeries ratfunc_to_zseries(const RatFunc& r, int order) {
  if (r.is_zero()) return QSeries::zero(order + 1);
  int es = 0;
  for (const auto& [f, e] : r.factors())
    if (f->poly.coeff(0) == 0) es = e;
  for (int extra = 2 * es;; extra += 2) {
    int work = order + extra;
    ZSeries s = s_of_z_int(work);
    ZSeries num = zpoly_of_s(r.primitive_numerator(), s);
    ZSeries den = ZSeries::constant(BigInt(1));
    for (const auto& [f, e] : r.factors()) den = den * pow(zpoly_of_s(f->poly, s), e);
    QSeries q = series_div(to_qseries(num), to_qseries(den)) * r.content();
    if (q.truncation() >= order + 1) return q.truncated(order + 1);
  }
}

QSeries alg_to_zseries(const AlgElem& e, int order) {
  QSeries a = ratfunc_to_zseries(e.even(), order);
  if (e.odd().is_zero()) return a;
  int pole = 0;
  for (const auto& [f, m] : e.odd().factors())
    if (f->poly.coeff(0) == 0) pole = m;
  QSeries b = ratfunc_to_zseries(e.odd(), order + pole);
  QSeries se = sqrt1(ratfunc_to_zseries(alg::eta(), order + pole));
  return (a + b * se).truncated(order + 1);
}

QSeries psi_zseries(int i, int order) {
  if (i < 0) throw NotInSpan("negative psi index");
  auto& cache = psi_series_cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  auto& v = cache.by_order[order];
  if (v.empty()) {
    QSeries eta = ratfunc_to_zseries(alg::eta(), order);
    QSeries inv_eta = inverse(eta);
    QSeries inv_sqrt = inverse(sqrt1(eta));
    QSeries one_m2s = ratfunc_to_zseries(RatFunc(QP({Rational(1), Rational(-2)})), order);
    v.push_back(inv_eta);                        // psi_0
    v.push_back(one_m2s * inv_sqrt * inv_eta);   // psi_1
  }
  while (static_cast<int>(v.size()) <= i) {
    const QSeries& inv_eta = v[0];
    v.push_back((v[v.size() - 2] * inv_eta).truncated(order + 1));
  }
  return v[static_cast<std::size_t>(i)];
}

QSeries psi_to_zseries(const PsiVector& v, int order) {
  QSeries acc = QSeries::zero(order + 1);
  for (const auto& [i, c] : v.entries()) acc += psi_zseries(i, order) * c;
  return acc;
}

AlgElem base_series(int g) {
  QP s = QP::x();
  QP one_m_s({Rational(1), Rational(-1)});
  QP one_m_2s({Rational(1), Rational(-2)});
  if (g == 0)
    return AlgElem(RatFunc(QP({Rational(0), Rational(2), Rational(-8), Rational(4)}), one_m_s * one_m_2s * one_m_2s));
  if (g == 1) {
    QP den = s * one_m_s * one_m_2s;
    RatFunc a(one_m_2s * QP({Rational(1), Rational(-1), Rational(1)}), den);
    RatFunc b(QP::constant(Rational(-1)), den);
    return {a, b};
  }
  throw std::invalid_argument("base_series: g must be 0 or 1");
}

namespace {
nlohmann::json ratfunc_json(const RatFunc& r) {
  return {{"num", to_json(r.numerator())}, {"den", to_json(r.is_zero() ? QP::constant(Rational(1)) : r.denominator())}};
}
}  // namespace

nlohmann::json to_json(const AlgElem& e) {
  return {{"even", ratfunc_json(e.even())}, {"odd", ratfunc_json(e.odd())}};
}

nlohmann::json to_json(const PsiVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [i, c] : v.entries()) a.push_back({i, c.str()});
  return a;
}

PsiVector psi_from_json(const nlohmann::json& j) {
  PsiVector v;
  for (const auto& e : j) {
    int i = e.at(0).is_string() ? std::stoi(e.at(0).get<std::string>()) : e.at(0).get<int>();
    v.add(i, Rational::parse(e.at(1).get<std::string>()));
  }
  return v;
}

}  // namespace lomap
