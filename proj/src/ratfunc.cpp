#include "lomap/ratfunc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include "lomap/errors.hpp"

namespace lomap {

namespace {

BigInt zcontent(const ZPoly& p) {
  BigInt g = 0;
  for (const auto& c : p.coeffs()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

// Divides out the content and makes the leading coefficient positive; returns the factor removed.
BigInt make_primitive(ZPoly& p) {
  if (p.is_zero()) return 0;
  BigInt g = zcontent(p);
  if (p.lead() < 0) g = -g;
  if (g == 1) return g;
  std::vector<BigInt> c = p.coeffs();
  for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  p = ZPoly(std::move(c));
  return g;
}

std::string key_of(const ZPoly& p) {
  std::string k;
  for (const auto& c : p.coeffs()) {
    k += c.get_str();
    k += ',';
  }
  return k;
}

// Positive divisors of |n| (n != 0), or empty when |n| is too large to factor by trial division.
std::vector<BigInt> small_divisors(const BigInt& n) {
  BigInt a = abs(n);
  if (a > BigInt("1000000000000")) return {};
  unsigned long long v = a.get_ui();
  std::vector<BigInt> d;
  for (unsigned long long k = 1; k * k <= v; ++k) {
    if (v % k) continue;
    d.emplace_back(static_cast<unsigned long>(k));
    if (k * k != v) d.emplace_back(static_cast<unsigned long>(v / k));
  }
  return d;
}

// p(num/den) * den^deg as an integer.
BigInt homogeneous_eval(const ZPoly& p, const BigInt& num, const BigInt& den) {
  BigInt acc = 0, dpow = 1;
  const auto& c = p.coeffs();
  // Horner in num with den powers: sum c_k num^k den^(d-k).
  for (int k = p.degree(); k >= 0; --k) {
    acc = acc * num + c[static_cast<std::size_t>(k)] * dpow;
    dpow *= den;
  }
  return acc;
}

// Rational roots of p, as primitive linear factors (q s - p); empty when the search is infeasible.
std::vector<ZPoly> linear_factors(const ZPoly& p, bool* complete) {
  std::vector<ZPoly> out;
  *complete = true;
  if (p.degree() < 1) return out;
  ZPoly rest = p;
  // Strip s itself first.
  while (rest.degree() >= 1 && rest.coeff(0) == 0) {
    out.push_back(ZPoly({BigInt(0), BigInt(1)}));
    std::vector<BigInt> c(rest.coeffs().begin() + 1, rest.coeffs().end());
    rest = ZPoly(std::move(c));
  }
  if (rest.degree() < 1) return out;
  auto nums = small_divisors(rest.coeff(0));
  auto dens = small_divisors(rest.lead());
  if (nums.empty() || dens.empty()) {
    *complete = false;
    return out;
  }
  for (const auto& q : dens) {
    for (const auto& a : nums) {
      for (int sign : {1, -1}) {
        BigInt num = sign * a;
        BigInt g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
        if (g != 1) continue;
        while (rest.degree() >= 1 && homogeneous_eval(rest, num, q) == 0) {
          ZPoly lin({BigInt(-num), q});
          make_primitive(lin);
          ZPoly quo;
          zpoly_exact_div(rest, lin, &quo);
          rest = quo;
          out.push_back(lin);
        }
      }
    }
  }
  return out;
}

class FactorRegistry {
 public:
  FactorRegistry() {
    // The factors that occur throughout the engine, given stable small ids.
    intern(ZPoly({BigInt(0), BigInt(1)}));
    intern(ZPoly({BigInt(-1), BigInt(1)}));
    intern(ZPoly({BigInt(-1), BigInt(2)}));
    intern(ZPoly({BigInt(1), BigInt(-6), BigInt(6)}));
  }

  FactorRef intern(const ZPoly& p) {
    std::lock_guard<std::mutex> lock(mu_);
    auto k = key_of(p);
    auto it = by_key_.find(k);
    if (it != by_key_.end()) return it->second;
    bool irreducible = false;
    if (p.degree() == 1) {
      irreducible = true;
    } else if (p.degree() <= 3) {
      bool complete = false;
      auto lin = linear_factors(p, &complete);
      irreducible = complete && lin.empty();
    }
    auto f = std::make_shared<const DenFactor>(DenFactor{next_id_++, p, irreducible});
    by_key_.emplace(k, f);
    if (irreducible) irreducibles_.push_back(f);
    return f;
  }

  std::vector<FactorRef> irreducibles() {
    std::lock_guard<std::mutex> lock(mu_);
    return irreducibles_;
  }

  bool coprime(const FactorRef& a, const FactorRef& b) {
    if (a->id == b->id) return false;
    auto key = std::minmax(a->id, b->id);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = coprime_.find(key);
      if (it != coprime_.end()) return it->second;
    }
    bool r;
    if (a->irreducible && b->irreducible)
      r = true;  // distinct primitive irreducibles
    else
      r = gcd(to_qpoly(a->poly), to_qpoly(b->poly)).degree() == 0;
    std::lock_guard<std::mutex> lock(mu_);
    coprime_[key] = r;
    return r;
  }

 private:
  std::mutex mu_;
  int next_id_ = 0;
  std::map<std::string, FactorRef> by_key_;
  std::vector<FactorRef> irreducibles_;
  std::map<std::pair<int, int>, bool> coprime_;
};

FactorRegistry& registry() {
  static FactorRegistry r;
  return r;
}

using FactorList = std::vector<std::pair<FactorRef, int>>;

void sort_factors(FactorList& f) {
  std::sort(f.begin(), f.end(), [](const auto& x, const auto& y) { return x.first->id < y.first->id; });
}

// Splits a squarefree primitive polynomial into interned pairwise coprime pieces.
std::vector<FactorRef> split_squarefree(ZPoly q) {
  std::vector<FactorRef> out;
  if (q.degree() < 1) return out;
  for (const auto& f : registry().irreducibles()) {
    if (q.degree() < f->poly.degree()) continue;
    ZPoly quo;
    if (zpoly_exact_div(q, f->poly, &quo)) {
      out.push_back(f);
      q = quo;
      make_primitive(q);
      if (q.degree() < 1) return out;
    }
  }
  bool complete = false;
  for (auto& lin : linear_factors(q, &complete)) {
    ZPoly quo;
    zpoly_exact_div(q, lin, &quo);
    q = quo;
    make_primitive(q);
    out.push_back(registry().intern(lin));
  }
  if (q.degree() >= 1) out.push_back(registry().intern(q));
  return out;
}

ZPoly factor_power_product(const FactorList& fl, const std::vector<int>& exps) {
  ZPoly r({BigInt(1)});
  for (std::size_t j = 0; j < fl.size(); ++j)
    for (int k = 0; k < exps[j]; ++k) r = r * fl[j].first->poly;
  return r;
}

bool all_coprime(const FactorList& a, const FactorList& b) {
  for (const auto& [fa, ea] : a)
    for (const auto& [fb, eb] : b)
      if (fa->id != fb->id && !registry().coprime(fa, fb)) return false;
  return true;
}

}  // namespace

FactorRef intern_factor(const ZPoly& p) { return registry().intern(p); }

ZPoly to_zpoly(const Poly<Rational>& p, Rational* scale) {
  if (p.is_zero()) {
    if (scale) *scale = Rational(0);
    return {};
  }
  BigInt l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  std::vector<BigInt> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.push_back(c.num() * (l / c.den()));
  ZPoly z(std::move(v));
  BigInt g = make_primitive(z);
  if (scale) *scale = Rational(g, l);
  return z;
}

Poly<Rational> to_qpoly(const ZPoly& p) {
  std::vector<Rational> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.emplace_back(c);
  return Poly<Rational>(std::move(v));
}

bool zpoly_exact_div(const ZPoly& a, const ZPoly& b, ZPoly* quotient) {
  if (b.is_zero()) throw ZeroDenominator("exact division by the zero polynomial");
  if (a.is_zero()) {
    *quotient = ZPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  const BigInt& b0 = b.coeffs()[0];
  const BigInt& a0 = a.coeffs()[0];
  if (b0 == 0) {
    if (a0 != 0) return false;
  } else if (!mpz_divisible_p(a0.get_mpz_t(), b0.get_mpz_t())) {
    return false;
  }
  std::vector<BigInt> r = a.coeffs();
  const int db = b.degree();
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db + 1));
  const BigInt& lb = b.lead();
  const auto& bc = b.coeffs();
  BigInt f;
  for (int k = a.degree() - db; k >= 0; --k) {
    BigInt& top = r[static_cast<std::size_t>(k + db)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    for (int j = 0; j <= db; ++j) {
      if (bc[static_cast<std::size_t>(j)] == 0) continue;
      mpz_submul(r[static_cast<std::size_t>(k + j)].get_mpz_t(), f.get_mpz_t(), bc[static_cast<std::size_t>(j)].get_mpz_t());
    }
    q[static_cast<std::size_t>(k)] = f;
  }
  for (int j = 0; j < db; ++j)
    if (r[static_cast<std::size_t>(j)] != 0) return false;
  *quotient = ZPoly(std::move(q));
  return true;
}

std::vector<Poly<Rational>> squarefree_decomposition(const Poly<Rational>& p) {
  using QP = Poly<Rational>;
  std::vector<QP> out;
  if (p.degree() < 1) return out;
  QP f = p * (Rational(1) / p.lead());
  QP fp = f.derivative();
  QP a0 = gcd(f, fp);
  QP b = divmod(f, a0).first;
  QP c = divmod(fp, a0).first;
  QP d = c - b.derivative();
  while (b.degree() >= 1) {
    QP a = gcd(b, d);
    out.push_back(a);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() < 1) out.pop_back();
  return out;
}

RatFunc::RatFunc(const Rational& c) : content_(c) {
  if (!c.is_zero()) num_ = ZPoly({BigInt(1)});
}

RatFunc::RatFunc(const Poly<Rational>& p) {
  num_ = to_zpoly(p, &content_);
}

RatFunc::RatFunc(const Poly<Rational>& num, const Poly<Rational>& den) {
  *this = from_expanded(num, den);
}

RatFunc RatFunc::s() { return RatFunc(Poly<Rational>({Rational(0), Rational(1)})); }

RatFunc RatFunc::from_factored(const Rational& content, const ZPoly& num, FactorList den) {
  RatFunc r;
  r.content_ = content;
  r.num_ = num;
  r.den_ = std::move(den);
  sort_factors(r.den_);
  r.normalize_content();
  if (!r.is_zero()) r.cancel();
  return r;
}

RatFunc RatFunc::from_expanded(const Poly<Rational>& num, const Poly<Rational>& den) {
  if (den.is_zero()) throw ZeroDenominator("rational function with zero denominator");
  RatFunc r(num);
  if (r.is_zero()) return r;
  r.content_ /= den.lead();
  auto parts = squarefree_decomposition(den);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() < 1) continue;
    ZPoly zp = to_zpoly(parts[i]);
    for (const auto& f : split_squarefree(zp)) {
      // parts are monic; the stored factor is primitive with leading coefficient lf.
      r.content_ *= pow(Rational(f->poly.lead()), static_cast<int>(i + 1));
      r.den_.emplace_back(f, static_cast<int>(i + 1));
    }
  }
  sort_factors(r.den_);
  r.cancel();
  return r;
}

void RatFunc::normalize_content() {
  if (num_.is_zero() || content_.is_zero()) {
    content_ = Rational(0);
    num_ = ZPoly();
    den_.clear();
    return;
  }
  BigInt g = make_primitive(num_);
  if (g != 1) content_ *= Rational(g);
}

void RatFunc::cancel(const FactorList* only) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < den_.size() && !changed; ++j) {
      auto& [f, e] = den_[j];
      if (only) {
        bool listed = std::any_of(only->begin(), only->end(), [&](const auto& x) { return x.first->id == f->id; });
        if (!listed) continue;
      }
      if (f->irreducible || f->poly.degree() == 1) {
        ZPoly q;
        while (e > 0 && zpoly_exact_div(num_, f->poly, &q)) {
          num_ = std::move(q);
          --e;
        }
        continue;
      }
      auto g = gcd(to_qpoly(num_), to_qpoly(f->poly));
      if (g.degree() < 1) continue;
      ZPoly zg = to_zpoly(g);
      if (zg.degree() == f->poly.degree()) {
        ZPoly q;
        while (e > 0 && zpoly_exact_div(num_, f->poly, &q)) {
          num_ = std::move(q);
          --e;
        }
        continue;
      }
      ZPoly h;
      zpoly_exact_div(f->poly, zg, &h);
      make_primitive(h);
      int ee = e;
      den_.erase(den_.begin() + static_cast<long>(j));
      for (const auto& piece : split_squarefree(zg)) den_.emplace_back(piece, ee);
      for (const auto& piece : split_squarefree(h)) den_.emplace_back(piece, ee);
      sort_factors(den_);
      changed = true;
    }
  }
  den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& x) { return x.second == 0; }), den_.end());
  normalize_content();
}

std::pair<Poly<Rational>, Poly<Rational>> RatFunc::expanded() const {
  Poly<Rational> n = to_qpoly(num_) * content_;
  ZPoly d({BigInt(1)});
  for (const auto& [f, e] : den_)
    for (int k = 0; k < e; ++k) d = d * f->poly;
  return {n, to_qpoly(d)};
}

Poly<Rational> RatFunc::numerator() const {
  auto [n, d] = expanded();
  return n * (Rational(1) / d.lead());
}

Poly<Rational> RatFunc::denominator() const {
  auto d = expanded().second;
  return d * (Rational(1) / d.lead());
}

int RatFunc::valuation_at_zero() const {
  if (is_zero()) throw ValuationError("valuation of the zero rational function");
  int v = 0;
  while (num_.coeff(v) == 0) ++v;
  for (const auto& [f, e] : den_)
    if (f->poly.coeff(0) == 0) v -= e;  // only the factor s vanishes at 0
  return v;
}

Rational RatFunc::eval(const Rational& x) const {
  Rational d(1);
  for (const auto& [f, e] : den_) {
    Rational fx = to_qpoly(f->poly)(x);
    if (fx.is_zero()) throw ZeroDenominator("evaluation at a pole");
    d *= pow(fx, e);
  }
  return content_ * to_qpoly(num_)(x) / d;
}

RatFunc RatFunc::derivative() const {
  RatFunc r;
  if (is_zero()) return r;
  if (den_.empty()) {
    r.content_ = content_;
    r.num_ = num_.derivative();
    r.normalize_content();
    return r;
  }
  ZPoly p({BigInt(1)});
  for (const auto& [f, e] : den_) p = p * f->poly;
  ZPoly acc = num_.derivative() * p;
  for (const auto& [f, e] : den_) {
    ZPoly cof;
    zpoly_exact_div(p, f->poly, &cof);
    acc = acc - num_ * f->poly.derivative() * cof * BigInt(e);
  }
  r.content_ = content_;
  r.num_ = std::move(acc);
  r.den_ = den_;
  for (auto& fe : r.den_) ++fe.second;
  r.normalize_content();
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw ZeroDenominator("inverse of the zero rational function");
  auto [n, d] = expanded();
  return from_expanded(d, n);
}

RatFunc& RatFunc::operator*=(const Rational& c) {
  if (c.is_zero() || is_zero()) return *this = RatFunc();
  content_ *= c;
  return *this;
}

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) return *this = RatFunc();
  if (!all_coprime(den_, o.den_)) {
    auto [n1, d1] = expanded();
    auto [n2, d2] = o.expanded();
    return *this = from_expanded(n1 * n2, d1 * d2);
  }
  FactorList merged;
  std::size_t i = 0, j = 0;
  while (i < den_.size() || j < o.den_.size()) {
    if (j == o.den_.size() || (i < den_.size() && den_[i].first->id < o.den_[j].first->id)) {
      merged.push_back(den_[i++]);
    } else if (i == den_.size() || o.den_[j].first->id < den_[i].first->id) {
      merged.push_back(o.den_[j++]);
    } else {
      merged.emplace_back(den_[i].first, den_[i].second + o.den_[j].second);
      ++i;
      ++j;
    }
  }
  // Each numerator can only share factors with the other operand's denominator.
  ZPoly na = num_, nb = o.num_;
  auto strip = [](ZPoly& n, const FactorList& fl, FactorList& target) {
    for (const auto& [f, e] : fl) {
      auto it = std::find_if(target.begin(), target.end(), [&](const auto& x) { return x.first->id == f->id; });
      if (!f->irreducible) continue;
      ZPoly q;
      while (it->second > 0 && zpoly_exact_div(n, f->poly, &q)) {
        n = std::move(q);
        --it->second;
      }
    }
  };
  strip(na, o.den_, merged);
  strip(nb, den_, merged);
  content_ *= o.content_;
  num_ = na * nb;
  den_ = std::move(merged);
  bool composite = std::any_of(den_.begin(), den_.end(), [](const auto& x) { return !x.first->irreducible; });
  if (composite)
    cancel();
  else {
    den_.erase(std::remove_if(den_.begin(), den_.end(), [](const auto& x) { return x.second == 0; }), den_.end());
    normalize_content();
  }
  return *this;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (!all_coprime(den_, o.den_)) {
    auto [n1, d1] = expanded();
    auto [n2, d2] = o.expanded();
    return *this = from_expanded(n1 * d2 + n2 * d1, d1 * d2);
  }
  FactorList merged;
  std::vector<int> ea, eb;
  std::size_t i = 0, j = 0;
  while (i < den_.size() || j < o.den_.size()) {
    if (j == o.den_.size() || (i < den_.size() && den_[i].first->id < o.den_[j].first->id)) {
      merged.push_back(den_[i]);
      ea.push_back(den_[i].second);
      eb.push_back(0);
      ++i;
    } else if (i == den_.size() || o.den_[j].first->id < den_[i].first->id) {
      merged.push_back(o.den_[j]);
      ea.push_back(0);
      eb.push_back(o.den_[j].second);
      ++j;
    } else {
      int m = std::max(den_[i].second, o.den_[j].second);
      merged.emplace_back(den_[i].first, m);
      ea.push_back(den_[i].second);
      eb.push_back(o.den_[j].second);
      ++i;
      ++j;
    }
  }
  std::vector<int> da(merged.size()), db(merged.size());
  for (std::size_t k = 0; k < merged.size(); ++k) {
    da[k] = merged[k].second - ea[k];
    db[k] = merged[k].second - eb[k];
  }
  BigInt qa = content_.den(), qb = o.content_.den();
  ZPoly ta = num_ * factor_power_product(merged, da) * (content_.num() * qb);
  ZPoly tb = o.num_ * factor_power_product(merged, db) * (o.content_.num() * qa);
  num_ = ta + tb;
  content_ = Rational(BigInt(1), qa * qb);
  den_ = std::move(merged);
  if (num_.is_zero()) return *this = RatFunc();
  normalize_content();
  // Only factors that were raised to a common power can now divide the numerator.
  FactorList touched;
  for (std::size_t k = 0; k < den_.size(); ++k)
    if (ea[k] > 0 && eb[k] > 0) touched.push_back(den_[k]);
  if (!touched.empty()) cancel(&touched);
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

std::string RatFunc::str(const std::string& var) const {
  if (is_zero()) return "0";
  auto n = numerator();
  if (den_.empty()) return n.str(var);
  return "(" + n.str(var) + ")/(" + denominator().str(var) + ")";
}

RatFunc pow(const RatFunc& r, int e) {
  if (e < 0) return pow(r.inverse(), -e);
  RatFunc acc(1), b = r;
  while (e > 0) {
    if (e & 1) acc *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return acc;
}

std::ostream& operator<<(std::ostream& os, const RatFunc& r) { return os << r.str(); }

}  // namespace lomap
