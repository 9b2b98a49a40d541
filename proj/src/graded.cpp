#include "lomap/graded.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lomap {

std::string mono_str(const Mono3& m) {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < 3; ++k) {
    if (m[static_cast<std::size_t>(k)] == 0) continue;
    if (!first) os << ' ';
    first = false;
    os << 't' << (k + 1);
    if (m[static_cast<std::size_t>(k)] > 1) os << '^' << m[static_cast<std::size_t>(k)];
  }
  return first ? "1" : os.str();
}

GradedSeries3 GradedSeries3::constant(const NPolynomial& c, int max_weight) {
  GradedSeries3 s(max_weight);
  s.set({0, 0, 0}, c);
  return s;
}

GradedSeries3 GradedSeries3::t(int k, int max_weight) {
  GradedSeries3 s(max_weight);
  Mono3 m{0, 0, 0};
  m[static_cast<std::size_t>(k - 1)] = 1;
  s.set(m, NPolynomial::constant(Rational(1)));
  return s;
}

NPolynomial GradedSeries3::coeff(const Mono3& m) const {
  if (weight(m) > max_weight_) throw std::out_of_range("GradedSeries3: monomial " + mono_str(m) + " above max_weight");
  auto it = terms_.find(m);
  return it == terms_.end() ? NPolynomial() : it->second;
}

void GradedSeries3::set(const Mono3& m, const NPolynomial& c) {
  if (weight(m) > max_weight_) return;
  if (c.is_zero())
    terms_.erase(m);
  else
    terms_[m] = c;
}

void GradedSeries3::add(const Mono3& m, const NPolynomial& c) {
  if (weight(m) > max_weight_ || c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GradedSeries3 GradedSeries3::truncated(int w) const {
  GradedSeries3 r(std::min(w, max_weight_));
  for (const auto& [m, c] : terms_)
    if (weight(m) <= r.max_weight_) r.terms_.emplace(m, c);
  return r;
}

GradedSeries3& GradedSeries3::operator+=(const GradedSeries3& o) {
  if (o.max_weight_ < max_weight_) *this = truncated(o.max_weight_);
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

GradedSeries3& GradedSeries3::operator-=(const GradedSeries3& o) {
  if (o.max_weight_ < max_weight_) *this = truncated(o.max_weight_);
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

GradedSeries3& GradedSeries3::operator*=(const NPolynomial& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second = it->second * c;
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

namespace {

// Lowest weight present; max_weight + 1 for the zero series.
int valuation(const GradedSeries3& s) {
  int v = s.max_weight() + 1;
  for (const auto& [m, c] : s.terms()) v = std::min(v, weight(m));
  return v;
}

}  // namespace

GradedSeries3 operator*(const GradedSeries3& a, const GradedSeries3& b) {
  int mw = std::min(a.max_weight_ + valuation(b), b.max_weight_ + valuation(a));
  GradedSeries3 r(mw);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Mono3 m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      if (weight(m) <= mw) r.add(m, ca * cb);
    }
  return r;
}

GradedSeries3 GradedSeries3::derivative(int k) const {
  GradedSeries3 r(max_weight_ - k);
  const auto i = static_cast<std::size_t>(k - 1);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Mono3 d = m;
    --d[i];
    r.add(d, c * Rational(m[i]));
  }
  return r;
}

GradedSeries3 GradedSeries3::shift_N(long c) const {
  GradedSeries3 r(max_weight_);
  for (const auto& [m, p] : terms_) r.set(m, npoly_shift(p, c));
  return r;
}

GradedSeries3 GradedSeries3::part(int w) const {
  GradedSeries3 r(max_weight_);
  for (const auto& [m, c] : terms_)
    if (weight(m) == w) r.terms_.emplace(m, c);
  return r;
}

std::map<int, NPolynomial> GradedSeries3::restrict_t3() const {
  std::map<int, NPolynomial> out;
  for (const auto& [m, c] : terms_)
    if (m[0] == 0 && m[1] == 0) out.emplace(m[2], c);
  return out;
}

// Both use the weight operator E: E(Z) = Z E(log Z), so for homogeneous parts
// w Y_w = w Z_w - sum_{j<w} j Y_j Z_{w-j} and w X_w = sum_{j<=w} j Y_j X_{w-j}.

GradedSeries3 log(const GradedSeries3& z) {
  const int mw = z.max_weight();
  if (z.coeff({0, 0, 0}) != NPolynomial::constant(Rational(1)))
    throw std::domain_error("GradedSeries3 log: constant term must be 1");
  std::vector<GradedSeries3> zp, yp(static_cast<std::size_t>(mw) + 1, GradedSeries3(mw));
  for (int w = 0; w <= mw; ++w) zp.push_back(z.part(w));
  GradedSeries3 y(mw);
  for (int w = 1; w <= mw; ++w) {
    GradedSeries3 acc = zp[static_cast<std::size_t>(w)] * NPolynomial::constant(Rational(w));
    for (int j = 1; j < w; ++j) {
      if (yp[static_cast<std::size_t>(j)].terms().empty() || zp[static_cast<std::size_t>(w - j)].terms().empty()) continue;
      GradedSeries3 prod = yp[static_cast<std::size_t>(j)] * zp[static_cast<std::size_t>(w - j)];
      acc -= prod.part(w) * NPolynomial::constant(Rational(j));
    }
    acc *= NPolynomial::constant(Rational(1, w));
    yp[static_cast<std::size_t>(w)] = acc;
    y += acc;
  }
  return y;
}

GradedSeries3 exp(const GradedSeries3& y) {
  const int mw = y.max_weight();
  if (!y.coeff({0, 0, 0}).is_zero()) throw std::domain_error("GradedSeries3 exp: constant term must be 0");
  std::vector<GradedSeries3> yp, xp;
  for (int w = 0; w <= mw; ++w) yp.push_back(y.part(w));
  xp.push_back(GradedSeries3::constant(NPolynomial::constant(Rational(1)), mw));
  GradedSeries3 x = xp[0];
  for (int w = 1; w <= mw; ++w) {
    GradedSeries3 acc(mw);
    for (int j = 1; j <= w; ++j) {
      if (yp[static_cast<std::size_t>(j)].terms().empty() || xp[static_cast<std::size_t>(w - j)].terms().empty()) continue;
      GradedSeries3 prod = yp[static_cast<std::size_t>(j)] * xp[static_cast<std::size_t>(w - j)];
      acc += prod.part(w) * NPolynomial::constant(Rational(j));
    }
    acc *= NPolynomial::constant(Rational(1, w));
    xp.push_back(acc);
    x += acc;
  }
  return x;
}

}  // namespace lomap
