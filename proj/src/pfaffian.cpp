#include "lomap/pfaffian.hpp"

#include <algorithm>
#include <sstream>

namespace lomap {

Rational det_exact(DynMatrix<Rational> m) {
  const Eigen::Index n = m.rows();
  Rational det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      Rational f = m(r, c) / m(c, c);
      for (Eigen::Index k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

AntisymMatrix<Rational> random_antisym(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  AntisymMatrix<Rational> a(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) a.set(i, j, Rational(num(rng), den(rng)));
  return a;
}

FormalPoly::FormalPoly(const Rational& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

FormalPoly FormalPoly::mu(int i, int j) {
  FormalPoly r;
  if (i == j) return r;
  if (i < j)
    r.terms_.emplace(Monomial{{i, j}}, Rational(1));
  else
    r.terms_.emplace(Monomial{{j, i}}, Rational(-1));
  return r;
}

void FormalPoly::add_term(Monomial m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FormalPoly& FormalPoly::operator+=(const FormalPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FormalPoly& FormalPoly::operator-=(const FormalPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

FormalPoly operator*(const FormalPoly& a, const FormalPoly& b) {
  FormalPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      FormalPoly::Monomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      r.add_term(std::move(m), ca * cb);
    }
  return r;
}

FormalPoly operator*(FormalPoly a, const Rational& c) {
  if (c.is_zero()) return {};
  for (auto& [m, v] : a.terms_) v *= c;
  return a;
}

FormalPoly FormalPoly::derivative(int k) const {
  FormalPoly r;
  const Rational scale(1, 2 * k);
  for (const auto& [m, c] : terms_) {
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (p > 0 && m[p] == m[p - 1]) continue;  // repeated symbols: count multiplicity once
      std::size_t mult = static_cast<std::size_t>(std::count(m.begin(), m.end(), m[p]));
      Monomial rest = m;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
      FormalPoly base;
      base.terms_.emplace(rest, c * Rational(static_cast<long>(mult)) * scale);
      auto [i, j] = m[p];
      r += base * (mu(i + k, j) + mu(i, j + k));
    }
  }
  return r;
}

std::string FormalPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (const auto& [i, j] : m) os << "*mu" << i << '_' << j;
  }
  return os.str();
}

FormalPoly formal_pfaffian(const std::vector<int>& labels) {
  return pfaffian_of<FormalPoly>(static_cast<int>(labels.size()), [&](int p, int q) {
    return FormalPoly::mu(labels[static_cast<std::size_t>(p)], labels[static_cast<std::size_t>(q)]);
  });
}

}  // namespace lomap
