#include "lomap/qroot3.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lomap {

QRoot3& QRoot3::operator*=(const QRoot3& o) {
  Rational na = a * o.a + Rational(3) * b * o.b;
  Rational nb = a * o.b + b * o.a;
  a = std::move(na);
  b = std::move(nb);
  return *this;
}

QRoot3& QRoot3::operator/=(const QRoot3& o) {
  Rational n = o.norm();
  if (n.is_zero()) throw std::domain_error("QRoot3: division by zero");
  *this *= o.conj();
  a /= n;
  b /= n;
  return *this;
}

double QRoot3::to_double() const {
  return a.to_double() + b.to_double() * std::sqrt(3.0);
}

std::string QRoot3::str() const {
  if (b.is_zero()) return a.str();
  std::string bs;
  if (b == Rational(1))
    bs = "√3";
  else if (b == Rational(-1))
    bs = "-√3";
  else
    bs = b.str() + "√3";
  if (a.is_zero()) return bs;
  return a.str() + (b.sign() > 0 ? "+" : "") + bs;
}

std::ostream& operator<<(std::ostream& os, const QRoot3& x) { return os << x.str(); }

}  // namespace lomap
