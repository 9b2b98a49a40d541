#include "lomap/poly.hpp"

namespace lomap {

NPolynomial npoly_shift(const NPolynomial& p, long c) {
  return compose(p, NPolynomial({Rational(c), Rational(1)}));
}

}  // namespace lomap
