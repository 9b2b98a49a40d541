#pragma once

#include <stdexcept>
#include <string>

namespace lomap {

/// Base for all domain failures raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LOMAP_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

LOMAP_DEFINE_ERROR(DivByZeroSeries);
LOMAP_DEFINE_ERROR(SqrtDomain);
LOMAP_DEFINE_ERROR(ValuationError);
LOMAP_DEFINE_ERROR(TruncationError);
LOMAP_DEFINE_ERROR(ZeroDenominator);
LOMAP_DEFINE_ERROR(NotInSpan);
LOMAP_DEFINE_ERROR(EssentialPole);
LOMAP_DEFINE_ERROR(MissingDependency);
LOMAP_DEFINE_ERROR(RankDeficient);
LOMAP_DEFINE_ERROR(Inconsistent);
LOMAP_DEFINE_ERROR(ResidualNonzero);
LOMAP_DEFINE_ERROR(SizeLimit);
LOMAP_DEFINE_ERROR(OddDimension);
LOMAP_DEFINE_ERROR(ParseError);

#undef LOMAP_DEFINE_ERROR

}  // namespace lomap
