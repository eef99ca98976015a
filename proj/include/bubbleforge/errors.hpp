#pragma once

#include <stdexcept>
#include <string>

namespace bubbleforge {

/// Base of every library error. Precondition failures derive from
/// InvalidInput, numerical breakdowns from NumericalFailure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

#define BUBBLEFORGE_ERROR(Name, Base) \
  class Name : public Base {          \
   public:                            \
    using Base::Base;                 \
  }

BUBBLEFORGE_ERROR(NonpositiveValue, NumericalFailure);
BUBBLEFORGE_ERROR(KappaTooLarge, InvalidInput);
BUBBLEFORGE_ERROR(AtCenter, InvalidInput);
BUBBLEFORGE_ERROR(BadRadii, InvalidInput);
BUBBLEFORGE_ERROR(BadConfig, InvalidInput);
BUBBLEFORGE_ERROR(OverlapError, InvalidInput);
BUBBLEFORGE_ERROR(NoSolution, InvalidInput);
BUBBLEFORGE_ERROR(Coincident, InvalidInput);
BUBBLEFORGE_ERROR(InvalidGeometry, InvalidInput);
BUBBLEFORGE_ERROR(OutOfDomain, InvalidInput);
BUBBLEFORGE_ERROR(ProfileViolated, NumericalFailure);
BUBBLEFORGE_ERROR(FitDiverged, NumericalFailure);

#undef BUBBLEFORGE_ERROR

}  // namespace bubbleforge
