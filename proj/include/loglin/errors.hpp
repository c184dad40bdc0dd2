#pragma once

#include <stdexcept>
#include <string>

namespace loglin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LOGLIN_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// A matrix handed to vee() is not an se(2) element.
LOGLIN_DEFINE_ERROR(StructureViolation);
// Rotation angle too close to +-pi for the principal logarithm branch.
LOGLIN_DEFINE_ERROR(BranchSingularity);
// An ellipsoid reaches past the +-pi heading guard.
LOGLIN_DEFINE_ERROR(AngleWrap);
LOGLIN_DEFINE_ERROR(NotStabilizable);
LOGLIN_DEFINE_ERROR(NoConvergence);
LOGLIN_DEFINE_ERROR(Infeasible);
LOGLIN_DEFINE_ERROR(IllConditioned);
LOGLIN_DEFINE_ERROR(DegenerateVelocity);
LOGLIN_DEFINE_ERROR(SpanTooLarge);
LOGLIN_DEFINE_ERROR(Degenerate);
LOGLIN_DEFINE_ERROR(Divergence);
LOGLIN_DEFINE_ERROR(InvalidArgument);
LOGLIN_DEFINE_ERROR(ScenarioError);

#undef LOGLIN_DEFINE_ERROR

}  // namespace loglin
