#pragma once

#include <stdexcept>
#include <string>

namespace homocp {

/// Base class of every exception thrown by the library. The concrete type
/// names the failure; what() carries the details.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOMOCP_DECLARE_ERROR(Name)        \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

HOMOCP_DECLARE_ERROR(ParseError);
HOMOCP_DECLARE_ERROR(ClearTooSmall);
HOMOCP_DECLARE_ERROR(MissingAssignment);
HOMOCP_DECLARE_ERROR(DomainError);
HOMOCP_DECLARE_ERROR(NotOnSlice);
HOMOCP_DECLARE_ERROR(OddFreeControl);
HOMOCP_DECLARE_ERROR(InvalidProblem);
HOMOCP_DECLARE_ERROR(UnknownLabel);
HOMOCP_DECLARE_ERROR(OrderTooSmall);
HOMOCP_DECLARE_ERROR(NoBackend);
HOMOCP_DECLARE_ERROR(SolverFailure);
HOMOCP_DECLARE_ERROR(IoError);
HOMOCP_DECLARE_ERROR(SingularIntegrand);
HOMOCP_DECLARE_ERROR(BudgetExceeded);
HOMOCP_DECLARE_ERROR(ConfigError);

#undef HOMOCP_DECLARE_ERROR

}  // namespace homocp
