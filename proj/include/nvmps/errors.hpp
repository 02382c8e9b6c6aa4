#pragma once

#include <stdexcept>
#include <string>

namespace nvmps {

// Error taxonomy used across the library:
//   ShapeError       - tensor/matrix extents do not match an operation's contract
//   ValidationError  - arguments or state violate a documented precondition
//   NumericalError   - a numerical routine produced non-finite data or failed
//   CapacityError    - a dense-representation size cap would be exceeded
//   IntegrationError - the adaptive ODE solver underflowed its step size

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegrationError : NumericalError {
  IntegrationError(const std::string& what, double t_failed)
      : NumericalError(what), t(t_failed) {}
  double t;  // integration time at which the failure occurred, in us
};

}  // namespace nvmps
