#pragma once

#include <stdexcept>
#include <string>

namespace riskgame {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad schemas, dimension mismatches,
// unnormalized probabilities, conditioning on zero-mass types, infeasible
// user-supplied duals.  CLI maps these to the usage exit code.
struct InputError : Error {
  using Error::Error;
};

// Numerical failure inside a solver: ill-conditioned LP, failed convergence
// of an iterative method.  CLI maps these to the numerical exit code.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace riskgame
