#ifndef JORDER_ERRORS_HPP_
#define JORDER_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jorder {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input files or function specs.
struct ParseError : Error {
  using Error::Error;
};

// Argument or eigenvalue outside a scalar function's domain.
struct DomainError : Error {
  using Error::Error;
};

// A positivity / Loewner-order precondition failed (e.g. inverting an
// indefinite matrix).
struct OrderError : Error {
  using Error::Error;
};

// The dense eigensolver did not converge or produced an invalid frame.
struct DecompositionError : Error {
  using Error::Error;
};

// Metadata combination not supported by compose().
struct UnsupportedComposition : Error {
  using Error::Error;
};

// Any other violated call contract.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace jorder

#endif  // JORDER_ERRORS_HPP_
