#ifndef MFE_ERRORS_HPP
#define MFE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mfe {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad construction parameters (grid size, preset strings, config values).
struct InvalidArgumentError : Error {
  using Error::Error;
};

/// Two fields that must share a grid do not.
struct GridMismatchError : Error {
  using Error::Error;
};

/// A field contains NaN or Inf where finite values are required.
struct InvalidFieldError : Error {
  using Error::Error;
};

/// Iterative solver exhausted its budget; carries the last estimate.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double last)
      : Error(what), last_estimate(last) {}
  double last_estimate;
};

/// File could not be read or parsed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mfe

#endif  // MFE_ERRORS_HPP
