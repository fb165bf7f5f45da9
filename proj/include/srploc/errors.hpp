#pragma once

#include <stdexcept>
#include <string>

namespace srploc {

/// Bad value passed to an operation (non-finite input, mismatched sizes, ...).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Index or fractional lag outside the valid range.
struct OutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Correlation has no usable peak (all values equal).
struct AmbiguousPeak : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every frame of the input fell below the energy floor.
struct NoSignal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Drive geometry whose kinematic matrix is not invertible.
struct SingularGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File could not be read, parsed or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srploc
