#pragma once

#include <stdexcept>
#include <string>

namespace fracspec {

// Base of every library failure. The CLI maps ConfigError to exit code 2 and
// every other Error to exit code 3; check-style commands use 0/1 for verdicts.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied input: malformed config, bad digit sets, unknown names.
struct ConfigError : Error {
  using Error::Error;
};

// Failure while computing: overflow guards, non-convergence, bad matrices.
struct ComputeError : Error {
  using Error::Error;
};

struct NonFiniteError : ComputeError {
  using ComputeError::ComputeError;
};
struct NotHermitianError : ComputeError {
  using ComputeError::ComputeError;
};
struct SizeMismatchError : ConfigError {
  using ConfigError::ConfigError;
};
struct NotExpansiveError : ConfigError {
  using ConfigError::ConfigError;
};
struct DuplicateDigitError : ConfigError {
  using ConfigError::ConfigError;
};
struct MissingZeroDigitError : ConfigError {
  using ConfigError::ConfigError;
};
struct DegenerateDigitsError : ConfigError {
  using ConfigError::ConfigError;
};
struct UnknownPresetError : ConfigError {
  using ConfigError::ConfigError;
};
struct SizeOverflowError : ComputeError {
  using ComputeError::ComputeError;
};
struct TruncationFailureError : ComputeError {
  using ComputeError::ComputeError;
};
struct NoCyclesError : ComputeError {
  using ComputeError::ComputeError;
};
struct AmbiguousDigitError : ComputeError {
  using ComputeError::ComputeError;
};
struct NoLowerBoundError : ComputeError {
  using ComputeError::ComputeError;
};

}  // namespace fracspec
