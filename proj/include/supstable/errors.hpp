#pragma once

#include <stdexcept>
#include <string>

namespace supstable {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter validation.
class RejectRange : public Error {
 public:
  using Error::Error;
};
class RejectSubordinator : public Error {
 public:
  using Error::Error;
};
class RejectAsymmetricCauchy : public Error {
 public:
  using Error::Error;
};

/// An integral missed its error target.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Monte Carlo and density estimation.
class RejectionStarvation : public Error {
 public:
  using Error::Error;
};
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};
class NonMonotoneBias : public Error {
 public:
  using Error::Error;
};
class NonNormalizable : public Error {
 public:
  using Error::Error;
};

// Identities and fits.
class WrongRegime : public Error {
 public:
  using Error::Error;
};
class WindowTooNarrow : public Error {
 public:
  using Error::Error;
};
class MissingLaw : public Error {
 public:
  using Error::Error;
};

/// Bad configuration or command-line usage (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace supstable
