#pragma once

#include <stdexcept>
#include <string>

namespace vsc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model parameters or states that violate a documented precondition.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A requested quantity lies in a non-physical regime, e.g. an imaginary
/// renormalized cavity frequency.
class UnstableRegimeError : public Error {
 public:
  using Error::Error;
};

/// A trajectory left the configured coordinate bound.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long long step) : Error(what), step_(step) {}
  long long step() const noexcept { return step_; }

 private:
  long long step_;
};

class SpectrumError : public Error {
 public:
  using Error::Error;
};

/// Configuration parsing/validation failure. Carries the offending field and,
/// when known, the 1-based source line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field, int line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace vsc
