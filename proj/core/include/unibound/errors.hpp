#pragma once

#include <stdexcept>
#include <string>

namespace unibound {

/// Invalid parameters handed to a builder or an operation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration file / override problem tied to one key.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string key, const std::string& message)
      : ValidationError(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Exponents outside the regime 0 < alpha < beta.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested feature has no implementation (e.g. clamped plate).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A certificate needs an assumption constant the system does not declare,
/// or the declared constants contradict the data.
class ConstantsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step size fell below dt_min.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state produced by the stepper.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unibound
