// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cfris {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive definite is numerically singular.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Input violates a modelling assumption (e.g. a covariance that is not PSD).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration. The message names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfris
