#pragma once

#include <stdexcept>
#include <string>

namespace gesim {

/// Invalid configuration values (channel parameters, fading setup, experiment sizes).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mismatched call arguments, e.g. vectors of different lengths.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter estimation impossible from the given data.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run-length payload that cannot be decoded to the requested length.
class MalformedCodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested computation exceeds a configured size cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a closed-form expression.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace gesim
