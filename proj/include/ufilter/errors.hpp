#pragma once

#include <stdexcept>
#include <string>

namespace ufilter {

/// Thrown when a computation produces non-finite values; the message carries
/// the location context (step, sample index, pseudo-time).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for malformed or inconsistent run configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ufilter
