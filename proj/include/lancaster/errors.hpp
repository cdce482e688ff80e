#pragma once

#include <stdexcept>
#include <string>

namespace lancaster {

/// A truncated series hit its order cap before the tail criterion was met.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, int n_reached)
      : std::runtime_error(what), n_reached_(n_reached) {}
  int n_reached() const noexcept { return n_reached_; }

 private:
  int n_reached_;
};

/// Grid tabulation clipped more negative mass than the sampler tolerates.
class ClippingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment or design configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lancaster
