#pragma once

#include <stdexcept>
#include <string>

namespace addmc {

// Argument outside the region where a quantity is defined (strip, branch, t <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature or root-finding failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment or grid configuration that cannot produce a valid result.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace addmc
