#pragma once

#include <stdexcept>
#include <string>

namespace gtpslam {

/// Malformed or invalid configuration (scenario files, CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model function was evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An optimizer could not make progress (e.g. damping overflow).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtpslam
