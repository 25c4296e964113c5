#pragma once

#include <stdexcept>
#include <string>

namespace lmc {

/// Operands of incompatible order, or a malformed matrix.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The principal matrix logarithm does not exist for the given input.
class LogDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A model definition is inconsistent or lacks what an operation needs.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sampler could not produce valid witnesses.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lmc
