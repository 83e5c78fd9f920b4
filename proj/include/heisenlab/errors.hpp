#pragma once

#include <stdexcept>
#include <string>

namespace heisenlab {

// Operands disagree on length, matrix size or modulus.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An argument is outside the domain of the operation (non-prime modulus,
// empty construction, wrong residue class, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A stated precondition of an operation does not hold for its input.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured element cap.
class SizeCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite search ran off the end of its candidate pool.
class PoolExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sampler or iterative method did not terminate within its budget.
class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heisenlab
