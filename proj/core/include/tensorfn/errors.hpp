#pragma once

#include <stdexcept>
#include <string>

namespace tensorfn {

/// Malformed input: wrong arity, bad function spec, asymmetric matrix, bad option.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// A function evaluated outside its domain, or a tensor outside the admissible set
/// (e.g. a non positive-definite argument for log).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Eigen-solver non-convergence, ill-conditioned interpolation systems and other
/// failures of floating-point machinery.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tensorfn
