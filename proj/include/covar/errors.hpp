#pragma once

#include <stdexcept>
#include <string>

namespace covar {

/// Raised when an iterative numerical routine exhausts its budget without
/// reaching the requested tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an operation is requested on a copula kind that does not
/// support it (e.g. the conditional law given U = alpha for the comonotone
/// copula, which is degenerate).
class UnsupportedCopulaError : public std::domain_error {
  public:
    explicit UnsupportedCopulaError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace covar
