#pragma once

#include <stdexcept>
#include <string>

namespace qpml {

/// Base class for all qpml failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad parameters, bad config, violated preconditions. CLI exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// k sits at (or numerically on top of) a threshold k^2 = (n+alpha)^2.
class ThresholdViolation : public ValidationError {
public:
  ThresholdViolation(int n, double k, double alpha)
      : ValidationError("threshold violation: k^2 == (n+alpha)^2 at n=" + std::to_string(n) +
                        " (k=" + std::to_string(k) + ", alpha=" + std::to_string(alpha) + ")"),
        n_(n) {}
  int offending_n() const { return n_; }

private:
  int n_;
};

/// Factorization or residual failure in the linear solver. CLI exit code 3.
class SolveError : public Error {
public:
  using Error::Error;
};

}  // namespace qpml
