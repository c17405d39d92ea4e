#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cpvdw {

// Invalid argument outside an operation's domain (negative t, non-unit vector, bad range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedDegreeError : public std::invalid_argument {
 public:
  explicit UnsupportedDegreeError(int degree, int max_degree)
      : std::invalid_argument("polynomial degree " + std::to_string(degree) +
                              " exceeds supported maximum " + std::to_string(max_degree)),
        degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

// A numerical procedure did not reach its requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_error)
      : std::runtime_error(what + " (achieved error estimate " + short_form(achieved_error) + ")"),
        achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  static std::string short_form(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
  }
  double achieved_error_;
};

// NaN/inf encountered where a finite value is required.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal precondition that the mathematics guarantees was violated.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cpvdw
