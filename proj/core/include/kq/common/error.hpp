#pragma once

#include <stdexcept>
#include <string>

namespace kq {

// Raised when a value leaves the domain of an operation: a jet division by a
// zero value part, sqrt of a non-positive value, a point outside a chart.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double offending)
      : std::domain_error(what), offending_(offending) {}
  explicit DomainError(const std::string& what)
      : std::domain_error(what), offending_(0.0) {}

  double offending_value() const noexcept { return offending_; }

 private:
  double offending_;
};

// Singular metric, singular Staeckel matrix, etc.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model description, catalog entry or expression tree.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kq
