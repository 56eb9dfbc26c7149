#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "kq/jets/multi_index.hpp"

namespace kq {

/// Truncated multivariate Taylor expansion of a scalar at a chart point.
///
/// Coefficients are Taylor-normalized: slot alpha holds d^alpha f / alpha!,
/// so multiplication is a truncated polynomial convolution. Arithmetic
/// between jets of different truncation orders yields the lower order.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int dim, int order);
  /// Jet of the coordinate function x^index at a point whose index-th
  /// coordinate equals value.
  static Jet variable(int index, double value, int dim, int order);
  static Jet from_coefficients(int dim, int order, std::vector<double> coeffs);

  int dim() const { return table_ ? table_->dim() : 0; }
  int order() const { return order_; }
  std::size_t size() const { return c_.size(); }
  bool empty() const { return table_ == nullptr; }
  const MultiIndexTable& table() const { return *table_; }

  double value() const { return c_[0]; }
  double operator[](std::size_t idx) const { return c_[idx]; }
  double& operator[](std::size_t idx) { return c_[idx]; }
  std::span<const double> coefficients() const { return c_; }

  /// Taylor coefficient d^alpha f / alpha!.
  double coeff(std::span<const int> alpha) const;
  /// Raw partial derivative d^alpha f at the expansion point.
  double partial(std::span<const int> alpha) const;
  /// First partials as a vector (requires order >= 1).
  std::vector<double> gradient() const;

  /// d/dx^i; the result has order one lower.
  Jet derivative(int i) const;
  /// d^alpha; the result has order lowered by |alpha|.
  Jet derivative(std::span<const int> alpha) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  Jet operator-() const;

  /// Multiplicative inverse; throws DomainError for a zero value part.
  Jet reciprocal() const;

 private:
  Jet(const MultiIndexTable* table, int order, std::vector<double> c)
      : table_(table), order_(order), c_(std::move(c)) {}
  void align_with(const Jet& other);

  const MultiIndexTable* table_ = nullptr;
  int order_ = 0;
  std::vector<double> c_;

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet sqrt(const Jet& j);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

/// Square root; the value part must be strictly positive.
Jet sqrt(const Jet& j);
/// Integer power (negative exponents go through the reciprocal).
Jet pow(const Jet& j, int exponent);

std::ostream& operator<<(std::ostream& os, const Jet& j);

/// Seeds the coordinate jet x^index. Throws std::out_of_range when
/// index >= dim.
Jet seed_variable(int index, double value, int dim, int order);
Jet jet_sqrt(const Jet& j);

}  // namespace kq
