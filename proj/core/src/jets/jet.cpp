#include "kq/jets/jet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "kq/common/error.hpp"

namespace kq {
namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet order must be in [0, " +
                                std::to_string(kMaxJetOrder) + "], got " +
                                std::to_string(order));
  }
}

void check_compatible(const Jet& a, const Jet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("operation on an empty jet");
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("jet dimension mismatch: " + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Jet Jet::constant(double value, int dim, int order) {
  check_order(order);
  const auto& t = MultiIndexTable::get(dim);
  std::vector<double> c(t.count(order), 0.0);
  c[0] = value;
  return Jet(&t, order, std::move(c));
}

Jet Jet::variable(int index, double value, int dim, int order) {
  Jet j = constant(value, dim, order);
  if (index < 0 || index >= dim) {
    throw std::out_of_range("variable index " + std::to_string(index) +
                            " out of range for dimension " + std::to_string(dim));
  }
  if (order >= 1) j.c_[j.table_->raise(0, index)] = 1.0;
  return j;
}

Jet Jet::from_coefficients(int dim, int order, std::vector<double> coeffs) {
  check_order(order);
  const auto& t = MultiIndexTable::get(dim);
  if (coeffs.size() != t.count(order)) {
    throw std::invalid_argument("coefficient count does not match binomial(dim+order, order)");
  }
  return Jet(&t, order, std::move(coeffs));
}

double Jet::coeff(std::span<const int> alpha) const {
  const int idx = table_->index_of(alpha);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size()) {
    throw std::out_of_range("multi-index beyond the jet truncation order");
  }
  return c_[idx];
}

double Jet::partial(std::span<const int> alpha) const {
  const int idx = table_->index_of(alpha);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size()) {
    throw std::out_of_range("multi-index beyond the jet truncation order");
  }
  return c_[idx] * table_->factorial(idx);
}

std::vector<double> Jet::gradient() const {
  if (order_ < 1) throw std::logic_error("gradient needs a jet of order >= 1");
  std::vector<double> g(dim());
  for (int i = 0; i < dim(); ++i) g[i] = c_[table_->raise(0, i)];
  return g;
}

Jet Jet::derivative(int i) const {
  if (order_ < 1) throw std::logic_error("derivative of an order-0 jet");
  if (i < 0 || i >= dim()) throw std::out_of_range("derivative index out of range");
  const std::size_t n = table_->count(order_ - 1);
  std::vector<double> d(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const int up = table_->raise(idx, i);
    d[idx] = (table_->alpha(idx)[i] + 1) * c_[up];
  }
  return Jet(table_, order_ - 1, std::move(d));
}

Jet Jet::derivative(std::span<const int> alpha) const {
  Jet out = *this;
  for (int i = 0; i < static_cast<int>(alpha.size()); ++i) {
    for (int k = 0; k < alpha[i]; ++k) out = out.derivative(i);
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::invalid_argument("cannot raise jet truncation order");
  if (order == order_) return *this;
  check_order(order);
  std::vector<double> c(c_.begin(), c_.begin() + table_->count(order));
  return Jet(table_, order, std::move(c));
}

void Jet::align_with(const Jet& other) {
  check_compatible(*this, other);
  if (other.order_ < order_) {
    order_ = other.order_;
    c_.resize(table_->count(order_));
  }
}

Jet& Jet::operator+=(const Jet& other) {
  align_with(other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  align_with(other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& v : out.c_) v = -v;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order_, b.order_);
  const auto& t = *a.table_;
  const std::size_t n = t.count(order);
  std::vector<double> c(n, 0.0);
  for (std::size_t ic = 0; ic < n; ++ic) {
    double s = 0.0;
    for (const auto& p : t.products_of(ic)) s += a.c_[p.a] * b.c_[p.b];
    c[ic] = s;
  }
  return Jet(a.table_, order, std::move(c));
}

Jet Jet::reciprocal() const {
  const double v0 = c_[0];
  if (v0 == 0.0 || !std::isfinite(v0)) {
    throw DomainError("division by a jet with zero value part", v0);
  }
  std::vector<double> u(c_.size(), 0.0);
  u[0] = 1.0 / v0;
  for (std::size_t ic = 1; ic < c_.size(); ++ic) {
    double s = 0.0;
    for (const auto& p : table_->products_of(ic)) {
      if (p.b == ic) continue;
      s += c_[p.a] * u[p.b];
    }
    u[ic] = -s / v0;
  }
  return Jet(table_, order_, std::move(u));
}

Jet operator/(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  return a * b.reciprocal();
}

Jet sqrt(const Jet& j) {
  const double v0 = j.c_[0];
  if (!(v0 > 0.0)) throw DomainError("sqrt of a jet with non-positive value part", v0);
  std::vector<double> s(j.c_.size(), 0.0);
  s[0] = std::sqrt(v0);
  for (std::size_t ic = 1; ic < s.size(); ++ic) {
    double acc = 0.0;
    for (const auto& p : j.table_->products_of(ic)) {
      if (p.a == ic || p.b == ic) continue;
      acc += s[p.a] * s[p.b];
    }
    s[ic] = (j.c_[ic] - acc) / (2.0 * s[0]);
  }
  return Jet(j.table_, j.order_, std::move(s));
}

Jet pow(const Jet& j, int exponent) {
  if (exponent < 0) return pow(j, -exponent).reciprocal();
  Jet result = Jet::constant(1.0, j.dim(), j.order());
  Jet base = j;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return a.reciprocal() *= s; }

std::ostream& operator<<(std::ostream& os, const Jet& j) {
  os << "Jet(dim=" << j.dim() << ", order=" << j.order() << ") {";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) os << ", ";
    os << j[i];
  }
  return os << "}";
}

Jet seed_variable(int index, double value, int dim, int order) {
  return Jet::variable(index, value, dim, order);
}

Jet jet_sqrt(const Jet& j) { return sqrt(j); }

}  // namespace kq
