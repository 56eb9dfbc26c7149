#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/geometry/tensor.hpp"
#include "kq/jets/field_bundle.hpp"

namespace kq {

inline constexpr int kMaxPolyDegree = 5;

/// A momentum polynomial evaluated at a chart point: one symmetric tensor of
/// jets per present degree.
struct PolyJet {
  int n = 0;
  std::array<std::optional<SymTensor>, kMaxPolyDegree + 1> deg;

  bool has(int k) const { return k >= 0 && k <= kMaxPolyDegree && deg[k].has_value(); }
  int max_degree() const;
  /// Sum_k P_k^{i1..ik} xi_i1 .. xi_ik at the expansion point.
  double value(std::span<const double> xi) const;
  double max_abs_value() const;
  int order() const;

  /// Adds s into degree k, creating it if absent.
  void accumulate(int k, const SymTensor& s);
  PolyJet& operator+=(const PolyJet& o);
  PolyJet& operator-=(const PolyJet& o);
  PolyJet& operator*=(double s);
};

/// Phase-space polynomial P(x, xi) = Sum_k P_k^{i1..ik}(x) xi_i1 .. xi_ik with
/// symmetric contravariant coefficient fields of degree 0..5. Each present
/// degree holds one field per index multiset (MultisetIndex order).
class PolyObservable {
 public:
  PolyObservable() = default;
  explicit PolyObservable(int n);

  int dim() const { return n_; }
  /// Highest present degree, -1 when empty.
  int degree() const;
  bool has(int k) const { return k >= 0 && k <= kMaxPolyDegree && comps_[k].has_value(); }
  const FieldBundle& component(int k) const;
  bool has_expressions() const;

  PolyObservable& set_component(int k, FieldBundle fields);
  PolyObservable& set_component(int k, std::vector<ScalarField> fields);
  PolyObservable& clear_component(int k);
  /// Expression for multiset m of degree k (expression-backed components).
  ScalarField expression(int k, std::span<const int> idx) const;

  PolyJet evaluate(std::span<const double> x, int order) const;
  double value(std::span<const double> x, std::span<const double> xi) const;

  nlohmann::json to_json() const;
  static PolyObservable from_json(const nlohmann::json& j);

  /// Builders for common shapes.
  static PolyObservable momentum(int n, int i);                      // xi_i
  static PolyObservable function(int n, ScalarField f);              // degree 0
  static PolyObservable vector_field(std::vector<ScalarField> X);    // X^i xi_i
  static PolyObservable quadratic(std::vector<std::vector<ScalarField>> P);  // P^ij xi_i xi_j
  /// Sum of two observables (component bundles are combined per degree).
  friend PolyObservable operator+(const PolyObservable& a, const PolyObservable& b);
  friend PolyObservable operator*(double s, const PolyObservable& a);
  /// Pointwise product of two observables.
  friend PolyObservable operator*(const PolyObservable& a, const PolyObservable& b);

 private:
  int n_ = 0;
  std::array<std::optional<FieldBundle>, kMaxPolyDegree + 1> comps_;
};

/// Symmetric product sym(P (x) Q).
SymTensor symmetric_product(const SymTensor& p, const SymTensor& q);
PolyJet product(const PolyJet& p, const PolyJet& q);

}  // namespace kq
