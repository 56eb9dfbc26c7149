#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/geometry/chart.hpp"
#include "kq/jets/field_bundle.hpp"

namespace kq {

enum class Signature { kUnspecified, kRiemannian, kLorentzian, kEuclideanized };

std::string to_string(Signature s);
Signature signature_from_string(const std::string& s);

/// Symmetric covariant 2-tensor field g_ij over a chart. Components are held
/// as the upper triangle (i <= j, row-major), or only the diagonal for a
/// metric declared diagonal.
class MetricField {
 public:
  MetricField() = default;
  /// From a full matrix of expressions; only the upper triangle is read and
  /// the lower triangle must match it structurally or be omitted as zeros.
  MetricField(Chart chart, const std::vector<std::vector<ScalarField>>& g,
              Signature sig = Signature::kUnspecified);
  /// From an upper-triangle bundle (n(n+1)/2 fields).
  MetricField(Chart chart, FieldBundle upper, Signature sig = Signature::kUnspecified);

  static MetricField diagonal(Chart chart, std::vector<ScalarField> diag,
                              Signature sig = Signature::kUnspecified);
  static MetricField diagonal(Chart chart, FieldBundle diag, Signature sig = Signature::kUnspecified);

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  Signature signature() const { return signature_; }
  bool is_diagonal() const { return diagonal_; }

  /// Full symmetric matrix of component jets, row-major n*n.
  std::vector<Jet> components(std::span<const double> x, int order) const;
  /// Component expression g_ij (expression-backed metrics only).
  ScalarField expression(int i, int j) const;
  bool has_expressions() const { return bundle_.has_expressions(); }

  nlohmann::json to_json() const;
  static MetricField from_json(const nlohmann::json& j);

 private:
  Chart chart_;
  FieldBundle bundle_;
  bool diagonal_ = false;
  Signature signature_ = Signature::kUnspecified;
};

}  // namespace kq
