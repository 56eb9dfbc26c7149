#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kq/jets/jet.hpp"
#include "kq/jets/scalar_field.hpp"

namespace kq {

/// A fixed-length list of scalar fields evaluated together at a point.
///
/// Either backed by expression trees (serializable, shared subexpressions
/// evaluated once) or by an evaluator callable for quantities computed
/// numerically per point, such as the entries of an inverted matrix.
class FieldBundle {
 public:
  using Evaluator = std::function<std::vector<Jet>(std::span<const double>, int)>;

  FieldBundle() = default;
  explicit FieldBundle(std::vector<ScalarField> fields);
  FieldBundle(std::size_t size, Evaluator evaluator);

  std::size_t size() const { return size_; }
  bool has_expressions() const { return expressions_ != nullptr; }
  const std::vector<ScalarField>& expressions() const;

  std::vector<Jet> evaluate(std::span<const double> x, int order) const;

 private:
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<ScalarField>> expressions_;
  Evaluator evaluator_;
};

}  // namespace kq
