#include "kq/jets/field_bundle.hpp"

#include <stdexcept>

namespace kq {

FieldBundle::FieldBundle(std::vector<ScalarField> fields)
    : size_(fields.size()),
      expressions_(std::make_shared<const std::vector<ScalarField>>(std::move(fields))) {}

FieldBundle::FieldBundle(std::size_t size, Evaluator evaluator)
    : size_(size), evaluator_(std::move(evaluator)) {
  if (!evaluator_) throw std::invalid_argument("field bundle needs an evaluator");
}

const std::vector<ScalarField>& FieldBundle::expressions() const {
  if (!expressions_) throw std::logic_error("field bundle is not expression-backed");
  return *expressions_;
}

std::vector<Jet> FieldBundle::evaluate(std::span<const double> x, int order) const {
  if (expressions_) {
    FieldEvaluator ev(x, order);
    std::vector<Jet> out;
    out.reserve(size_);
    for (const auto& f : *expressions_) out.push_back(ev(f));
    return out;
  }
  if (!evaluator_) return {};
  auto out = evaluator_(x, order);
  if (out.size() != size_) throw std::logic_error("field bundle evaluator returned the wrong count");
  return out;
}

}  // namespace kq
