#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/jets/jet.hpp"

namespace kq {

/// Scalar function of the chart coordinates, held as an immutable expression
/// DAG over coordinates, constants, +, -, *, /, integer powers and sqrt.
/// Copies share nodes; evaluation is pure and deterministic.
class ScalarField {
 public:
  enum class Op { kConst, kVar, kAdd, kMul, kDiv, kPow, kSqrt, kNeg };

  struct Node {
    Op op;
    double value = 0.0;  // kConst
    int index = 0;       // kVar: coordinate index; kPow: exponent
    std::vector<std::shared_ptr<const Node>> args;
  };

  ScalarField() : ScalarField(constant(0.0)) {}
  ScalarField(double c) : ScalarField(constant(c)) {}  // NOLINT: implicit by intent

  static ScalarField constant(double c);
  static ScalarField variable(int index);

  Op op() const { return node_->op; }
  bool is_constant() const { return node_->op == Op::kConst; }
  bool is_zero() const { return is_constant() && node_->value == 0.0; }
  double constant_value() const { return node_->value; }
  const Node* node() const { return node_.get(); }

  /// Largest coordinate index referenced, or -1 for a constant expression.
  int max_variable() const;
  /// True when the expression references no coordinate other than `index`.
  bool depends_only_on(int index) const;

  Jet evaluate(std::span<const double> x, int order) const;
  double value(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static ScalarField from_json(const nlohmann::json& j);

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);
  friend ScalarField pow(const ScalarField& a, int exponent);
  friend ScalarField sqrt(const ScalarField& a);

  ScalarField& operator+=(const ScalarField& b) { return *this = *this + b; }
  ScalarField& operator-=(const ScalarField& b) { return *this = *this - b; }
  ScalarField& operator*=(const ScalarField& b) { return *this = *this * b; }

 private:
  explicit ScalarField(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ScalarField make(Op op, std::vector<std::shared_ptr<const Node>> args, int index = 0);

  std::shared_ptr<const Node> node_;
  friend class FieldEvaluator;
};

/// Evaluates many fields at one point, sharing common subexpressions.
class FieldEvaluator {
 public:
  FieldEvaluator(std::span<const double> x, int order);
  const Jet& operator()(const ScalarField& f);

 private:
  const Jet& eval(const ScalarField::Node* n);

  std::vector<double> x_;
  int order_;
  std::unordered_map<const ScalarField::Node*, Jet> memo_;
};

/// Sum of a list of fields (0 for an empty list).
ScalarField sum(std::span<const ScalarField> terms);
/// Product of a list of fields (1 for an empty list).
ScalarField product(std::span<const ScalarField> factors);

}  // namespace kq
