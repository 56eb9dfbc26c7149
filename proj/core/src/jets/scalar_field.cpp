#include "kq/jets/scalar_field.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "kq/common/error.hpp"

namespace kq {

using NodePtr = std::shared_ptr<const ScalarField::Node>;

ScalarField ScalarField::constant(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = c;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::variable(int index) {
  if (index < 0 || index >= kMaxJetDim) {
    throw std::out_of_range("variable index " + std::to_string(index) + " out of range");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->index = index;
  return ScalarField(std::move(n));
}

ScalarField ScalarField::make(Op op, std::vector<NodePtr> args, int index) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->index = index;
  n->args = std::move(args);
  return ScalarField(std::move(n));
}

namespace {

void collect_variables(const ScalarField::Node* n, std::unordered_set<const ScalarField::Node*>& seen,
                       const std::function<void(int)>& visit) {
  if (!seen.insert(n).second) return;
  if (n->op == ScalarField::Op::kVar) visit(n->index);
  for (const auto& a : n->args) collect_variables(a.get(), seen, visit);
}

}  // namespace

int ScalarField::max_variable() const {
  int m = -1;
  std::unordered_set<const Node*> seen;
  collect_variables(node_.get(), seen, [&](int i) { m = std::max(m, i); });
  return m;
}

bool ScalarField::depends_only_on(int index) const {
  bool ok = true;
  std::unordered_set<const Node*> seen;
  collect_variables(node_.get(), seen, [&](int i) { ok = ok && i == index; });
  return ok;
}

// Light constant folding keeps generated trees (Stäckel sums, frame products)
// small; it never changes the value of a well-defined expression.
ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.constant_value() + b.constant_value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return ScalarField::make(ScalarField::Op::kAdd, {a.node_, b.node_});
}

ScalarField operator-(const ScalarField& a) {
  if (a.is_constant()) return ScalarField::constant(-a.constant_value());
  if (a.op() == ScalarField::Op::kNeg) return ScalarField(a.node_->args[0]);
  return ScalarField::make(ScalarField::Op::kNeg, {a.node_});
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  if (b.is_zero()) return a;
  return a + (-b);
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.constant_value() * b.constant_value());
  if (a.is_zero() || b.is_zero()) return ScalarField::constant(0.0);
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  if (a.is_constant() && a.constant_value() == -1.0) return -b;
  if (b.is_constant() && b.constant_value() == -1.0) return -a;
  return ScalarField::make(ScalarField::Op::kMul, {a.node_, b.node_});
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  if (b.is_zero()) throw DomainError("division by the zero field", 0.0);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.constant_value() / b.constant_value());
  if (a.is_zero()) return a;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  return ScalarField::make(ScalarField::Op::kDiv, {a.node_, b.node_});
}

ScalarField pow(const ScalarField& a, int exponent) {
  if (exponent == 0) return ScalarField::constant(1.0);
  if (exponent == 1) return a;
  if (a.is_constant()) return ScalarField::constant(std::pow(a.constant_value(), exponent));
  return ScalarField::make(ScalarField::Op::kPow, {a.node_}, exponent);
}

ScalarField sqrt(const ScalarField& a) {
  if (a.is_constant() && a.constant_value() > 0.0) return ScalarField::constant(std::sqrt(a.constant_value()));
  return ScalarField::make(ScalarField::Op::kSqrt, {a.node_});
}

ScalarField sum(std::span<const ScalarField> terms) {
  ScalarField s = 0.0;
  for (const auto& t : terms) s += t;
  return s;
}

ScalarField product(std::span<const ScalarField> factors) {
  ScalarField p = 1.0;
  for (const auto& f : factors) p *= f;
  return p;
}

FieldEvaluator::FieldEvaluator(std::span<const double> x, int order)
    : x_(x.begin(), x.end()), order_(order) {
  if (x_.empty() || static_cast<int>(x_.size()) > kMaxJetDim) {
    throw std::invalid_argument("evaluation point dimension out of range");
  }
}

const Jet& FieldEvaluator::operator()(const ScalarField& f) { return eval(f.node()); }

const Jet& FieldEvaluator::eval(const ScalarField::Node* n) {
  if (auto it = memo_.find(n); it != memo_.end()) return it->second;
  using Op = ScalarField::Op;
  const int dim = static_cast<int>(x_.size());
  Jet r;
  switch (n->op) {
    case Op::kConst:
      r = Jet::constant(n->value, dim, order_);
      break;
    case Op::kVar:
      if (n->index >= dim) {
        throw std::out_of_range("field references coordinate " + std::to_string(n->index) +
                                " on a " + std::to_string(dim) + "-dimensional chart");
      }
      r = Jet::variable(n->index, x_[n->index], dim, order_);
      break;
    case Op::kAdd:
      r = eval(n->args[0].get());
      for (std::size_t k = 1; k < n->args.size(); ++k) r += eval(n->args[k].get());
      break;
    case Op::kMul:
      r = eval(n->args[0].get());
      for (std::size_t k = 1; k < n->args.size(); ++k) r *= eval(n->args[k].get());
      break;
    case Op::kDiv:
      r = eval(n->args[0].get()) / eval(n->args[1].get());
      break;
    case Op::kPow:
      r = pow(eval(n->args[0].get()), n->index);
      break;
    case Op::kSqrt:
      r = sqrt(eval(n->args[0].get()));
      break;
    case Op::kNeg:
      r = -eval(n->args[0].get());
      break;
  }
  return memo_.emplace(n, std::move(r)).first->second;
}

Jet ScalarField::evaluate(std::span<const double> x, int order) const {
  FieldEvaluator ev(x, order);
  return ev(*this);
}

double ScalarField::value(std::span<const double> x) const { return evaluate(x, 0).value(); }

namespace {

nlohmann::json node_to_json(const ScalarField::Node* n) {
  using Op = ScalarField::Op;
  auto args = [&] {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : n->args) a.push_back(node_to_json(c.get()));
    return a;
  };
  switch (n->op) {
    case Op::kConst: return {{"const", n->value}};
    case Op::kVar: return {{"var", n->index}};
    case Op::kAdd: return {{"op", "add"}, {"args", args()}};
    case Op::kMul: return {{"op", "mul"}, {"args", args()}};
    case Op::kDiv: return {{"op", "div"}, {"args", args()}};
    case Op::kSqrt: return {{"op", "sqrt"}, {"args", args()}};
    case Op::kNeg: return {{"op", "neg"}, {"args", args()}};
    case Op::kPow: {
      auto a = args();
      a.push_back({{"const", n->index}});
      return {{"op", "pow"}, {"args", a}};
    }
  }
  return nullptr;
}

[[noreturn]] void malformed(const std::string& what, const nlohmann::json& j) {
  throw ConfigError("malformed field expression (" + what + "): " + j.dump());
}

}  // namespace

nlohmann::json ScalarField::to_json() const { return node_to_json(node_.get()); }

ScalarField ScalarField::from_json(const nlohmann::json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (!j.is_object()) malformed("expected an object", j);
  if (j.contains("const")) {
    if (!j["const"].is_number()) malformed("const must be a number", j);
    return constant(j["const"].get<double>());
  }
  if (j.contains("var")) {
    if (!j["var"].is_number_integer()) malformed("var must be an integer", j);
    const int i = j["var"].get<int>();
    if (i < 0 || i >= kMaxJetDim) malformed("var index out of range", j);
    return variable(i);
  }
  if (!j.contains("op") || !j["op"].is_string()) malformed("missing op", j);
  if (!j.contains("args") || !j["args"].is_array() || j["args"].empty()) malformed("missing args", j);
  const std::string op = j["op"].get<std::string>();
  const auto& a = j["args"];
  auto arity = [&](std::size_t n) {
    if (a.size() != n) malformed(op + " takes " + std::to_string(n) + " argument(s)", j);
  };
  if (op == "add") {
    ScalarField s = from_json(a[0]);
    for (std::size_t k = 1; k < a.size(); ++k) s = s + from_json(a[k]);
    return s;
  }
  if (op == "mul") {
    ScalarField p = from_json(a[0]);
    for (std::size_t k = 1; k < a.size(); ++k) p = p * from_json(a[k]);
    return p;
  }
  if (op == "div") {
    arity(2);
    return from_json(a[0]) / from_json(a[1]);
  }
  if (op == "pow") {
    arity(2);
    const auto& e = a[1].is_object() && a[1].contains("const") ? a[1]["const"] : a[1];
    if (!e.is_number()) malformed("pow exponent must be a constant", j);
    const double ed = e.get<double>();
    if (ed != std::floor(ed) || std::abs(ed) > 64) malformed("pow exponent must be a small integer", j);
    return pow(from_json(a[0]), static_cast<int>(ed));
  }
  if (op == "sqrt") {
    arity(1);
    return sqrt(from_json(a[0]));
  }
  if (op == "neg") {
    arity(1);
    return -from_json(a[0]);
  }
  malformed("unknown op '" + op + "'", j);
}

}  // namespace kq
