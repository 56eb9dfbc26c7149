#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kq/jets/scalar_field.hpp"

namespace kqtest {

using kq::ScalarField;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline std::vector<double> random_point(int n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> x(n);
  for (auto& v : x) v = uniform(lo, hi);
  return x;
}

// Random expression over n coordinates; denominators and radicands are kept
// positive so the tree is defined everywhere.
inline ScalarField random_tree(int n, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  std::uniform_int_distribution<int> var(0, n - 1);
  switch (pick(rng())) {
    case 0: return ScalarField::constant(uniform(-2, 2));
    case 1: return ScalarField::variable(var(rng()));
    case 2: return random_tree(n, depth - 1) + random_tree(n, depth - 1);
    case 3: return random_tree(n, depth - 1) * random_tree(n, depth - 1);
    case 4: {
      auto d = 1.5 + pow(random_tree(n, depth - 1), 2);
      return random_tree(n, depth - 1) / d;
    }
    case 5: return pow(random_tree(n, depth - 1), 3) - random_tree(n, depth - 1);
    default: return sqrt(0.5 + pow(random_tree(n, depth - 1), 2));
  }
}

// Independent long-double interpreter of an expression tree, used as the
// finite-difference oracle's function.
inline long double eval_ld(const ScalarField::Node* nd, const std::vector<long double>& x) {
  using Op = ScalarField::Op;
  switch (nd->op) {
    case Op::kConst: return nd->value;
    case Op::kVar: return x[nd->index];
    case Op::kAdd: {
      long double s = 0;
      for (const auto& a : nd->args) s += eval_ld(a.get(), x);
      return s;
    }
    case Op::kMul: {
      long double p = 1;
      for (const auto& a : nd->args) p *= eval_ld(a.get(), x);
      return p;
    }
    case Op::kDiv: return eval_ld(nd->args[0].get(), x) / eval_ld(nd->args[1].get(), x);
    case Op::kPow: return std::pow(eval_ld(nd->args[0].get(), x), static_cast<long double>(nd->index));
    case Op::kSqrt: return std::sqrt(eval_ld(nd->args[0].get(), x));
    case Op::kNeg: return -eval_ld(nd->args[0].get(), x);
  }
  return 0;
}

// Nested central differences for d^alpha f, step h per differentiation.
inline long double fd_partial(const std::function<long double(const std::vector<long double>&)>& f,
                              std::vector<long double> x, std::vector<int> alpha, long double h) {
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    --alpha[i];
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (fd_partial(f, xp, alpha, h) - fd_partial(f, xm, alpha, h)) / (2 * h);
  }
  return f(x);
}

}  // namespace kqtest

namespace kqtest {

// One Richardson step on the nested central difference: O(h^4) truncation.
inline long double fd_partial_richardson(
    const std::function<long double(const std::vector<long double>&)>& f,
    const std::vector<long double>& x, const std::vector<int>& alpha, long double h) {
  return (4 * fd_partial(f, x, alpha, h) - fd_partial(f, x, alpha, 2 * h)) / 3;
}

}  // namespace kqtest

#include "kq/geometry/metric.hpp"
#include "kq/observables/poly_observable.hpp"

namespace kqtest {

inline kq::Chart box_chart(int n, double lo = -1.0, double hi = 1.0) {
  std::vector<std::string> labels;
  std::vector<kq::Interval> dom;
  for (int i = 0; i < n; ++i) {
    labels.push_back("x" + std::to_string(i + 1));
    dom.push_back({lo, hi});
  }
  return kq::Chart(labels, dom);
}

inline kq::MetricField flat_metric(int n) {
  return kq::MetricField::diagonal(box_chart(n), std::vector<ScalarField>(n, ScalarField(1.0)));
}

// delta + random polynomial perturbation small enough to stay positive on
// the box [-0.5, 0.5]^n.
inline kq::MetricField perturbed_metric(int n) {
  std::vector<std::vector<ScalarField>> g(n, std::vector<ScalarField>(n, ScalarField(0.0)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      ScalarField p = i == j ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) {
        auto xk = ScalarField::variable(k);
        p += uniform(-0.1, 0.1) * xk + uniform(-0.1, 0.1) * xk * ScalarField::variable((k + 1) % n) +
             uniform(-0.05, 0.05) * pow(xk, 3);
      }
      g[i][j] = g[j][i] = p;
    }
  }
  return kq::MetricField(box_chart(n, -0.5, 0.5), g);
}

// Polynomial observable with random low-order polynomial coefficients in
// every degree up to maxdeg.
inline kq::PolyObservable random_observable(int n, int maxdeg, int depth = 2) {
  kq::PolyObservable p(n);
  for (int k = 0; k <= maxdeg; ++k) {
    std::vector<ScalarField> f(kq::MultisetIndex::get(n, k).count());
    for (auto& v : f) v = random_tree(n, depth);
    p.set_component(k, std::move(f));
  }
  return p;
}

}  // namespace kqtest
