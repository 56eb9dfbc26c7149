#include "kq/quantize/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kq/common/error.hpp"
#include "kq/common/parallel.hpp"
#include "kq/common/tolerance.hpp"
#include "kq/observables/brackets.hpp"

namespace kq {

std::string to_string(QuantizationRule r) {
  switch (r) {
    case QuantizationRule::kPrincipal2: return "A2 = -P2";
    case QuantizationRule::kDivergence2: return "A1 -= nabla_k P2^{jk}";
    case QuantizationRule::kLinear: return "A1 += i P1";
    case QuantizationRule::kScalar: return "A0 += P0";
    case QuantizationRule::kDivergence1: return "A0 += (i/2) nabla_j P1^j";
    case QuantizationRule::kCubicPrincipal: return "A3 = -i P3";
    case QuantizationRule::kCubicFirst: return "A2 -= (3i/2) nabla_j P3^{jkl}";
    case QuantizationRule::kCubicSecond: return "A1 -= (i/2) nabla_j nabla_k P3^{jkl}";
  }
  return "?";
}

namespace {

Jet zero_like(const GeometryJet& geo, int order) { return geo.zero(std::max(0, order)); }

ComplexSymTensor& word(CovariantOperator& op, int k, int n, int order) {
  if (!op.terms[k]) {
    const Jet z = Jet::constant(0.0, n, order);
    op.terms[k] = ComplexSymTensor{SymTensor(n, k, z), SymTensor(n, k, z)};
  }
  return *op.terms[k];
}

// Contracts the derivative slot of nabla S (slot 0) with the first tensor slot.
SymTensor divergence_sym(const Tensor& d, int degree, int n) {
  Tensor out(n, std::vector<Slot>(degree - 1, Slot::kUp), d[0] * 0.0);
  std::vector<int> idx(degree - 1), src(degree + 1);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    for (int j = 0; j < n; ++j) {
      src[0] = j;
      src[1] = j;
      std::copy(idx.begin(), idx.end(), src.begin() + 2);
      out[f] += d.at(src);
    }
  }
  return symmetrize(out);
}

Tensor second_covariant(const GeometryJet& geo, const SymTensor& s) {
  return covariant_derivative(geo, cov_deriv_sym(geo, s));
}

}  // namespace

QuantizationResult minimal_quantize(const PolyJet& p, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p.n != n) throw std::invalid_argument("observable and geometry dimensions differ");
  if (p.max_degree() > 3) throw DomainError("minimal quantization supports degree <= 3", p.max_degree());
  if (p.has(3) && geo.depth() < 2) throw DomainError("cubic quantization needs geometry depth >= 2", geo.depth());

  QuantizationResult r;
  r.covariant.n = n;
  const int order = p.order();
  auto& prov = r.provenance;

  if (p.has(0)) {
    word(r.covariant, 0, n, order).re += *p.deg[0];
    prov[0].push_back(QuantizationRule::kScalar);
  }
  if (p.has(1)) {
    const SymTensor& p1 = *p.deg[1];
    word(r.covariant, 1, n, order).im += p1;
    prov[1].push_back(QuantizationRule::kLinear);
    SymTensor div = divergence_sym(cov_deriv_sym(geo, p1), 1, n);
    div *= 0.5;
    word(r.covariant, 0, n, order).im += div;
    prov[0].push_back(QuantizationRule::kDivergence1);
  }
  if (p.has(2)) {
    const SymTensor& p2 = *p.deg[2];
    SymTensor a2 = p2;
    a2 *= -1.0;
    word(r.covariant, 2, n, order).re += a2;
    prov[2].push_back(QuantizationRule::kPrincipal2);
    SymTensor div = divergence_sym(cov_deriv_sym(geo, p2), 2, n);
    div *= -1.0;
    word(r.covariant, 1, n, order).re += div;
    prov[1].push_back(QuantizationRule::kDivergence2);
  }
  if (p.has(3)) {
    const SymTensor& p3 = *p.deg[3];
    SymTensor a3 = p3;
    a3 *= -1.0;
    word(r.covariant, 3, n, order).im += a3;
    prov[3].push_back(QuantizationRule::kCubicPrincipal);

    const Tensor d = cov_deriv_sym(geo, p3);
    SymTensor first = divergence_sym(d, 3, n);
    first *= -1.5;
    word(r.covariant, 2, n, order).im += first;
    prov[2].push_back(QuantizationRule::kCubicFirst);

    const Tensor dd = covariant_derivative(geo, d);  // [a, j, i1, i2, i3]
    Tensor second(n, {Slot::kUp}, dd[0] * 0.0);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) second.at({l}) += dd.at({j, k, j, k, l});
    SymTensor s = symmetrize(second);
    s *= -0.5;
    word(r.covariant, 1, n, order).im += s;
    prov[1].push_back(QuantizationRule::kCubicSecond);
  }
  if (r.covariant.order() < 0) word(r.covariant, 0, n, order);
  r.op = trivialize(r.covariant, geo);
  return r;
}

DiffOperator trivialize(const QuantizationResult& q, const GeometryJet& geo, Trivialization target) {
  return trivialize(q.covariant, geo, target);
}

Jet scalar_anomaly(const SymTensor& p1, const SymTensor& q2, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p1.degree() != 1 || q2.degree() != 2) throw std::invalid_argument("scalar_anomaly expects degrees 1 and 2");
  const Tensor dp = cov_deriv_sym(geo, p1);
  Jet div = dp[0] * 0.0;
  for (int j = 0; j < n; ++j) div += dp.at({j, j});
  Tensor v(n, {Slot::kUp}, zero_like(geo, div.order() - 1));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) v.at({j}) += q2.at({j, k}) * div.derivative(k);
  const Tensor dv = covariant_derivative(geo, v);
  Jet out = dv[0] * 0.0;
  for (int j = 0; j < n; ++j) out += dv.at({j, j});
  return out * 0.5;
}

namespace {

// P^{lj} nabla_l nabla_m Q^{km} + P^{lj} R^k_{m,nl} Q^{mn} with free (j, k).
Tensor anomaly_half(const SymTensor& p, const SymTensor& q, const Tensor& ddq, const GeometryJet& geo) {
  const int n = geo.dim();
  Tensor out(n, {Slot::kUp, Slot::kUp}, ddq[0] * 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Jet v = out.at({j, k});
      for (int l = 0; l < n; ++l) {
        const Jet& plj = p.at({l, j});
        Jet inner = v * 0.0;
        for (int m = 0; m < n; ++m) {
          inner += ddq.at({l, m, k, m});
          for (int nn = 0; nn < n; ++nn) inner += geo.riemann(k, m, nn, l) * q.at({m, nn});
        }
        v += plj * inner;
      }
      out.at({j, k}) = v;
    }
  return out;
}

}  // namespace

Tensor anomaly_tensor(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p2.degree() != 2 || q2.degree() != 2) throw std::invalid_argument("anomaly_tensor expects degree-2 tensors");
  if (geo.depth() < 2) throw DomainError("anomaly_tensor needs geometry depth >= 2", geo.depth());
  const Tensor dp = cov_deriv_sym(geo, p2);  // [l, i, j]
  const Tensor dq = cov_deriv_sym(geo, q2);
  const Tensor ddp = covariant_derivative(geo, dp);  // [a, b, i, j]
  const Tensor ddq = covariant_derivative(geo, dq);

  Tensor x = anomaly_half(p2, q2, ddq, geo);
  const Tensor y = anomaly_half(q2, p2, ddp, geo);
  for (std::size_t f = 0; f < x.size(); ++f) x[f] -= y[f];
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Jet v = x.at({j, k});
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          v -= dp.at({l, m, j}) * dq.at({m, k, l});
          v -= p2.at({l, j}) * geo.ricci(l, m) * q2.at({k, m});
        }
      x.at({j, k}) = v;
    }
  Tensor b(n, {Slot::kUp, Slot::kUp}, x[0] * 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) b.at({j, k}) = (x.at({j, k}) - x.at({k, j})) * 0.5;
  return b;
}

Tensor vector_anomaly(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo) {
  if (geo.depth() < 3) throw DomainError("vector_anomaly needs geometry depth >= 3", geo.depth());
  Tensor a = divergence_skew(geo, anomaly_tensor(p2, q2, geo));
  for (std::size_t f = 0; f < a.size(); ++f) a[f] *= -2.0 / 3.0;
  return a;
}

CarterAnomaly carter_anomaly(const SymTensor& p2, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p2.degree() != 2) throw std::invalid_argument("carter_anomaly expects a degree-2 tensor");
  CarterAnomaly out;
  const SymTensor res = killing_residual(p2, geo);
  out.killing_residual = res.max_abs_value();
  out.killing = is_negligible(out.killing_residual, p2.max_abs_value());

  const Tensor rmix = geo.ricci_mixed();  // R^k_l
  Tensor x(n, {Slot::kUp, Slot::kUp}, zero_like(geo, std::min(p2.order(), rmix.order())));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) x.at({j, k}) += p2.at({l, j}) * rmix.at({k, l});
  out.b = Tensor(n, {Slot::kUp, Slot::kUp}, x[0] * 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.b.at({j, k}) = (x.at({k, j}) - x.at({j, k})) * 0.5;
  return out;
}

Tensor staeckel_anomaly(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo) {
  const int n = geo.dim();
  Tensor x(n, {Slot::kUp, Slot::kUp},
           zero_like(geo, std::min({p2.order(), q2.order(), geo.ricci(0, 0).order()})));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) x.at({k, l}) += p2.at({s, k}) * geo.ricci(s, t) * q2.at({l, t});
  Tensor b(n, {Slot::kUp, Slot::kUp}, x[0] * 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) b.at({k, l}) = x.at({l, k}) - x.at({k, l});
  return b;
}

PolyJet commutator_symbol(const PolyJet& p, const PolyJet& q, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p.max_degree() > 2 || q.max_degree() > 2) throw DomainError("commutator_symbol supports degree <= 2", 3);
  PolyJet out = schouten_bracket(p, q, geo, BracketForm::kCoordinate);
  if (p.has(2) && q.has(2)) out.accumulate(1, symmetrize(vector_anomaly(*p.deg[2], *q.deg[2], geo)));
  auto scalar = [&](const SymTensor& a, const SymTensor& b, double sign) {
    SymTensor s(n, 0, Jet());
    s[0] = scalar_anomaly(a, b, geo) * sign;
    out.accumulate(0, s);
  };
  if (p.has(1) && q.has(2)) scalar(*p.deg[1], *q.deg[2], 1.0);
  if (q.has(1) && p.has(2)) scalar(*q.deg[1], *p.deg[2], -1.0);
  return out;
}

RobertsonVerdict robertson_check(const MetricField& metric, std::span<const std::vector<double>> points,
                                 double tol) {
  if (!metric.is_diagonal()) throw std::invalid_argument("robertson_check requires a diagonal metric");
  const int n = metric.dim();
  RobertsonVerdict v;
  v.samples = points.size();
  for (const auto& x : points) {
    const GeometryJet geo = geometry_at(metric, x, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        v.scale = std::max(v.scale, std::abs(geo.ricci(i, j).value()));
        if (i != j) v.max_off_diagonal = std::max(v.max_off_diagonal, std::abs(geo.ricci(i, j).value()));
      }
  }
  v.satisfied = v.max_off_diagonal <= tol * (1.0 + v.scale);
  return v;
}

Tensor lie_derivative_connection(const SymTensor& x, const GeometryJet& geo) {
  const int n = geo.dim();
  if (x.degree() != 1) throw std::invalid_argument("lie_derivative_connection expects a vector field");
  const Tensor dd = second_covariant(geo, x);  // [l, m, k] = nabla_l nabla_m X^k
  Tensor out(n, {Slot::kUp, Slot::kDown, Slot::kDown}, dd[0] * 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        Jet v = dd.at({l, m, k});
        for (int q = 0; q < n; ++q) v += geo.riemann(k, m, q, l) * x.at({q});
        out.at({k, l, m}) = v;
      }
  return out;
}

double EquivarianceDefect::max_abs_value() const {
  if (degree == 2) return std::abs(scalar.value());
  return z.max_abs_value();
}

EquivarianceDefect equivariance_defect(const SymTensor& x, const SymTensor& p, const GeometryJet& geo) {
  const int n = geo.dim();
  EquivarianceDefect out;
  out.degree = p.degree();
  if (p.degree() == 2) {
    out.scalar = scalar_anomaly(x, p, geo);
    return out;
  }
  if (p.degree() != 3) throw std::invalid_argument("equivariance_defect expects degree 2 or 3");
  if (geo.depth() < 3) throw DomainError("cubic equivariance defect needs geometry depth >= 3", geo.depth());

  const Tensor dx = cov_deriv_sym(geo, x);
  Jet div = dx[0] * 0.0;
  for (int j = 0; j < n; ++j) div += dx.at({j, j});
  const Tensor lg = lie_derivative_connection(x, geo);

  const int order = std::min({div.order() - 1, lg.order(), p.order()});
  Tensor t(n, {Slot::kUp, Slot::kUp}, zero_like(geo, order));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Jet v = t.at({j, k});
      for (int l = 0; l < n; ++l) {
        v += p.at({j, k, l}) * div.derivative(l) * 0.5;
        for (int m = 0; m < n; ++m)
          v -= (p.at({l, m, j}) * lg.at({k, l, m}) - p.at({l, m, k}) * lg.at({j, l, m})) * 0.5;
      }
      t.at({j, k}) = v;
    }
  const Tensor dt = covariant_derivative(geo, t);  // [a, j, k]
  Tensor grad(n, {Slot::kDown}, zero_like(geo, div.order() - 1));
  for (int l = 0; l < n; ++l) grad.at({l}) = div.derivative(l);
  const Tensor hess = covariant_derivative(geo, grad);  // [k, l]
  out.z = Tensor(n, {Slot::kUp}, dt[0] * 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      out.z.at({j}) += dt.at({k, j, k});
      for (int l = 0; l < n; ++l) out.z.at({j}) += p.at({j, k, l}) * hess.at({k, l}) * 0.5;
    }
  return out;
}

std::array<double, 4> conformal_betas(int n) {
  if (n <= 2) throw std::invalid_argument("conformal correction requires dimension > 2");
  const double d = n;
  return {-d / (4.0 * (d + 1.0)), -d / (4.0 * (d + 1.0) * (d + 2.0)), d * d / (4.0 * (d - 2.0) * (d + 1.0)),
          -d * d / (2.0 * (d * d - 4.0) * (d * d - 1.0))};
}

Jet conformal_extra(const SymTensor& p2, const GeometryJet& geo) {
  const int n = geo.dim();
  if (p2.degree() != 2) throw std::invalid_argument("conformal_extra expects a degree-2 tensor");
  const auto beta = conformal_betas(n);
  if (geo.depth() < 2) throw DomainError("conformal_extra needs geometry depth >= 2", geo.depth());
  const Tensor dd = second_covariant(geo, p2);  // [a, b, k, l]
  Jet t3 = dd[0] * 0.0, t4 = t3, t5 = t3, t6 = t3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      t3 += dd.at({i, j, i, j});
      t5 += geo.ricci(i, j) * p2.at({i, j});
      t6 += geo.g(i, j) * p2.at({i, j});
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t4 += geo.ginv(i, j) * geo.g(k, l) * dd.at({i, j, k, l});
    }
  t6 *= geo.scalar_curvature();
  return t3 * beta[0] + t4 * beta[1] + t5 * beta[2] + t6 * beta[3];
}

PairAnomaly pair_anomaly(const PolyJet& p, const PolyJet& q, const GeometryJet& geo) {
  PairAnomaly a;
  a.scale = std::max(p.max_abs_value(), q.max_abs_value());
  a.classical = schouten_bracket(p, q, geo, BracketForm::kCoordinate).max_abs_value();
  if (p.has(1) && q.has(2)) a.scalar = std::max(a.scalar, std::abs(scalar_anomaly(*p.deg[1], *q.deg[2], geo).value()));
  if (q.has(1) && p.has(2)) a.scalar = std::max(a.scalar, std::abs(scalar_anomaly(*q.deg[1], *p.deg[2], geo).value()));
  if (p.has(2) && q.has(2)) {
    a.tensor = anomaly_tensor(*p.deg[2], *q.deg[2], geo).max_abs_value();
    a.vector = vector_anomaly(*p.deg[2], *q.deg[2], geo).max_abs_value();
  }
  a.symbol = commutator_symbol(p, q, geo).max_abs_value();
  return a;
}

nlohmann::json AnomalyReport::to_json() const {
  return {{"pair", {p_name, q_name}},
          {"samples", samples},
          {"maxResiduals",
           {{"classical", max.classical},
            {"scalarA", max.scalar},
            {"tensorB", max.tensor},
            {"vectorA", max.vector},
            {"commutatorSymbol", max.symbol}}},
          {"scale", max.scale},
          {"verdict", quantum_commuting ? "quantum-commuting" : "not quantum-commuting"}};
}

AnomalyReport anomaly_report(const MetricField& metric, const PolyObservable& p, const PolyObservable& q,
                             std::span<const std::vector<double>> points, std::string p_name,
                             std::string q_name, double tol) {
  constexpr int kDepth = 3;
  AnomalyReport r;
  r.p_name = std::move(p_name);
  r.q_name = std::move(q_name);
  r.samples = points.size();
  const auto per_point = parallel_map(points.size(), [&](std::size_t i) {
    const GeometryJet geo = geometry_at(metric, points[i], kDepth);
    return pair_anomaly(p.evaluate(points[i], kDepth), q.evaluate(points[i], kDepth), geo);
  });
  r.quantum_commuting = true;
  for (const auto& a : per_point) {
    r.max.classical = std::max(r.max.classical, a.classical);
    r.max.scalar = std::max(r.max.scalar, a.scalar);
    r.max.tensor = std::max(r.max.tensor, a.tensor);
    r.max.vector = std::max(r.max.vector, a.vector);
    r.max.symbol = std::max(r.max.symbol, a.symbol);
    r.max.scale = std::max(r.max.scale, a.scale);
    if (!is_negligible(a.symbol, a.scale, tol)) r.quantum_commuting = false;
  }
  return r;
}

}  // namespace kq
