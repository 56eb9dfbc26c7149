#pragma once

#include <span>
#include <vector>

#include "kq/geometry/metric.hpp"
#include "kq/geometry/tensor.hpp"

namespace kq {

/// Levi-Civita geometry of a metric at one chart point, as jets.
///
/// With depth d the metric and its inverse carry jets of order d, the
/// Christoffel symbols order d-1 and the curvature order d-2, so the
/// curvature can be differentiated d-2 more times. Conventions:
///   Gamma^k_ij  = 1/2 g^km (d_i g_mj + d_j g_mi - d_m g_ij)
///   R^l_{i,jk}  = d_j Gamma^l_ik - d_k Gamma^l_ij + Gamma^l_jm Gamma^m_ik - Gamma^l_km Gamma^m_ij
///   R_ij        = R^k_{i,kj},   R = g^ij R_ij
class GeometryJet {
 public:
  static constexpr int kMaxDepth = kMaxJetOrder;

  int dim() const { return n_; }
  int depth() const { return depth_; }
  const std::vector<double>& point() const { return point_; }

  const Jet& g(int i, int j) const { return g_[i * n_ + j]; }
  const Jet& ginv(int i, int j) const { return ginv_[i * n_ + j]; }
  const Jet& gamma(int k, int i, int j) const { return gamma_[(k * n_ + i) * n_ + j]; }
  const Jet& riemann(int l, int i, int j, int k) const { return riemann_[((l * n_ + i) * n_ + j) * n_ + k]; }
  const Jet& ricci(int i, int j) const { return ricci_[i * n_ + j]; }
  const Jet& scalar_curvature() const { return scalar_; }
  /// Riemannian volume density sqrt|det g|.
  const Jet& volume() const { return mu_; }
  /// Half-density connection term 1/2 Gamma^k_jk.
  const Jet& half_density(int j) const { return half_[j]; }

  /// g_ij and g^ij as dense tensors.
  Tensor metric_tensor() const;
  Tensor inverse_metric_tensor() const;
  /// Mixed Ricci R^k_l = g^km R_ml.
  Tensor ricci_mixed() const;
  Tensor ricci_tensor() const;

  /// Scale of the metric components, used for tolerance policies.
  double metric_scale() const;

  /// A zero jet at the metric order.
  Jet zero(int order) const { return Jet::constant(0.0, n_, order); }

 private:
  friend GeometryJet geometry_at(const MetricField& metric, std::span<const double> x, int depth);

  int n_ = 0;
  int depth_ = 0;
  std::vector<double> point_;
  std::vector<Jet> g_, ginv_, gamma_, riemann_, ricci_, half_;
  Jet scalar_, mu_;
};

/// Geometry of the metric at x to the requested depth (0..kMaxDepth).
/// Throws DomainError outside the chart and SingularError when
/// |det g| <= 1e-12 * prod(row norms).
GeometryJet geometry_at(const MetricField& metric, std::span<const double> x, int depth);

/// Inverse and determinant of a square matrix of jets by Gauss-Jordan
/// elimination with partial pivoting on the value parts.
struct JetInverse {
  std::vector<Jet> inverse;
  Jet determinant;
};
JetInverse invert(const std::vector<Jet>& m, int n);

/// Covariant derivative of a tensor of any variance. The new (covariant)
/// derivative slot is placed first.
Tensor covariant_derivative(const GeometryJet& geo, const Tensor& t);

/// nabla_j S^{i1..ik} of a symmetric contravariant field of degree <= 3;
/// slot 0 is j.
Tensor cov_deriv_sym(const GeometryJet& geo, const SymTensor& s);

/// nabla_k B^{kl} for an antisymmetric contravariant 2-tensor.
Tensor divergence_skew(const GeometryJet& geo, const Tensor& b);

/// Index gymnastics on a single slot.
Tensor raise_slot(const GeometryJet& geo, const Tensor& t, int slot);
Tensor lower_slot(const GeometryJet& geo, const Tensor& t, int slot);

}  // namespace kq
