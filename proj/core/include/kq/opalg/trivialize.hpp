#pragma once

#include <array>
#include <optional>

#include "kq/geometry/geometry_jet.hpp"
#include "kq/geometry/tensor.hpp"
#include "kq/opalg/diff_operator.hpp"

namespace kq {

struct ComplexSymTensor {
  SymTensor re;
  SymTensor im;
};

/// Sum_k A_k^{i1..ik} nabla_i1 .. nabla_ik acting on half-densities with
/// nabla_j phi = d_j phi - 1/2 Gamma^k_jk phi, k <= 3. Coefficient tensors
/// are symmetric, so the order of the nablas within a word is immaterial.
struct CovariantOperator {
  static constexpr int kMaxOrder = 3;

  int n = 0;
  std::array<std::optional<ComplexSymTensor>, kMaxOrder + 1> terms;

  int order() const;
};

/// Expands nabla-words into partial derivatives. In the metric-volume
/// trivialization nabla_j acts on f as d_j, and higher words follow the
/// covariant Hessian recursion
///   D_jk  = d_j d_k - Gamma^m_jk d_m
///   D_jkl = d_j o D_kl - Gamma^m_jk D_ml - Gamma^m_jl D_km.
/// Requires geometry depth >= max(1, order - 1) (>= order for kCoordinate).
DiffOperator trivialize(const CovariantOperator& op, const GeometryJet& geo,
                        Trivialization target = Trivialization::kMetricVolume);

}  // namespace kq
