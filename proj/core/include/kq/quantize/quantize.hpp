#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/geometry/chart.hpp"
#include "kq/geometry/geometry_jet.hpp"
#include "kq/geometry/metric.hpp"
#include "kq/observables/poly_observable.hpp"
#include "kq/opalg/diff_operator.hpp"
#include "kq/opalg/trivialize.hpp"

namespace kq {

/// Which rule of the minimal quantization produced a nabla-word coefficient.
enum class QuantizationRule : std::uint8_t {
  kPrincipal2,     // A2 = -P2
  kDivergence2,    // A1 -= nabla_k P2^{jk}
  kLinear,         // A1 += i P1
  kScalar,         // A0 += P0
  kDivergence1,    // A0 += (i/2) nabla_j P1^j
  kCubicPrincipal, // A3 = -i P3
  kCubicFirst,     // A2 -= (3i/2) nabla_j P3^{jkl}
  kCubicSecond,    // A1 -= (i/2) nabla_j nabla_k P3^{jkl}
};
std::string to_string(QuantizationRule r);

struct QuantizationResult {
  /// P-hat as a combination of symmetric nabla-words.
  CovariantOperator covariant;
  /// The same operator acting on f, phi = f |vol_g|^{1/2}.
  DiffOperator op;
  /// Rules that contributed to each word degree 0..3.
  std::array<std::vector<QuantizationRule>, 4> provenance;
};

/// Minimal quantization of a momentum polynomial of degree <= 3:
///   P0 + P1 + P2 -> -nabla_j o P2^{jk} o nabla_k + (i/2)(P1^j nabla_j + nabla_j o P1^j) + P0
///   P3           -> -(i/2)(nabla_j o P3^{jkl} nabla_k nabla_l + nabla_j nabla_k o P3^{jkl} nabla_l)
/// Needs geometry depth >= 2 when a cubic part is present. Throws
/// DomainError for degree > 3.
QuantizationResult minimal_quantize(const PolyJet& p, const GeometryJet& geo);

DiffOperator trivialize(const QuantizationResult& q, const GeometryJet& geo,
                        Trivialization target = Trivialization::kMetricVolume);

/// 1/2 nabla_j (Q2^{jk} d_k (nabla_l P1^l)), the scalar quantum correction
/// of [P1-hat, Q2-hat].
Jet scalar_anomaly(const SymTensor& p1, const SymTensor& q2, const GeometryJet& geo);

/// Antisymmetric tensor
///   B^{jk} = P^{l[j} nabla_l nabla_m Q^{k]m} + P^{l[j} R^{k]}_{m,nl} Q^{mn} - (P <-> Q)
///            - nabla_l P^{m[j} nabla_m Q^{k]l} - P^{l[j} R_{lm} Q^{k]m},
/// with [jk] the antisymmetrization weighted by 1/2. Needs depth >= 2.
Tensor anomaly_tensor(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo);

/// A^l = -2/3 nabla_k B^{kl}. Needs depth >= 3.
Tensor vector_anomaly(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo);

/// Reduced tensor -P^{l[j} R^{k]}_l for the pair (P, H = g^{-1}/2) with P
/// Killing; the Killing residual of P is reported alongside.
struct CarterAnomaly {
  Tensor b;
  double killing_residual = 0.0;
  bool killing = true;
};
CarterAnomaly carter_anomaly(const SymTensor& p2, const GeometryJet& geo);

/// Closed form -2 P^{s[k} R_st Q^{l]t} valid for the integrals of a Staeckel
/// system.
Tensor staeckel_anomaly(const SymTensor& p2, const SymTensor& q2, const GeometryJet& geo);

/// Symbol of (1/i)[P-hat, Q-hat] for deg P, deg Q <= 2:
///   {P,Q} + A_{P2,Q2} + A_{P1,Q2} - A_{Q1,P2}
/// with A_{P2,Q2} = -2/3 (nabla_k B^{kl}) xi_l. Needs depth >= 3 and
/// observable jets of order >= 3.
PolyJet commutator_symbol(const PolyJet& p, const PolyJet& q, const GeometryJet& geo);

/// Robertson conditions: off-diagonal Ricci components of a diagonal metric.
struct RobertsonVerdict {
  bool satisfied = false;
  double max_off_diagonal = 0.0;
  double scale = 0.0;
  std::size_t samples = 0;
};
/// Throws std::invalid_argument for a metric not declared diagonal.
RobertsonVerdict robertson_check(const MetricField& metric, std::span<const std::vector<double>> points,
                                 double tol = 1e-9);

/// Lie derivative of the Levi-Civita connection along X,
/// L_X Gamma^k_lm = nabla_l nabla_m X^k + R^k_{m,nl} X^n, slots (k, l, m).
Tensor lie_derivative_connection(const SymTensor& x, const GeometryJet& geo);

/// [X-hat, P-hat] - i {X,P}-hat = i D. For deg P = 2, D is the
/// multiplication by 1/2 nabla_j (P^{jk} d_k div X); for deg P = 3 it is the
/// quantized vector field
///   Z^j = nabla_k [1/2 P^{jkl} nabla_l div X - P^{lm[j} L_X Gamma^{k]}_lm]
///         + 1/2 P^{jkl} nabla_k nabla_l div X.
struct EquivarianceDefect {
  int degree = 0;
  Jet scalar;  // degree 2
  Tensor z;    // degree 3
  double max_abs_value() const;
};
EquivarianceDefect equivariance_defect(const SymTensor& x, const SymTensor& p, const GeometryJet& geo);

/// Coefficients beta_3..beta_6 of the conformally equivariant correction.
/// Throws std::invalid_argument for n <= 2.
std::array<double, 4> conformal_betas(int n);
/// c_P = b3 nabla_i nabla_j P^{ij} + b4 g^{ij} g_kl nabla_i nabla_j P^{kl}
///       + b5 R_ij P^{ij} + b6 R g_ij P^{ij}.
Jet conformal_extra(const SymTensor& p2, const GeometryJet& geo);

/// Anomaly magnitudes of one observable pair at one point.
struct PairAnomaly {
  double classical = 0.0;  // max |{P,Q}| coefficient
  double scalar = 0.0;     // max(|A_{P1,Q2}|, |A_{Q1,P2}|)
  double tensor = 0.0;     // max |B_{P2,Q2}|
  double vector = 0.0;     // max |A_{P2,Q2}|
  double symbol = 0.0;     // max coefficient of the commutator symbol
  double scale = 0.0;      // input component scale
};
/// Needs depth >= 3 and observable jets of order >= 3.
PairAnomaly pair_anomaly(const PolyJet& p, const PolyJet& q, const GeometryJet& geo);

struct AnomalyReport {
  std::string p_name;
  std::string q_name;
  std::size_t samples = 0;
  PairAnomaly max;  // componentwise maxima over the samples
  bool quantum_commuting = false;
  nlohmann::json to_json() const;
};
/// Evaluates P, Q on the sample points and reduces by max. The verdict is
/// quantum-commuting iff the full commutator symbol is negligible, i.e.
/// <= tol * (1 + scale), at every point.
AnomalyReport anomaly_report(const MetricField& metric, const PolyObservable& p, const PolyObservable& q,
                             std::span<const std::vector<double>> points, std::string p_name = "P",
                             std::string q_name = "Q", double tol = 1e-9);

}  // namespace kq
