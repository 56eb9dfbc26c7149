#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/geometry/chart.hpp"
#include "kq/geometry/metric.hpp"
#include "kq/geometry/tensor.hpp"
#include "kq/observables/brackets.hpp"
#include "kq/observables/poly_observable.hpp"
#include "kq/staeckel/staeckel.hpp"

namespace kq {

struct ExpectedVerdicts {
  bool classically_integrable = true;
  bool quantum_commuting = true;
  std::optional<bool> robertson;  // only meaningful for diagonal metrics
  std::optional<bool> ricci_flat;

  nlohmann::json to_json() const;
  /// Missing keys keep the values of `defaults`.
  static ExpectedVerdicts from_json(const nlohmann::json& j, const ExpectedVerdicts& defaults);
};

struct NamedObservable {
  std::string name;
  PolyObservable observable;
};

/// One construction-time check; residual and scale are maxima over the
/// probe points.
struct ValidationEntry {
  std::string check;
  double residual = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct KnsParameters {
  double m = 1.0;
  double gamma = 2.0;
  double e = 0.3;
  double g = 0.1;
  double nut = 0.05;
  double lambda = 0.01;
  double epsilon = 1.0;

  nlohmann::json to_json() const;
  static KnsParameters from_json(const nlohmann::json& j);
};

struct MultiCentreFields {
  ScalarField v;
  std::array<ScalarField, 3> a;
  int sign = 1;
};

enum class DiPirroVariant : std::uint8_t { kConstantC, kRotational };
std::string to_string(DiPirroVariant v);
DiPirroVariant dipirro_variant_from_string(const std::string& s);

struct DiPirroFields {
  ScalarField a, b, gamma, c;  // a, b, gamma of (x1, x2); c of x3
  DiPirroVariant variant = DiPirroVariant::kConstantC;
};

using ModelSource = std::variant<std::monostate, KnsParameters, MultiCentreFields, DiPirroFields, StaeckelModel>;

/// A metric with its declared observables and the verdicts expected of them.
/// Built only through the factories below, which run the construction-time
/// checks and throw ConfigError when one fails.
struct ModelInstance {
  std::string name;
  Chart chart;
  MetricField metric;
  std::optional<MaxwellField> maxwell;
  std::vector<NamedObservable> observables;
  ExpectedVerdicts expected;
  nlohmann::json parameters;
  std::vector<ValidationEntry> validation;
  ModelSource source;

  int dim() const { return chart.dim(); }
  /// Throws std::out_of_range for an unknown name.
  const PolyObservable& observable(std::string_view name) const;
  /// Index pairs (i, j), i < j, of the declared observables.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
};

inline constexpr int kValidationProbes = 8;

/// Kerr-Newman-de Sitter in coordinates (p, q, sigma, tau) with the charged
/// observables H~, P~ and the momenta S = xi_sigma, T = xi_tau. The shifted
/// forms xi_sigma - A_sigma, xi_tau - A_tau do not Poisson-commute with H~
/// (d_sigma A = 0 but i_{d_sigma} F = -dA_sigma != 0). The
/// chart block is the largest grid run with X(p) > 0, p-centred, and
/// Y(q) > 0, q > 0, shrunk by 10% at both ends.
ModelInstance kns(const KnsParameters& prm = {});

/// X(p), Y(q), rho^2 and the coframe K, L, M1, M2 as covariant components.
struct KnsStructure {
  ScalarField x, y, rho2;
  std::array<std::vector<ScalarField>, 4> frames;
};
KnsStructure kns_structure(const KnsParameters& prm);

/// The tensor P_ij rebuilt two ways at x: from the frames,
/// p^2 (K L + L K) + q^2 (M1 M1 + M2 M2), and as -Y_ik Y_lj g^kl with the
/// Killing-Yano form Y = p K^L - q M1^M2. Both are compared with the
/// declared P^ij lowered by the metric.
struct YanoCheck {
  double frames_vs_declared = 0.0;
  double yano_vs_declared = 0.0;
  double scale = 0.0;
};
YanoCheck kns_yano_check(const KnsParameters& prm, const MetricField& metric, const PolyObservable& p,
                         std::span<const double> x);

/// Multi-Centre metric (dt + A_a dy^a)^2 / V + V delta on (t, y1, y2, y3),
/// with H and K = xi_t plus optional user observables (Killing vectors or
/// tensors, residual-checked). Rejects data violating dV = sign * curl A
/// or Ricci-flatness at the probe points.
ModelInstance multicentre(Chart chart, const MultiCentreFields& fields, std::vector<NamedObservable> extra = {});

/// Di Pirro system with H, P and T = xi_3 (variant i) or
/// J = x2 xi_1 - x1 xi_2 (variant ii).
ModelInstance dipirro(Chart chart, const DiPirroFields& fields);

/// -3/16 c'/(gamma + c)^3 (a d_1 gamma d_1^d_3 + b d_2 gamma d_2^d_3), as an
/// antisymmetric (up, up) tensor of values.
Tensor dipirro_closed_form(const DiPirroFields& fields, std::span<const double> x);

/// Wraps an ellipsoid or Neumann model: observables H and I_1 .. I_n.
ModelInstance from_staeckel(std::string name, const StaeckelModel& model);

/// Raises ConfigError carrying the failed entries of a validation list.
void require_valid(const std::string& model, const std::vector<ValidationEntry>& entries);

}  // namespace kq
