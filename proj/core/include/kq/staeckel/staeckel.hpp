#pragma once

#include <memory>
#include <span>
#include <vector>

#include "kq/geometry/metric.hpp"
#include "kq/observables/poly_observable.hpp"

namespace kq {

/// Staeckel system: a matrix B whose k-th column depends on x^k only, and
/// potentials f_k(x^k). With A = B^-1 (computed per point on jets) the
/// integrals are
///   I_l = sum_i A^i_l (xi_i^2 + f_i(x^i)),
/// the metric is g^{ii} = A^i_1 and H = I_1 / 2.
class StaeckelSystem {
 public:
  /// b[i][k] is row i, column k and may reference x^k only; f[k] likewise.
  /// Throws ConfigError for a column depending on a foreign coordinate and
  /// SingularError (naming the point) when B is singular at a probe point.
  static StaeckelSystem assemble(Chart chart, std::vector<std::vector<ScalarField>> b,
                                 std::vector<ScalarField> f, int probes = 8);

  int dim() const { return data_->chart.dim(); }
  const Chart& chart() const { return data_->chart; }
  const ScalarField& b(int i, int k) const { return data_->b[i][k]; }
  const ScalarField& f(int k) const { return data_->f[k]; }

  /// B and A = B^-1 at x as row-major n*n jets.
  std::vector<Jet> matrix(std::span<const double> x, int order) const;
  std::vector<Jet> inverse(std::span<const double> x, int order) const;

  /// Diagonal metric g_ii = 1 / A^i_1.
  MetricField metric() const;
  /// I_l for l = 0..n-1 (l = 0 is I_1).
  PolyObservable integral(int l) const;
  std::vector<PolyObservable> integrals() const;
  /// H = I_1 / 2.
  PolyObservable hamiltonian() const;
  /// Staeckel potential U_l = sum_i A^i_l f_i.
  Jet potential(int l, std::span<const double> x, int order) const;

  /// Rank of the Jacobian of (x, xi) -> (I_1..I_n), singular values below
  /// rel_threshold * largest are treated as zero.
  int integral_rank(std::span<const double> x, std::span<const double> xi, double rel_threshold = 1e-8) const;

 private:
  struct Data {
    Chart chart;
    std::vector<std::vector<ScalarField>> b;
    std::vector<ScalarField> f;
  };
  std::shared_ptr<const Data> data_;
};

/// Elementary symmetric functions of x: sigma[k] for k = 0..n and
/// sigma_excl[i][k] (x^i omitted) for k = 0..n-1.
struct SymmetricFunctions {
  std::vector<double> sigma;
  std::vector<std::vector<double>> sigma_excl;
};
SymmetricFunctions symmetric_functions(std::span<const double> x);
/// The same as expression trees over the chart coordinates.
std::vector<ScalarField> sigma_fields(int n, int excluded = -1);

enum class EmbeddingKind { kEllipsoid, kNeumann };

/// The ambient picture: a_0 < ... < a_n, the harmonic strength (ellipsoid),
/// and the maps x -> y(x), (x, xi) -> p(x, xi).
struct EmbeddedModel {
  EmbeddingKind kind = EmbeddingKind::kEllipsoid;
  std::vector<double> a;
  double harmonic = 0.0;

  int n() const { return static_cast<int>(a.size()) - 1; }
  /// y_alpha(x), taking the positive root in every ambient coordinate.
  std::vector<double> y(std::span<const double> x) const;
  std::vector<double> p(std::span<const double> x, std::span<const double> xi) const;
  /// g^i(x) = 1 / g_i(x) of the induced metric.
  std::vector<double> inverse_metric(std::span<const double> x) const;
  /// Generating function G_lambda(xi, x).
  double generating_function(double lambda, std::span<const double> x, std::span<const double> xi) const;
  /// Moser integrals F_alpha(p, y) of the ambient space.
  std::vector<double> ambient_integrals(std::span<const double> y, std::span<const double> p) const;
  /// Constraint residuals Z_1(y), Z_2(p, y).
  double z1(std::span<const double> y) const;
  double z2(std::span<const double> y, std::span<const double> p) const;
};

/// Ellipsoid or Neumann model: chart a_{i-1} < x^i < a_i, the closed-form
/// metric, the Staeckel system, the embedding and the closed-form integrals
/// I_i = sum_j g^j sigma^j_{i-1} xi_j^2 - c sigma_i (c = a or 1).
struct StaeckelModel {
  Chart chart;
  MetricField metric;
  StaeckelSystem system;
  EmbeddedModel embedded;
  std::vector<PolyObservable> closed_form_integrals;
  /// Reduced Hamiltonian (restriction of the ambient one).
  PolyObservable hamiltonian;
};

StaeckelModel jacobi_ellipsoid(std::vector<double> a, double harmonic);
StaeckelModel neumann(std::vector<double> a);

struct MoserRestriction {
  std::vector<double> ambient;      // F_alpha(p(x, xi), y(x))
  std::vector<double> closed_form;  // G_lambda based expressions
  double z1 = 0.0, z2 = 0.0;
};
MoserRestriction moser_restriction(const EmbeddedModel& model, std::span<const double> x,
                                   std::span<const double> xi);

}  // namespace kq
