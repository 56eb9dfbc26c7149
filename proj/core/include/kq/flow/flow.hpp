#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kq/models/models.hpp"

namespace kq {

struct FlowOptions {
  double fixed_point_tol = 1e-12;
  int max_iterations = 50;
  /// Step-doubling estimate; exceeding it stops the run.
  double local_error_tol = 1e-6;
  bool check_local_error = true;
};

struct FlowState {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> xi;
};

inline constexpr double kDriftFloor = 1e-8;

/// Implicit midpoint trajectory. drift[k][s] is
/// |I_k(state s) - I_k(state 0)| / max(|I_k(state 0)|, kDriftFloor) for the
/// k-th declared observable.
struct Trajectory {
  std::string model;
  std::string hamiltonian;
  std::string integrator = "implicit-midpoint";
  int order = 2;
  double step = 0.0;
  std::vector<FlowState> states;
  std::vector<std::string> observables;
  std::vector<double> initial_values;
  std::vector<std::vector<double>> drift;
  double max_local_error = 0.0;
  int max_fixed_point_iterations = 0;
  bool truncated = false;
  std::string truncation_reason;

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
  /// Largest drift of the named observable over the run.
  double max_drift(std::string_view name) const;
  double energy_drift() const { return max_drift(hamiltonian); }

  /// Header "t,<name>,..." then one row per state.
  void write_csv(std::ostream& out) const;
  nlohmann::json summary() const;
};

/// Hamiltonian vector field (dH/dxi, -dH/dx) at (x, xi).
void hamiltonian_vector_field(const PolyObservable& h, std::span<const double> x, std::span<const double> xi,
                              std::span<double> dx, std::span<double> dxi);

/// Integrates the flow of the named observable. A negative step runs
/// backwards. Throws ConfigError for an unknown observable or an initial
/// point outside the chart; leaving the chart later, a rejected step or a
/// stalled fixed-point iteration ends the run with `truncated` set.
Trajectory integrate(const ModelInstance& model, const std::string& hamiltonian, std::span<const double> x0,
                     std::span<const double> xi0, double step, int steps, const FlowOptions& options = {});

struct FlowStart {
  std::vector<double> x;
  std::vector<double> xi;
};

/// Independent trajectories on worker threads, in input order.
std::vector<Trajectory> integrate_many(const ModelInstance& model, const std::string& hamiltonian,
                                       const std::vector<FlowStart>& starts, double step, int steps,
                                       const FlowOptions& options = {});

}  // namespace kq
