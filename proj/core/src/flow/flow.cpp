#include "kq/flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kq/common/error.hpp"
#include "kq/common/parallel.hpp"

namespace kq {

namespace {

using Vec = std::vector<double>;

double sup_norm(const Vec& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

class Integrator {
 public:
  Integrator(const ModelInstance& model, const PolyObservable& h, const FlowOptions& opt)
      : model_(model), h_(h), opt_(opt), n_(model.dim()) {}

  // Phase point z = (x, xi); returns false when z leaves the chart.
  bool field(const Vec& z, Vec& f) const {
    std::span<const double> x(z.data(), n_);
    if (!model_.chart.contains(x)) return false;
    try {
      hamiltonian_vector_field(h_, x, std::span<const double>(z.data() + n_, n_), std::span<double>(f.data(), n_),
                               std::span<double>(f.data() + n_, n_));
    } catch (const DomainError&) {
      return false;
    }
    for (double v : f)
      if (!std::isfinite(v)) return false;
    return true;
  }

  enum class Status { kOk, kLeft, kStalled };

  // z1 = z0 + h f((z0 + z1) / 2), solved by fixed-point iteration.
  Status step(const Vec& z0, double h, Vec& z1, int& iterations) const {
    const std::size_t m = z0.size();
    Vec f(m), mid(m), next(m);
    if (!field(z0, f)) return Status::kLeft;
    for (std::size_t i = 0; i < m; ++i) z1[i] = z0[i] + h * f[i];
    for (iterations = 1; iterations <= opt_.max_iterations; ++iterations) {
      for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (z0[i] + z1[i]);
      if (!field(mid, f)) return Status::kLeft;
      double change = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        next[i] = z0[i] + h * f[i];
        change = std::max(change, std::abs(next[i] - z1[i]));
      }
      z1.swap(next);
      if (change <= opt_.fixed_point_tol * (1.0 + sup_norm(z1))) return Status::kOk;
    }
    return Status::kStalled;
  }

 private:
  const ModelInstance& model_;
  const PolyObservable& h_;
  FlowOptions opt_;
  int n_;
};

}  // namespace

void hamiltonian_vector_field(const PolyObservable& h, std::span<const double> x, std::span<const double> xi,
                              std::span<double> dx, std::span<double> dxi) {
  const int n = h.dim();
  std::fill(dx.begin(), dx.end(), 0.0);
  std::fill(dxi.begin(), dxi.end(), 0.0);
  const PolyJet pj = h.evaluate(x, 1);
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!pj.has(k)) continue;
    const SymTensor& s = *pj.deg[k];
    const auto& ms = s.indices();
    for (std::size_t m = 0; m < s.size(); ++m) {
      const auto tuple = ms.tuple(m);
      const double mult = ms.multiplicity(m);
      double mono = mult;
      for (int i : tuple) mono *= xi[i];
      const auto grad = s[m].gradient();
      for (int j = 0; j < n; ++j) dxi[j] -= mono * grad[j];
      // d/dxi_i of the monomial: drop one factor at a time.
      const double c = mult * s[m].value();
      for (std::size_t drop = 0; drop < tuple.size(); ++drop) {
        double rest = c;
        for (std::size_t r = 0; r < tuple.size(); ++r)
          if (r != drop) rest *= xi[tuple[r]];
        dx[tuple[drop]] += rest;
      }
    }
  }
}

double Trajectory::max_drift(std::string_view name) const {
  for (std::size_t k = 0; k < observables.size(); ++k) {
    if (observables[k] != name) continue;
    double m = 0.0;
    for (double d : drift[k]) m = std::max(m, d);
    return m;
  }
  throw ConfigError("trajectory has no observable '" + std::string(name) + "'");
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  for (const auto& name : observables) out << ',' << name;
  out << '\n';
  out.precision(17);
  for (std::size_t s = 0; s < states.size(); ++s) {
    out << states[s].t;
    for (const auto& series : drift) out << ',' << series[s];
    out << '\n';
  }
}

nlohmann::json Trajectory::summary() const {
  nlohmann::json j;
  j["model"] = model;
  j["hamiltonian"] = hamiltonian;
  j["integrator"] = integrator;
  j["order"] = order;
  j["step"] = step;
  j["steps"] = steps();
  j["truncated"] = truncated;
  if (truncated) j["truncation_reason"] = truncation_reason;
  j["energy_drift"] = energy_drift();
  j["max_local_error"] = max_local_error;
  j["max_fixed_point_iterations"] = max_fixed_point_iterations;
  nlohmann::json d = nlohmann::json::object();
  for (std::size_t k = 0; k < observables.size(); ++k) {
    d[observables[k]] = {{"initial", initial_values[k]}, {"max_relative_drift", max_drift(observables[k])}};
  }
  j["observables"] = d;
  return j;
}

Trajectory integrate(const ModelInstance& model, const std::string& hamiltonian, std::span<const double> x0,
                     std::span<const double> xi0, double step, int steps, const FlowOptions& options) {
  const int n = model.dim();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(xi0.size()) != n)
    throw ConfigError("initial point has the wrong dimension");
  if (!(step != 0.0) || !std::isfinite(step)) throw ConfigError("flow step must be finite and non-zero");
  if (steps < 0) throw ConfigError("step count must be non-negative");
  if (!model.chart.contains(x0)) throw ConfigError("initial point lies outside the chart");

  const PolyObservable* h = nullptr;
  try {
    h = &model.observable(hamiltonian);
  } catch (const std::out_of_range&) {
    throw ConfigError("model '" + model.name + "' has no observable '" + hamiltonian + "'");
  }

  Trajectory tr;
  tr.model = model.name;
  tr.hamiltonian = hamiltonian;
  tr.step = step;
  for (const auto& o : model.observables) {
    tr.observables.push_back(o.name);
    tr.initial_values.push_back(o.observable.value(x0, xi0));
  }
  tr.drift.assign(tr.observables.size(), {});

  auto record = [&](double t, const Vec& z) {
    FlowState s{t, Vec(z.begin(), z.begin() + n), Vec(z.begin() + n, z.end())};
    for (std::size_t k = 0; k < model.observables.size(); ++k) {
      const double v = model.observables[k].observable.value(s.x, s.xi);
      const double i0 = tr.initial_values[k];
      tr.drift[k].push_back(std::abs(v - i0) / std::max(std::abs(i0), kDriftFloor));
    }
    tr.states.push_back(std::move(s));
  };

  Vec z(x0.begin(), x0.end());
  z.insert(z.end(), xi0.begin(), xi0.end());
  record(0.0, z);

  const Integrator integ(model, *h, options);
  Vec full(z.size()), half(z.size()), twice(z.size());
  auto stop = [&](std::string reason) {
    tr.truncated = true;
    tr.truncation_reason = std::move(reason);
  };
  for (int s = 1; s <= steps; ++s) {
    int iters = 0;
    auto status = integ.step(z, step, full, iters);
    tr.max_fixed_point_iterations = std::max(tr.max_fixed_point_iterations, iters);
    if (status == Integrator::Status::kOk && options.check_local_error) {
      int it2 = 0;
      status = integ.step(z, 0.5 * step, half, it2);
      if (status == Integrator::Status::kOk) status = integ.step(half, 0.5 * step, twice, it2);
      if (status == Integrator::Status::kOk) {
        double diff = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) diff = std::max(diff, std::abs(full[i] - twice[i]));
        // Second order: the two-half-step result is closer by a factor 4.
        const double err = diff / 3.0;
        tr.max_local_error = std::max(tr.max_local_error, err);
        if (err > options.local_error_tol) {
          stop("step rejected at t = " + std::to_string((s - 1) * step) + ": local error " + std::to_string(err));
          break;
        }
      }
    }
    if (status == Integrator::Status::kStalled) {
      stop("fixed-point iteration did not converge at t = " + std::to_string((s - 1) * step));
      break;
    }
    if (status == Integrator::Status::kLeft || !model.chart.contains(std::span<const double>(full.data(), n))) {
      stop("left the chart at t = " + std::to_string((s - 1) * step));
      break;
    }
    z.swap(full);
    record(s * step, z);
  }
  return tr;
}

std::vector<Trajectory> integrate_many(const ModelInstance& model, const std::string& hamiltonian,
                                       const std::vector<FlowStart>& starts, double step, int steps,
                                       const FlowOptions& options) {
  return parallel_map(starts.size(), [&](std::size_t i) {
    return integrate(model, hamiltonian, starts[i].x, starts[i].xi, step, steps, options);
  });
}

}  // namespace kq
