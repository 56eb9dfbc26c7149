#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kq/common/parallel.hpp"
#include "kq/common/tolerance.hpp"
#include "kq/geometry/geometry_jet.hpp"
#include "kq/opalg/diff_operator.hpp"
#include "kq/quantize/quantize.hpp"

namespace kq::cli {

namespace {

// FNV-1a, so each model draws its own stream from the run seed.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

SuiteReport base_report(const ModelInstance& model, Suite suite, double tol) {
  SuiteReport r;
  r.model = model.name;
  r.suite = suite;
  r.computed["tolerance"] = tol;
  return r;
}

std::string verdict_word(bool v, const char* yes, const char* no) { return v ? yes : no; }

// Declared pairs with both degrees <= 2; the others are listed in skipped.
std::vector<std::pair<std::size_t, std::size_t>> quadratic_pairs(const ModelInstance& m,
                                                                 nlohmann::json& skipped) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [i, j] : m.pairs()) {
    if (m.observables[i].observable.degree() <= 2 && m.observables[j].observable.degree() <= 2) {
      out.emplace_back(i, j);
    } else {
      skipped.push_back({m.observables[i].name, m.observables[j].name});
    }
  }
  return out;
}

}  // namespace

SamplePoints sample_points(const ModelInstance& model, std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed ^ name_hash(model.name));
  SamplePoints pts;
  pts.x = model.chart.sample(rng, count);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < count; ++s) {
    std::vector<double> xi(model.dim());
    for (auto& v : xi) v = u(rng);
    pts.xi.push_back(std::move(xi));
  }
  return pts;
}

SuiteReport classical_suite(const ModelInstance& model, const SamplePoints& pts, double tol) {
  SuiteReport r = base_report(model, Suite::kClassical, tol);
  r.claims["classicallyIntegrable"] = model.expected.classically_integrable;
  const int n = model.dim();
  nlohmann::json pairs = nlohmann::json::array();
  bool all = true;
  for (const auto& [i, j] : model.pairs()) {
    const auto& p = model.observables[i].observable;
    const auto& q = model.observables[j].observable;
    struct At {
      double residual, scale;
    };
    const auto per_point = parallel_map(pts.x.size(), [&](std::size_t s) {
      std::vector<double> dpx(n), dpxi(n), dqx(n), dqxi(n);
      hamiltonian_vector_field(p, pts.x[s], pts.xi[s], dpx, dpxi);
      hamiltonian_vector_field(q, pts.x[s], pts.xi[s], dqx, dqxi);
      double scale = 0.0;
      for (int k = 0; k < n; ++k) scale += std::abs(dpx[k] * dqxi[k]) + std::abs(dqx[k] * dpxi[k]);
      return At{poisson_bracket_numeric(p, q, model.chart, pts.x[s], pts.xi[s]), scale};
    });
    bool ok = true;
    double res = 0.0, scale = 0.0;
    for (const auto& a : per_point) {
      res = std::max(res, std::abs(a.residual));
      scale = std::max(scale, a.scale);
      ok = ok && is_negligible(a.residual, a.scale, tol);
    }
    all = all && ok;
    pairs.push_back({{"pair", {model.observables[i].name, model.observables[j].name}},
                     {"maxBracket", res},
                     {"scale", scale},
                     {"verdict", verdict_word(ok, "in involution", "not in involution")}});
  }
  r.computed["samples"] = pts.x.size();
  r.computed["pairs"] = pairs;
  r.computed["classicallyIntegrable"] = all;
  r.agreement["classicallyIntegrable"] = all == model.expected.classically_integrable;
  return r;
}

SuiteReport robertson_suite(const ModelInstance& model, const SamplePoints& pts, double tol) {
  SuiteReport r = base_report(model, Suite::kRobertson, tol);
  const int n = model.dim();
  r.claims["robertson"] = model.expected.robertson ? nlohmann::json(*model.expected.robertson) : nlohmann::json();
  r.claims["ricciFlat"] = model.expected.ricci_flat ? nlohmann::json(*model.expected.ricci_flat) : nlohmann::json();
  r.computed["samples"] = pts.x.size();

  if (model.metric.is_diagonal()) {
    const auto v = robertson_check(model.metric, pts.x, tol);
    r.computed["robertson"] = v.satisfied;
    r.computed["maxOffDiagonalRicci"] = v.max_off_diagonal;
    r.computed["ricciScale"] = v.scale;
    if (model.expected.robertson) r.agreement["robertson"] = v.satisfied == *model.expected.robertson;
  } else {
    r.computed["robertson"] = "not applicable: metric is not diagonal";
  }

  struct At {
    double ricci, riemann;
  };
  const auto per_point = parallel_map(pts.x.size(), [&](std::size_t s) {
    const auto geo = geometry_at(model.metric, pts.x[s], 2);
    At a{0.0, 0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        a.ricci = std::max(a.ricci, std::abs(geo.ricci(i, j).value()));
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) a.riemann = std::max(a.riemann, std::abs(geo.riemann(l, i, j, k).value()));
      }
    return a;
  });
  bool flat = true;
  double ricci = 0.0, riemann = 0.0;
  for (const auto& a : per_point) {
    flat = flat && is_negligible(a.ricci, a.riemann, tol);
    ricci = std::max(ricci, a.ricci);
    riemann = std::max(riemann, a.riemann);
  }
  r.computed["ricciFlat"] = flat;
  r.computed["maxRicci"] = ricci;
  r.computed["maxRiemann"] = riemann;
  if (model.expected.ricci_flat) r.agreement["ricciFlat"] = flat == *model.expected.ricci_flat;
  return r;
}

SuiteReport anomaly_suite(const ModelInstance& model, const SamplePoints& pts, double tol) {
  SuiteReport r = base_report(model, Suite::kAnomaly, tol);
  r.claims["quantumCommuting"] = model.expected.quantum_commuting;
  nlohmann::json skipped = nlohmann::json::array();
  nlohmann::json pairs = nlohmann::json::array();
  bool all = true;
  for (const auto& [i, j] : quadratic_pairs(model, skipped)) {
    const auto rep = anomaly_report(model.metric, model.observables[i].observable, model.observables[j].observable,
                                    pts.x, model.observables[i].name, model.observables[j].name, tol);
    all = all && rep.quantum_commuting;
    pairs.push_back(rep.to_json());
  }
  r.computed["samples"] = pts.x.size();
  r.computed["pairs"] = pairs;
  if (!skipped.empty()) r.computed["skippedPairs"] = skipped;
  r.computed["quantumCommuting"] = all;
  r.computed["verdict"] = verdict_word(all, "quantum-commuting", "not quantum-commuting");
  r.agreement["quantumCommuting"] = all == model.expected.quantum_commuting;
  return r;
}

SuiteReport oracle_suite(const ModelInstance& model, const SamplePoints& pts, double tol) {
  SuiteReport r = base_report(model, Suite::kOracle, tol);
  r.claims["commutatorIdentity"] = true;
  r.claims["quantumCommuting"] = model.expected.quantum_commuting;
  constexpr int kDepth = 4;
  nlohmann::json skipped = nlohmann::json::array();
  nlohmann::json pairs = nlohmann::json::array();
  bool identity = true, commuting = true;
  for (const auto& [i, j] : quadratic_pairs(model, skipped)) {
    const auto& p = model.observables[i].observable;
    const auto& q = model.observables[j].observable;
    struct At {
      double residual, scale, commutator, product;
    };
    const auto per_point = parallel_map(pts.x.size(), [&](std::size_t s) {
      const auto geo = geometry_at(model.metric, pts.x[s], kDepth);
      const PolyJet pj = p.evaluate(pts.x[s], kDepth), qj = q.evaluate(pts.x[s], kDepth);
      const DiffOperator a = minimal_quantize(pj, geo).op, b = minimal_quantize(qj, geo).op;
      const DiffOperator comm = commutator(a, b);
      const DiffOperator lhs = -comm.times_i();
      const DiffOperator rhs = minimal_quantize(commutator_symbol(pj, qj, geo), geo).op;
      return At{max_coefficient_difference(lhs, rhs), lhs.max_abs_value(), comm.max_abs_value(),
                compose(a, b).max_abs_value()};
    });
    bool id_ok = true, comm_ok = true;
    At worst{0.0, 0.0, 0.0, 0.0};
    for (const auto& a : per_point) {
      id_ok = id_ok && is_negligible(a.residual, a.scale, tol);
      comm_ok = comm_ok && is_negligible(a.commutator, a.product, tol);
      worst.residual = std::max(worst.residual, a.residual);
      worst.scale = std::max(worst.scale, a.scale);
      worst.commutator = std::max(worst.commutator, a.commutator);
      worst.product = std::max(worst.product, a.product);
    }
    identity = identity && id_ok;
    commuting = commuting && comm_ok;
    pairs.push_back({{"pair", {model.observables[i].name, model.observables[j].name}},
                     {"maxIdentityResidual", worst.residual},
                     {"commutatorScale", worst.scale},
                     {"maxCommutator", worst.commutator},
                     {"productScale", worst.product},
                     {"identityHolds", id_ok},
                     {"verdict", verdict_word(comm_ok, "quantum-commuting", "not quantum-commuting")}});
  }
  r.computed["samples"] = pts.x.size();
  r.computed["pairs"] = pairs;
  if (!skipped.empty()) r.computed["skippedPairs"] = skipped;
  r.computed["commutatorIdentity"] = identity;
  r.computed["quantumCommuting"] = commuting;
  r.agreement["commutatorIdentity"] = identity;
  r.agreement["quantumCommuting"] = commuting == model.expected.quantum_commuting;
  return r;
}

SuiteReport flow_suite(const ModelInstance& model, const FlowSettings& settings, double tol) {
  SuiteReport r = base_report(model, Suite::kFlow, tol);
  r.claims["firstIntegralsConserved"] = model.expected.classically_integrable;
  FlowStart start;
  if (settings.start) {
    start = *settings.start;
    r.computed["start"] = "catalog";
  } else {
    std::mt19937_64 rng(settings.seed ^ name_hash(model.name) ^ 0x9e3779b97f4a7c15ULL);
    start.x = model.chart.sample(rng);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    start.xi.resize(model.dim());
    for (auto& v : start.xi) v = u(rng);
    r.computed["start"] = "seeded";
  }
  r.computed["x0"] = start.x;
  r.computed["xi0"] = start.xi;
  const Trajectory tr = integrate(model, "H", start.x, start.xi, settings.step, settings.steps);
  r.computed["trajectory"] = tr.summary();
  double worst = 0.0;
  for (const auto& name : tr.observables) worst = std::max(worst, tr.max_drift(name));
  r.computed["maxRelativeDrift"] = worst;
  if (tr.truncated) {
    r.computed["firstIntegralsConserved"] = "inconclusive: trajectory truncated";
  } else {
    const bool ok = worst <= tol;
    r.computed["firstIntegralsConserved"] = ok;
    r.agreement["firstIntegralsConserved"] = ok == model.expected.classically_integrable;
  }
  std::ostringstream csv;
  tr.write_csv(csv);
  r.csv = csv.str();
  return r;
}

}  // namespace kq::cli
