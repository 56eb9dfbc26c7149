#pragma once

#include <optional>
#include <vector>

#include "kq/flow/flow.hpp"
#include "kq/models/models.hpp"
#include "run.hpp"

namespace kq::cli {

/// Seeded sample points of a model with matching momenta in [-1, 1]^n.
struct SamplePoints {
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> xi;
};
SamplePoints sample_points(const ModelInstance& model, std::uint64_t seed, int count);

SuiteReport classical_suite(const ModelInstance& model, const SamplePoints& pts, double tol);
SuiteReport robertson_suite(const ModelInstance& model, const SamplePoints& pts, double tol);
SuiteReport anomaly_suite(const ModelInstance& model, const SamplePoints& pts, double tol);
SuiteReport oracle_suite(const ModelInstance& model, const SamplePoints& pts, double tol);

struct FlowSettings {
  std::optional<FlowStart> start;  // seeded when absent
  std::uint64_t seed = 1;
  double step = 1e-3;
  int steps = 10000;
};
SuiteReport flow_suite(const ModelInstance& model, const FlowSettings& settings, double tol);

}  // namespace kq::cli
