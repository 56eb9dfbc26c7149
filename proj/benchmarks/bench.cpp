#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kq/flow/flow.hpp"
#include "kq/geometry/geometry_jet.hpp"
#include "kq/models/catalog.hpp"
#include "kq/opalg/diff_operator.hpp"
#include "kq/quantize/quantize.hpp"

using namespace kq;

namespace {

const Catalog& catalog() {
  static const Catalog c = Catalog::load(KQ_BENCH_CATALOG_DIR);
  return c;
}

std::vector<double> start_point(const ModelInstance& m) {
  std::mt19937_64 rng(7);
  return m.chart.sample(rng);
}

void BM_MetricComponents(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("kns");
  const auto x = start_point(m);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m.metric.components(x, order));
}
BENCHMARK(BM_MetricComponents)->DenseRange(2, 6, 2);

void BM_GeometryAt(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("kns");
  const auto x = start_point(m);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(geometry_at(m.metric, x, depth));
}
BENCHMARK(BM_GeometryAt)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_MinimalQuantize(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("kns");
  const auto x = start_point(m);
  const auto geo = geometry_at(m.metric, x, 4);
  const PolyJet p = m.observable("P").evaluate(x, 4);
  for (auto _ : state) benchmark::DoNotOptimize(minimal_quantize(p, geo));
}
BENCHMARK(BM_MinimalQuantize)->Unit(benchmark::kMicrosecond);

void BM_Commutator(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("kns");
  const auto x = start_point(m);
  const auto geo = geometry_at(m.metric, x, 4);
  const DiffOperator a = minimal_quantize(m.observable("H").evaluate(x, 4), geo).op;
  const DiffOperator b = minimal_quantize(m.observable("P").evaluate(x, 4), geo).op;
  for (auto _ : state) benchmark::DoNotOptimize(commutator(a, b));
}
BENCHMARK(BM_Commutator)->Unit(benchmark::kMicrosecond);

void BM_AnomalyReport(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("jacobi-ellipsoid", static_cast<int>(state.range(0)));
  const auto x = start_point(m);
  const std::vector<std::vector<double>> pts{x};
  for (auto _ : state)
    benchmark::DoNotOptimize(anomaly_report(m.metric, m.observable("I1"), m.observable("I2"), pts));
}
BENCHMARK(BM_AnomalyReport)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

void BM_FlowSteps(benchmark::State& state) {
  const ModelInstance m = catalog().instantiate("kns");
  const auto& f = catalog().entry("kns").document.at("flow");
  const auto x = f.at("x").get<std::vector<double>>(), xi = f.at("xi").get<std::vector<double>>();
  for (auto _ : state) benchmark::DoNotOptimize(integrate(m, "H", x, xi, 1e-3, 100));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_FlowSteps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
