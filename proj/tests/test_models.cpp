#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "kq/common/error.hpp"
#include "kq/geometry/geometry_jet.hpp"
#include "kq/models/catalog.hpp"
#include "kq/models/models.hpp"
#include "kq/observables/brackets.hpp"
#include "kq/quantize/quantize.hpp"
#include "support.hpp"

using namespace kq;

namespace {

using SF = ScalarField;
SF var(int i) { return SF::variable(i); }

Catalog source_catalog() { return Catalog::load(KQ_TEST_CATALOG_DIR); }

// g^ij (d_i A_j - Gamma^k_ij A_k) from the Christoffel symbols.
double divergence_via_christoffel(const GeometryJet& geo, const Tensor& a) {
  double d = 0.0;
  for (int i = 0; i < geo.dim(); ++i)
    for (int j = 0; j < geo.dim(); ++j) {
      double cov = a.at({j}).derivative(i).value();
      for (int k = 0; k < geo.dim(); ++k) cov -= geo.gamma(k, i, j).value() * a.at({k}).value();
      d += geo.ginv(i, j).value() * cov;
    }
  return d;
}

std::vector<double> random_momentum(int n) { return kqtest::random_point(n, -1.0, 1.0); }

const ValidationEntry& validation(const ModelInstance& m, const std::string& check) {
  for (const auto& e : m.validation)
    if (e.check == check) return e;
  FAIL("missing validation entry " << check);
  return m.validation.front();
}

}  // namespace

TEST_CASE("Kerr-Newman-de Sitter") {
  const KnsParameters prm;
  const ModelInstance m = kns(prm);
  REQUIRE(m.observables.size() == 4);
  for (const auto& e : m.validation) {
    INFO(e.check);
    CHECK(e.passed);
  }
  auto& gen = kqtest::rng();
  const auto points = m.chart.sample(gen, 50);

  SUBCASE("divergence-free potential") {
    for (const auto& x : points) {
      const auto geo = geometry_at(m.metric, x, 1);
      const auto a = m.maxwell->evaluate(x, 1);
      CHECK(std::abs(divergence_via_christoffel(geo, a.A)) <= 1e-10 * (1 + a.A.max_abs_value()));
    }
  }
  SUBCASE("canonical brackets of the four integrals at random momenta") {
    for (const auto& x : points) {
      const auto xi = random_momentum(4);
      for (auto [i, j] : m.pairs()) {
        const double b = poisson_bracket_numeric(m.observables[i].observable, m.observables[j].observable, m.chart, x, xi);
        INFO(m.observables[i].name << ", " << m.observables[j].name);
        CHECK(std::abs(b) <= 1e-9 * (1 + m.observables[i].observable.value(x, xi)));
      }
    }
  }
  SUBCASE("shifted momenta xi - A of the cyclic coordinates are not conserved") {
    const PolyObservable shifted = tilde_shift(PolyObservable::momentum(4, 2), *m.maxwell);
    double worst = 0.0;
    for (const auto& x : points)
      worst = std::max(worst, std::abs(poisson_bracket_numeric(shifted, m.observable("H"), m.chart, x, random_momentum(4))));
    CHECK(worst > 1e-3);
  }
  SUBCASE("Killing-Maxwell tensor and its Killing-Yano square") {
    const PolyObservable& pt = m.observable("P");
    for (const auto& x : points) {
      const auto geo = geometry_at(m.metric, x, 1);
      const PolyJet pj = pt.evaluate(x, 1);
      const auto f = m.maxwell->evaluate(x, 2);
      const auto [kill, compat] = killing_maxwell_residual(*pj.deg[2], f.F, geo);
      CHECK(kill.max_abs_value() <= 1e-9 * (1 + pj.max_abs_value()));
      CHECK(compat.max_abs_value() <= 1e-9 * (1 + pj.max_abs_value()));
      PolyObservable p2(4);
      p2.set_component(2, pt.component(2));
      const YanoCheck y = kns_yano_check(prm, m.metric, p2, x);
      CHECK(y.frames_vs_declared <= 1e-10 * (1 + y.scale));
      CHECK(y.yano_vs_declared <= 1e-10 * (1 + y.scale));
      CHECK(y.scale > 1e-3);
    }
  }
  SUBCASE("quantum anomalies vanish") {
    for (std::size_t k = 0; k < 10; ++k) {
      const auto& x = points[k];
      const auto geo = geometry_at(m.metric, x, 3);
      const PolyJet p = m.observable("P").evaluate(x, 3);
      const auto carter = carter_anomaly(*p.deg[2], geo);
      CHECK(carter.killing);
      CHECK(carter.b.max_abs_value() <= 1e-9 * (1 + p.max_abs_value()));
      // nabla_j (P^jk A_k) = 0, with P1 = -2 P A.
      const SymTensor p1 = *p.deg[1];
      const Tensor dp1 = cov_deriv_sym(geo, p1);
      double div = 0.0;
      for (int j = 0; j < 4; ++j) div += dp1.at({j, j}).value();
      CHECK(std::abs(div) <= 1e-9 * (1 + p.max_abs_value()));
      for (auto [i, j] : m.pairs()) {
        const PairAnomaly a = pair_anomaly(m.observables[i].observable.evaluate(x, 3),
                                           m.observables[j].observable.evaluate(x, 3), geo);
        INFO(m.observables[i].name << ", " << m.observables[j].name);
        CHECK(a.classical <= 1e-9 * (1 + a.scale));
        CHECK(a.scalar <= 1e-9 * (1 + a.scale));
        CHECK(a.tensor <= 1e-9 * (1 + a.scale));
        CHECK(a.vector <= 1e-9 * (1 + a.scale));
      }
    }
  }
  SUBCASE("chart block") {
    const auto block = m.parameters.at("block");
    const KnsStructure s = kns_structure(prm);
    for (const auto& x : points) {
      CHECK(s.x.value(x) > 0.0);
      CHECK(s.y.value(x) > 0.0);
    }
    CHECK(block.at("q")[0].get<double>() > 0.0);
    KnsParameters bad = prm;
    bad.gamma = -10.0;
    CHECK_THROWS_AS(kns(bad), ConfigError);
  }
}

TEST_CASE("Multi-Centre") {
  SUBCASE("V = 1, A = 0 is flat") {
    Chart chart({"t", "y1", "y2", "y3"}, std::vector<Interval>(4, Interval{-1.0, 1.0}));
    const auto m = multicentre(chart, {1.0, {0.0, 0.0, 0.0}, 1});
    auto& gen = kqtest::rng();
    for (const auto& x : m.chart.sample(gen, 5)) {
      const auto geo = geometry_at(m.metric, x, 2);
      for (int l = 0; l < 4; ++l)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(geo.riemann(l, i, j, k).value() == 0.0);
    }
  }
  SUBCASE("Taub-NUT catalog entry") {
    const auto m = source_catalog().instantiate("multicentre");
    CHECK(validation(m, "ricci-flat").passed);
    CHECK(validation(m, "dV = sign * curl A").passed);
    CHECK(validation(m, "killing").passed);
    CHECK(m.observables.size() == 3);
    auto& gen = kqtest::rng();
    const auto pl = m.observable("L") * m.observable("L") + m.observable("K") * m.observable("L");
    for (const auto& x : m.chart.sample(gen, 10)) {
      const auto geo = geometry_at(m.metric, x, 3);
      CHECK(geo.ricci_tensor().max_abs_value() <= 1e-9 * (1 + geo.metric_scale()));
      const PolyJet p = pl.evaluate(x, 2);
      const auto carter = carter_anomaly(*p.deg[2], geo);
      CHECK(carter.killing);
      CHECK(carter.b.max_abs_value() <= 1e-9 * (1 + p.max_abs_value()));
    }
  }
  SUBCASE("rejected data") {
    const Catalog cat = source_catalog();
    const auto& doc = cat.entry("multicentre").document;
    auto flipped = doc;
    flipped["parameters"]["sign"] = -1;
    CHECK_THROWS_AS(instantiate(flipped), ConfigError);
    auto scaled = doc;
    scaled["parameters"]["V"] = {{"op", "mul"}, {"args", nlohmann::json::array({{{"const", 2.0}}, doc["parameters"]["V"]})}};
    CHECK_THROWS_AS(instantiate(scaled), ConfigError);
    auto not_killing = doc;
    not_killing["observables"]["L"]["components"]["1"][0]["expr"] = {{"var", 1}};
    CHECK_THROWS_AS(instantiate(not_killing), ConfigError);
  }
}

TEST_CASE("Di Pirro") {
  Chart cube({"x1", "x2", "x3"}, {{0.2, 1.5}, {0.2, 1.5}, {0.5, 1.5}});
  auto& gen = kqtest::rng();
  SUBCASE("variant i: involution and quantum commutation") {
    const auto m = source_catalog().instantiate("dipirro-i");
    for (const auto& x : m.chart.sample(gen, 20)) {
      const auto xi = random_momentum(3);
      for (auto [i, j] : m.pairs()) {
        const double b = poisson_bracket_numeric(m.observables[i].observable, m.observables[j].observable, m.chart, x, xi);
        CHECK(std::abs(b) <= 1e-9);
      }
      const auto geo = geometry_at(m.metric, x, 3);
      const PolyJet p = m.observable("P").evaluate(x, 3), h = m.observable("H").evaluate(x, 3);
      CHECK(anomaly_tensor(*p.deg[2], *h.deg[2], geo).max_abs_value() <= 1e-9);
      CHECK(vector_anomaly(*p.deg[2], *h.deg[2], geo).max_abs_value() <= 1e-9);
    }
  }
  SUBCASE("variant ii: anomaly matches the closed form and is nonzero") {
    const DiPirroFields f{1.0, 1.0, var(0) * var(0) + var(1) * var(1), var(2), DiPirroVariant::kRotational};
    const auto m = dipirro(cube, f);
    CHECK_FALSE(m.expected.quantum_commuting);
    auto pts = m.chart.sample(gen, 20);
    pts.push_back({1.0, 1.0, 1.0});
    for (const auto& x : pts) {
      const auto geo = geometry_at(m.metric, x, 2);
      const PolyJet p = m.observable("P").evaluate(x, 2), h = m.observable("H").evaluate(x, 2);
      const Tensor b = anomaly_tensor(*p.deg[2], *h.deg[2], geo);
      const Tensor c = dipirro_closed_form(f, x);
      double diff = 0.0;
      for (std::size_t k = 0; k < b.size(); ++k) diff = std::max(diff, std::abs(b[k].value() - 2.0 * c[k].value()));
      CHECK(diff <= 1e-9);
      CHECK(c.max_abs_value() > 1e-4);
    }
  }
  SUBCASE("constant gamma and c: no anomaly") {
    const DiPirroFields f{1.0 + 0.1 * var(0) * var(1), 2.0 - 0.1 * var(0), 0.7, 0.4, DiPirroVariant::kConstantC};
    const auto m = dipirro(cube, f);
    for (const auto& x : m.chart.sample(gen, 5)) {
      const auto geo = geometry_at(m.metric, x, 2);
      const PolyJet p = m.observable("P").evaluate(x, 2), h = m.observable("H").evaluate(x, 2);
      CHECK(anomaly_tensor(*p.deg[2], *h.deg[2], geo).max_abs_value() <= 1e-12);
      CHECK(dipirro_closed_form(f, x).max_abs_value() == 0.0);
    }
  }
  SUBCASE("structural errors") {
    CHECK_THROWS_AS(dipirro(cube, {1.0, 1.0, 0.5, var(2), DiPirroVariant::kConstantC}), ConfigError);
    CHECK_THROWS_AS(dipirro(cube, {1.0, 2.0, var(0) * var(0), var(2), DiPirroVariant::kRotational}), ConfigError);
    CHECK_THROWS_AS(dipirro(cube, {1.0, 1.0, var(0), var(2), DiPirroVariant::kRotational}), ConfigError);
    CHECK_THROWS_AS(dipirro(cube, {1.0, 1.0, var(2), 0.5, DiPirroVariant::kConstantC}), ConfigError);
    CHECK_THROWS(dipirro(cube, {1.0, 1.0, -5.0, 0.5, DiPirroVariant::kConstantC}));
  }
}

TEST_CASE("catalog") {
  const Catalog cat = source_catalog();
  const std::vector<std::string> want{"dipirro-i",  "dipirro-ii",  "jacobi-ellipsoid", "jacobi-ellipsoid-geodesic",
                                        "kns",        "multicentre", "neumann"};
  CHECK(cat.names() == want);
  for (const auto& name : want) {
    INFO(name);
    const auto m = cat.instantiate(name);
    CHECK(m.name == name);
    for (const auto& e : m.validation) CHECK(e.passed);
  }
  CHECK(cat.instantiate("neumann", 3).dim() == 3);
  CHECK(cat.instantiate("jacobi-ellipsoid", 3).observables.size() == 4);  // H, I1, I2, I3
  CHECK(cat.instantiate("jacobi-ellipsoid").expected.robertson == true);
  CHECK_THROWS_AS(cat.instantiate("kns", 3), ConfigError);
  CHECK_THROWS_AS(cat.instantiate("no-such-model"), UnknownModelError);
  CHECK_THROWS_AS(Catalog::load("/nonexistent/catalog"), IoError);

  const auto dir = std::filesystem::temp_directory_path() / "kq_catalog_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "broken.json") << "{\"name\": \"broken\", \"kind\": ";
  }
  CHECK_THROWS_AS(Catalog::load(dir), ConfigError);
  {
    std::ofstream(dir / "broken.json") << R"({"name": "odd", "kind": "dipirro", "parameters": {"variant": "iii"}})";
  }
  CHECK_THROWS_AS(Catalog::load(dir).instantiate("odd"), ConfigError);
  ::setenv("KQ_CATALOG_DIR", dir.c_str(), 1);
  CHECK(default_catalog_dir() == dir);
  ::unsetenv("KQ_CATALOG_DIR");
  std::filesystem::remove_all(dir);
}
