#include <cmath>
#include <vector>

#include "doctest.h"
#include "kq/common/error.hpp"
#include "kq/observables/brackets.hpp"
#include "kq/quantize/quantize.hpp"
#include "kq/staeckel/staeckel.hpp"
#include "support.hpp"

using namespace kq;
using kqtest::uniform;

namespace {

DiffOperator mul(const Jet& j) { return DiffOperator::multiplication(j); }
DiffOperator d(int n, int i) { return DiffOperator::partial(n, i, kMaxJetOrder); }

PolyJet homogeneous(const SymTensor& s) {
  PolyJet p;
  p.n = s.n();
  p.deg[s.degree()] = s;
  return p;
}

SymTensor inverse_metric_sym(const GeometryJet& geo) {
  const int n = geo.dim();
  SymTensor s(n, 2, geo.ginv(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.at({i, j}) = geo.ginv(i, j);
  return s;
}

// The quantization written in divergence form, built from elementary
// operators: mu^{-1} d_j o mu V^j is the divergence of a vector density and
// nabla_j nabla_k T^{jk} = mu^{-1} d_j d_k (mu T^{jk}) + mu^{-1} d_j (mu Gamma^j_km T^{km}).
DiffOperator divergence_form(const PolyJet& p, const GeometryJet& geo) {
  const int n = geo.dim();
  const Jet mu = geo.volume();
  const Jet muinv = mu.reciprocal();
  DiffOperator out(n, 0, kMaxJetOrder);
  if (p.has(0)) out += mul((*p.deg[0])[0]);
  if (p.has(1)) {
    const auto& p1 = *p.deg[1];
    for (int j = 0; j < n; ++j) {
      DiffOperator sym = compose(mul(p1.at({j})), d(n, j)) +
                         compose(mul(muinv), compose(d(n, j), mul(mu * p1.at({j}))));
      out += (0.5 * sym).times_i();
    }
  }
  if (p.has(2)) {
    const auto& p2 = *p.deg[2];
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out -= compose(mul(muinv), compose(d(n, j), compose(mul(mu * p2.at({j, k})), d(n, k))));
  }
  if (p.has(3)) {
    const auto& p3 = *p.deg[3];
    DiffOperator cubic(n, 3, kMaxJetOrder);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          // nabla_j o P^{jkl} nabla_k nabla_l
          DiffOperator hess = compose(d(n, k), d(n, l));
          for (int m = 0; m < n; ++m) hess -= compose(mul(geo.gamma(m, k, l)), d(n, m));
          cubic += compose(mul(muinv), compose(d(n, j), compose(mul(mu * p3.at({j, k, l})), hess)));
          // nabla_j nabla_k o P^{jkl} nabla_l
          cubic += compose(mul(muinv), compose(compose(d(n, j), d(n, k)), compose(mul(mu * p3.at({j, k, l})), d(n, l))));
          for (int m = 0; m < n; ++m)
            cubic += compose(mul(muinv),
                             compose(d(n, j), compose(mul(mu * geo.gamma(j, k, m) * p3.at({k, m, l})), d(n, l))));
        }
    out += (-0.5 * cubic).times_i();
  }
  return out;
}

DiffOperator over_i(const DiffOperator& a) { return -a.times_i(); }

double rel(double diff, double scale) { return diff / (1.0 + scale); }

std::vector<double> params(int n) {
  std::vector<double> a;
  for (int k = 0; k <= n; ++k) a.push_back(0.7 + 1.3 * k + 0.2 * k * k);
  return a;
}

}  // namespace

TEST_CASE("minimal quantization: elementary cases") {
  SUBCASE("constant") {
    const auto geo = geometry_at(kqtest::perturbed_metric(2), std::vector<double>{0.1, 0.2}, 2);
    SymTensor one(2, 0, Jet::constant(1.0, 2, 3));
    auto q = minimal_quantize(homogeneous(one), geo);
    CHECK(q.op.effective_order(1e-15) == 0);
    CHECK(q.op[0].re.value() == 1.0);
    CHECK(q.op[0].im.value() == 0.0);
    REQUIRE(q.provenance[0].size() == 1);
    CHECK(q.provenance[0][0] == QuantizationRule::kScalar);
  }
  SUBCASE("divergence-free vector field") {
    const auto geo = geometry_at(kqtest::flat_metric(2), std::vector<double>{0.3, -0.4}, 3);
    SymTensor x(2, 1, Jet::constant(0.0, 2, 3));
    x.at({0}) = -Jet::variable(1, -0.4, 2, 3);
    x.at({1}) = Jet::variable(0, 0.3, 2, 3);
    auto q = minimal_quantize(homogeneous(x), geo);
    CHECK(q.op[0].max_abs_value() <= 1e-15);
    CHECK(q.op.symmetric_component(std::vector<int>{0}).im.value() == doctest::Approx(0.4));
    CHECK(q.op.symmetric_component(std::vector<int>{1}).im.value() == doctest::Approx(0.3));
    CHECK(q.op.symmetric_component(std::vector<int>{0}).re.value() == 0.0);
  }
  SUBCASE("twice the Hamiltonian gives the half-density Laplacian") {
    const auto metric = kqtest::perturbed_metric(3);
    auto& gen = kqtest::rng();
    for (const auto& x : metric.chart().sample(gen, 5)) {
      const auto geo = geometry_at(metric, x, 3);
      auto q = minimal_quantize(homogeneous(inverse_metric_sym(geo)), geo);
      const Jet mu = geo.volume();
      DiffOperator lap(3, 2, kMaxJetOrder);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          lap -= compose(mul(mu.reciprocal()), compose(d(3, j), compose(mul(mu * geo.ginv(j, k)), d(3, k))));
      CHECK(rel(max_coefficient_difference(q.op, lap), lap.max_abs_value()) <= 1e-12);
    }
  }
  SUBCASE("degree overflow") {
    const auto geo = geometry_at(kqtest::flat_metric(2), std::vector<double>{0.0, 0.0}, 3);
    CHECK_THROWS_AS(minimal_quantize(homogeneous(SymTensor(2, 4, Jet::constant(1.0, 2, 3))), geo), DomainError);
  }
}

TEST_CASE("minimal quantization against the divergence form, and formal symmetry") {
  for (int n : {2, 3}) {
    const auto metric = kqtest::perturbed_metric(n);
    auto& gen = kqtest::rng();
    for (int trial = 0; trial < 4; ++trial) {
      const auto obs = kqtest::random_observable(n, 3);
      const auto x = metric.chart().sample(gen);
      const auto geo = geometry_at(metric, x, 6);
      const PolyJet p = obs.evaluate(x, 6);
      const auto q = minimal_quantize(p, geo);
      const DiffOperator oracle = divergence_form(p, geo);
      const double scale = oracle.max_abs_value();
      CHECK(rel(max_coefficient_difference(q.op, oracle), scale) <= 1e-10);
      CHECK(rel(max_coefficient_difference(formal_adjoint(q.op, geo), q.op), scale) <= 1e-10);
      CHECK(q.provenance[3].size() == 1);
      CHECK(q.provenance[1].size() == 3);
    }
  }
}

TEST_CASE("commutator symbol reproduces the operator commutator") {
  for (int n : {2, 3}) {
    const auto metric = kqtest::perturbed_metric(n);
    auto& gen = kqtest::rng();
    for (int trial = 0; trial < 4; ++trial) {
      const auto pobs = kqtest::random_observable(n, 2);
      const auto qobs = kqtest::random_observable(n, 2);
      const auto x = metric.chart().sample(gen);
      const auto geo = geometry_at(metric, x, 4);
      const PolyJet p = pobs.evaluate(x, 4), q = qobs.evaluate(x, 4);
      const DiffOperator lhs = over_i(commutator(minimal_quantize(p, geo).op, minimal_quantize(q, geo).op));
      const DiffOperator rhs = minimal_quantize(commutator_symbol(p, q, geo), geo).op;
      CHECK(rel(max_coefficient_difference(lhs, rhs), lhs.max_abs_value()) <= 1e-8);
      // Without the anomalies the identity fails on a curved metric.
      const DiffOperator naive = minimal_quantize(schouten_bracket(p, q, geo), geo).op;
      CHECK(rel(max_coefficient_difference(lhs, naive), lhs.max_abs_value()) > 1e-6);
    }
  }
  SUBCASE("degree <= 1 pairs need no correction") {
    const auto metric = kqtest::perturbed_metric(2);
    const std::vector<double> x{0.1, -0.1};
    const auto geo = geometry_at(metric, x, 4);
    const PolyJet p = kqtest::random_observable(2, 1).evaluate(x, 4);
    const PolyJet q = kqtest::random_observable(2, 1).evaluate(x, 4);
    const auto sym = commutator_symbol(p, q, geo);
    const auto bracket = schouten_bracket(p, q, geo, BracketForm::kCoordinate);
    PolyJet diff = sym;
    diff -= bracket;
    CHECK(diff.max_abs_value() == 0.0);
    const DiffOperator lhs = over_i(commutator(minimal_quantize(p, geo).op, minimal_quantize(q, geo).op));
    CHECK(rel(max_coefficient_difference(lhs, minimal_quantize(bracket, geo).op), lhs.max_abs_value()) <= 1e-10);
  }
}

TEST_CASE("scalar anomaly") {
  const auto geo = geometry_at(kqtest::flat_metric(2), std::vector<double>{0.4, -0.3}, 4);
  SymTensor delta(2, 2, Jet::constant(0.0, 2, 4));
  delta.at({0, 0}) += 1.0;
  delta.at({1, 1}) += 1.0;
  SymTensor p1(2, 1, Jet::constant(0.0, 2, 4));
  p1.at({0}) = Jet::variable(0, 0.4, 2, 4);
  CHECK(scalar_anomaly(p1, delta, geo).value() == doctest::Approx(0.0));
  p1.at({0}) = pow(Jet::variable(0, 0.4, 2, 4), 3) / 6.0;
  CHECK(scalar_anomaly(p1, delta, geo).value() == doctest::Approx(0.5));

  // Killing vectors of the round metric give no correction.
  const auto neu = neumann(params(2));
  auto& gen = kqtest::rng();
  const auto x = neu.chart.sample(gen);
  const auto g2 = geometry_at(neu.metric, x, 3);
  SymTensor q = inverse_metric_sym(g2);
  SymTensor zero_div(2, 1, Jet::constant(0.0, 2, 3));
  // A vector field with vanishing divergence: X^j = mu^{-1} eps^{jk} d_k f.
  const Jet f = Jet::variable(0, x[0], 2, 4) * Jet::variable(1, x[1], 2, 4);
  const Jet muinv = g2.volume().reciprocal();
  zero_div.at({0}) = muinv * f.derivative(1);
  zero_div.at({1}) = -(muinv * f.derivative(0));
  CHECK(std::abs(scalar_anomaly(zero_div, q, g2).value()) <= 1e-12);
}

TEST_CASE("anomaly tensor structure") {
  const auto metric = kqtest::perturbed_metric(3);
  auto& gen = kqtest::rng();
  for (int trial = 0; trial < 3; ++trial) {
    const auto x = metric.chart().sample(gen);
    const auto geo = geometry_at(metric, x, 3);
    const PolyJet p = kqtest::random_observable(3, 2).evaluate(x, 3);
    const PolyJet q = kqtest::random_observable(3, 2).evaluate(x, 3);
    const Tensor bpq = anomaly_tensor(*p.deg[2], *q.deg[2], geo);
    const Tensor bqp = anomaly_tensor(*q.deg[2], *p.deg[2], geo);
    const Tensor bpp = anomaly_tensor(*p.deg[2], *p.deg[2], geo);
    const double scale = bpq.max_abs_value();
    CHECK(scale > 1e-6);
    CHECK(bpp.max_abs_value() <= 1e-12 * (1.0 + scale));
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(bpq.at({j, k}).value() + bqp.at({j, k}).value()) <= 1e-12 * (1.0 + scale));
        CHECK(std::abs(bpq.at({j, k}).value() + bpq.at({k, j}).value()) <= 1e-14 * (1.0 + scale));
      }
    // The vector anomaly is divergence-free.
    const auto g4 = geometry_at(metric, x, 5);
    const PolyJet p4 = kqtest::random_observable(3, 2).evaluate(x, 5);
    const PolyJet q4 = kqtest::random_observable(3, 2).evaluate(x, 5);
    const Tensor a = vector_anomaly(*p4.deg[2], *q4.deg[2], g4);
    const Tensor da = covariant_derivative(g4, a);
    double div = 0.0;
    for (int j = 0; j < 3; ++j) div += da.at({j, j}).value();
    CHECK(std::abs(div) <= 1e-9 * (1.0 + a.max_abs_value()));
  }
  SUBCASE("flat chart with constant tensors") {
    const auto geo = geometry_at(kqtest::flat_metric(3), std::vector<double>{0.1, 0.2, 0.3}, 3);
    SymTensor p(3, 2, Jet::constant(0.0, 3, 3)), q = p;
    for (std::size_t m = 0; m < p.size(); ++m) {
      p[m] += uniform(-1, 1);
      q[m] += uniform(-1, 1);
    }
    CHECK(anomaly_tensor(p, q, geo).max_abs_value() == 0.0);
    CHECK(vector_anomaly(p, q, geo).max_abs_value() == 0.0);
  }
}

TEST_CASE("Staeckel systems: closed-form anomaly, Carter reduction, quantum integrability") {
  std::vector<StaeckelModel> models{jacobi_ellipsoid(params(2), 0.0), jacobi_ellipsoid(params(3), 1.0),
                                    neumann(params(2)), neumann(params(3))};
  auto& gen = kqtest::rng();
  for (const auto& m : models) {
    const int n = m.chart.dim();
    for (const auto& x : m.chart.sample(gen, 10)) {
      const auto geo = geometry_at(m.metric, x, 3);
      std::vector<PolyJet> ints;
      for (const auto& i : m.closed_form_integrals) ints.push_back(i.evaluate(x, 3));
      SymTensor half_ginv = inverse_metric_sym(geo);
      half_ginv *= 0.5;
      for (int i = 0; i < n; ++i) {
        const SymTensor& pi = *ints[i].deg[2];
        const auto carter = carter_anomaly(pi, geo);
        CHECK(carter.killing);
        const Tensor general = anomaly_tensor(pi, half_ginv, geo);
        for (std::size_t f = 0; f < general.size(); ++f)
          CHECK(std::abs(general[f].value() - carter.b[f].value()) <= 1e-9 * (1.0 + general.max_abs_value()));
        for (int j = 0; j < n; ++j) {
          const SymTensor& pj = *ints[j].deg[2];
          const Tensor b = anomaly_tensor(pi, pj, geo);
          const Tensor closed = staeckel_anomaly(pi, pj, geo);
          for (std::size_t f = 0; f < b.size(); ++f)
            CHECK(std::abs(b[f].value() - closed[f].value()) <= 1e-9 * (1.0 + b.max_abs_value()));
          CHECK(vector_anomaly(pi, pj, geo).max_abs_value() <= 1e-9 * (1.0 + b.max_abs_value()));
        }
      }
    }
  }
}

TEST_CASE("carter_anomaly flags non-Killing input") {
  const auto metric = kqtest::perturbed_metric(3);
  const std::vector<double> x{0.1, 0.1, 0.1};
  const auto geo = geometry_at(metric, x, 3);
  const PolyJet p = kqtest::random_observable(3, 2).evaluate(x, 3);
  const auto c = carter_anomaly(*p.deg[2], geo);
  CHECK_FALSE(c.killing);
  CHECK(c.killing_residual > 1e-6);
}

TEST_CASE("potential terms produce no anomaly") {
  auto& gen = kqtest::rng();
  const auto free = jacobi_ellipsoid(params(3), 0.0);
  const auto harmonic = jacobi_ellipsoid(params(3), 1.0);
  const auto points = free.chart.sample(gen, 10);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto r0 = anomaly_report(free.metric, free.closed_form_integrals[i], free.closed_form_integrals[j], points);
      const auto r1 =
          anomaly_report(harmonic.metric, harmonic.closed_form_integrals[i], harmonic.closed_form_integrals[j], points);
      CHECK(r0.quantum_commuting);
      CHECK(r1.quantum_commuting);
      CHECK(r0.max.tensor == doctest::Approx(r1.max.tensor).epsilon(1e-12));
      CHECK(r0.max.vector <= 1e-9 * (1.0 + r0.max.scale));
      CHECK(r1.max.vector <= 1e-9 * (1.0 + r1.max.scale));
      CHECK(r1.max.scalar == 0.0);
    }
}

TEST_CASE("robertson_check") {
  auto& gen = kqtest::rng();
  for (int n : {2, 3}) {
    const auto ell = jacobi_ellipsoid(params(n), 0.0);
    CHECK(robertson_check(ell.metric, ell.chart.sample(gen, 20)).satisfied);
    const auto neu = neumann(params(n));
    CHECK(robertson_check(neu.metric, neu.chart.sample(gen, 20)).satisfied);
  }
  const auto x1 = ScalarField::variable(0), x2 = ScalarField::variable(1), x3 = ScalarField::variable(2);
  const auto bad = MetricField::diagonal(kqtest::box_chart(3, -0.5, 0.5),
                                         {1.0 + x1 * x2, 1.0 + 0.3 * x3 * x3, 1.0 + x1 * x3});
  const auto v = robertson_check(bad, bad.chart().sample(gen, 10));
  CHECK_FALSE(v.satisfied);
  CHECK(v.max_off_diagonal > 1e-3);
  CHECK_THROWS_AS(robertson_check(kqtest::perturbed_metric(2), bad.chart().sample(gen, 1)), std::invalid_argument);
}

TEST_CASE("Lie derivative of the connection matches the coordinate formula") {
  const auto metric = kqtest::perturbed_metric(3);
  auto& gen = kqtest::rng();
  for (int trial = 0; trial < 4; ++trial) {
    const auto x = metric.chart().sample(gen);
    const auto geo = geometry_at(metric, x, 4);
    const PolyJet xv = kqtest::random_observable(3, 1).evaluate(x, 4);
    const SymTensor& X = *xv.deg[1];
    const Tensor lg = lie_derivative_connection(X, geo);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          double want = X.at({k}).derivative(l).derivative(m).value();
          for (int p = 0; p < 3; ++p) {
            want += X.at({p}).value() * geo.gamma(k, l, m).derivative(p).value();
            want -= geo.gamma(p, l, m).value() * X.at({k}).derivative(p).value();
            want += geo.gamma(k, p, m).value() * X.at({p}).derivative(l).value();
            want += geo.gamma(k, l, p).value() * X.at({p}).derivative(m).value();
          }
          CHECK(lg.at({k, l, m}).value() == doctest::Approx(want).epsilon(1e-10));
        }
  }
}

TEST_CASE("equivariance defect") {
  SUBCASE("operator-level identity on a curved metric") {
    const auto metric = kqtest::perturbed_metric(3);
    auto& gen = kqtest::rng();
    for (int deg : {2, 3}) {
      for (int trial = 0; trial < 2; ++trial) {
        const auto x = metric.chart().sample(gen);
        const auto geo = geometry_at(metric, x, 5);
        const PolyJet xv = kqtest::random_observable(3, 1).evaluate(x, 5);
        PolyJet X;
        X.n = 3;
        X.deg[1] = *xv.deg[1];
        const PolyJet p = homogeneous(*kqtest::random_observable(3, deg).evaluate(x, 5).deg[deg]);
        const DiffOperator lhs = over_i(commutator(minimal_quantize(X, geo).op, minimal_quantize(p, geo).op)) -
                                 minimal_quantize(schouten_bracket(X, p, geo), geo).op;
        const auto defect = equivariance_defect(*X.deg[1], *p.deg[deg], geo);
        DiffOperator rhs;
        if (deg == 2) {
          rhs = mul(defect.scalar);
        } else {
          rhs = minimal_quantize(homogeneous(symmetrize(defect.z)), geo).op;
        }
        CHECK(lhs.max_abs_value() > 1e-4);
        INFO("degree " << deg);
        CHECK(rel(max_coefficient_difference(lhs, rhs), lhs.max_abs_value()) <= 1e-8);
      }
    }
  }
  SUBCASE("flat chart: affine, constant-divergence and generic fields") {
    const auto geo = geometry_at(kqtest::flat_metric(2), std::vector<double>{0.3, -0.2}, 4);
    auto var = [](int i, double v) { return Jet::variable(i, v, 2, 4); };
    const Jet x1 = var(0, 0.3), x2 = var(1, -0.2);
    SymTensor p2(2, 2, Jet::constant(0.0, 2, 4)), p3(2, 3, Jet::constant(0.0, 2, 4));
    for (std::size_t m = 0; m < p2.size(); ++m) p2[m] = x1 * uniform(-1, 1) + x2 * x2 * uniform(-1, 1) + uniform(-1, 1);
    for (std::size_t m = 0; m < p3.size(); ++m) p3[m] = x1 * x2 * uniform(-1, 1) + x2 * uniform(-1, 1) + uniform(-1, 1);

    SymTensor affine(2, 1, Jet::constant(0.0, 2, 4));
    affine.at({0}) = 0.5 * x1 - 1.2 * x2 + 0.3;
    affine.at({1}) = 2.0 * x1 + 0.7 * x2 - 1.0;
    CHECK(equivariance_defect(affine, p2, geo).max_abs_value() <= 1e-14);
    CHECK(equivariance_defect(affine, p3, geo).max_abs_value() <= 1e-14);

    SymTensor solenoidal(2, 1, Jet::constant(0.0, 2, 4));
    solenoidal.at({0}) = x1 * x2;
    solenoidal.at({1}) = -0.5 * x2 * x2;
    CHECK(std::abs(equivariance_defect(solenoidal, p2, geo).scalar.value()) <= 1e-14);
    CHECK(equivariance_defect(solenoidal, p3, geo).max_abs_value() > 1e-3);

    SymTensor cubic(2, 1, Jet::constant(0.0, 2, 4));
    cubic.at({0}) = pow(x1, 3) / 6.0;
    SymTensor delta(2, 2, Jet::constant(0.0, 2, 4));
    delta.at({0, 0}) += 1.0;
    delta.at({1, 1}) += 1.0;
    CHECK(equivariance_defect(cubic, delta, geo).scalar.value() == doctest::Approx(0.5));
  }
}

TEST_CASE("conformal correction") {
  const auto b = conformal_betas(3);
  CHECK(b[0] == doctest::Approx(-3.0 / 16.0));
  CHECK(b[1] == doctest::Approx(-3.0 / 80.0));
  CHECK(b[2] == doctest::Approx(9.0 / 16.0));
  CHECK(b[3] == doctest::Approx(-9.0 / 80.0));
  CHECK_THROWS_AS(conformal_betas(2), std::invalid_argument);

  const auto geo = geometry_at(kqtest::flat_metric(3), std::vector<double>{0.1, 0.2, 0.3}, 3);
  SymTensor p(3, 2, Jet::constant(0.0, 3, 3));
  for (std::size_t m = 0; m < p.size(); ++m) p[m] += uniform(-1, 1);
  CHECK(conformal_extra(p, geo).value() == 0.0);

  const auto g2 = geometry_at(kqtest::perturbed_metric(2), std::vector<double>{0.1, 0.2}, 3);
  CHECK_THROWS_AS(conformal_extra(SymTensor(2, 2, Jet::constant(1.0, 2, 3)), g2), std::invalid_argument);
}

TEST_CASE("conformal operators of the ellipsoid fail to commute") {
  const auto ell = jacobi_ellipsoid(params(3), 0.0);
  auto& gen = kqtest::rng();
  for (const auto& x : ell.chart.sample(gen, 3)) {
    const auto geo = geometry_at(ell.metric, x, 4);
    const PolyJet i1 = ell.closed_form_integrals[0].evaluate(x, 4);
    const PolyJet i2 = ell.closed_form_integrals[1].evaluate(x, 4);
    const DiffOperator a = minimal_quantize(i1, geo).op;
    const DiffOperator b = minimal_quantize(i2, geo).op;
    const double scale = compose(a, b).max_abs_value();
    CHECK(commutator(a, b).max_abs_value() <= 1e-8 * scale);
    const DiffOperator ac = a + mul(conformal_extra(*i1.deg[2], geo));
    const DiffOperator bc = b + mul(conformal_extra(*i2.deg[2], geo));
    CHECK(commutator(ac, bc).max_abs_value() > 1e-3 * scale);
  }
}
