#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "kq/common/error.hpp"
#include "kq/opalg/diff_operator.hpp"
#include "kq/opalg/trivialize.hpp"
#include "support.hpp"

using namespace kq;
using kqtest::uniform;

namespace {

Jet random_jet(int n, int order, double amp = 1.0) {
  const std::size_t count = MultiIndexTable::get(n).count(order);
  std::vector<double> c(count);
  for (auto& v : c) v = uniform(-amp, amp);
  return Jet::from_coefficients(n, order, std::move(c));
}

DiffOperator random_operator(int n, int order, int jet_order = kMaxJetOrder,
                             Trivialization t = Trivialization::kMetricVolume) {
  DiffOperator op(n, order, jet_order, t);
  for (std::size_t i = 0; i < op.size(); ++i) op[i] = {random_jet(n, jet_order), random_jet(n, jet_order)};
  return op;
}

// Full jet comparison: every Taylor coefficient of every operator coefficient.
double max_jet_difference(const DiffOperator& a, const DiffOperator& b) {
  const int jet = std::min(a.jet_order(), b.jet_order());
  const std::size_t count = MultiIndexTable::get(a.dim()).count(jet);
  double m = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i)
    for (std::size_t c = 0; c < count; ++c) {
      double re = 0.0, im = 0.0;
      if (i < a.size()) re += a[i].re[c], im += a[i].im[c];
      if (i < b.size()) re -= b[i].re[c], im -= b[i].im[c];
      m = std::max({m, std::abs(re), std::abs(im)});
    }
  return m;
}

ComplexSymTensor random_sym(int n, int degree, int order) {
  ComplexSymTensor s{SymTensor(n, degree, Jet::constant(0.0, n, order)),
                     SymTensor(n, degree, Jet::constant(0.0, n, order))};
  for (std::size_t m = 0; m < s.re.size(); ++m) {
    s.re[m] = random_jet(n, order);
    s.im[m] = random_jet(n, order);
  }
  return s;
}

// Sum_k A_k . (nabla^k f) with the covariant derivatives of f computed by
// tensor calculus, independent of the Hessian-word expansion.
std::complex<double> covariant_apply(const CovariantOperator& op, const GeometryJet& geo, const Jet& f) {
  const int n = geo.dim();
  Tensor df(n, {Slot::kDown}, f.derivative(0));
  for (int i = 0; i < n; ++i) df.at({i}) = f.derivative(i);
  const Tensor h = covariant_derivative(geo, df);
  const Tensor t3 = covariant_derivative(geo, h);
  std::complex<double> out = 0.0;
  for (int k = 0; k <= 3; ++k) {
    if (!op.terms[k]) continue;
    const auto& a = *op.terms[k];
    const auto& ms = MultisetIndex::get(n, k);
    const std::size_t words = static_cast<std::size_t>(std::pow(n, k));
    std::vector<int> t(k);
    for (std::size_t w = 0; w < words; ++w) {
      std::size_t r = w;
      for (int s = k - 1; s >= 0; --s) {
        t[s] = static_cast<int>(r % n);
        r /= n;
      }
      const std::size_t m = ms.index_of(t);
      const std::complex<double> c(a.re[m].value(), a.im[m].value());
      double v = 0.0;
      if (k == 0) v = f.value();
      if (k == 1) v = df.at(t).value();
      if (k == 2) v = h.at(t).value();
      if (k == 3) v = t3.at(t).value();
      out += c * v;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("identity and canonical commutation") {
  auto a = random_operator(2, 2);
  auto id = DiffOperator::identity(2, kMaxJetOrder);
  CHECK(max_jet_difference(compose(id, a), a) == 0.0);
  CHECK(max_jet_difference(compose(a, id), a) == 0.0);

  auto d = DiffOperator::partial(1, 0, kMaxJetOrder);
  auto x = DiffOperator::multiplication(Jet::variable(0, 0.3, 1, kMaxJetOrder));
  auto ab = compose(d, x);
  std::vector<int> e0{0}, e1{1};
  CHECK(ab.coefficient(e1).re.value() == doctest::Approx(0.3));
  CHECK(ab.coefficient(e0).re.value() == doctest::Approx(1.0));
  auto ba = compose(x, d);
  CHECK(ba.coefficient(e0).re.value() == 0.0);
  auto c = commutator(d, x);
  CHECK(c.effective_order(1e-14) == 0);
  CHECK(c.coefficient(e0).re.value() == doctest::Approx(1.0));
}

TEST_CASE("composition errors") {
  auto a = random_operator(2, 4);
  CHECK_THROWS_AS(compose(a, random_operator(2, 3)), DomainError);
  CHECK_THROWS_AS(compose(a, random_operator(2, 1, 2)), DomainError);
  CHECK_THROWS_AS(compose(a, random_operator(2, 1, 6, Trivialization::kCoordinate)), std::invalid_argument);
}

TEST_CASE("associativity on random operators") {
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 2;
    auto a = random_operator(n, 1 + trial % 2);
    auto b = random_operator(n, 2);
    auto c = random_operator(n, 1);
    auto left = compose(compose(a, b), c);
    auto right = compose(a, compose(b, c));
    CHECK(max_jet_difference(left, right) <= 1e-10 * (1.0 + left.max_abs_value()));
  }
}

TEST_CASE("commutator properties") {
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 2;
    auto a = random_operator(n, 2);
    auto b = random_operator(n, 2);
    auto c = random_operator(n, 2);
    CHECK(commutator(a, a).max_abs_value() == 0.0);
    auto ab = commutator(a, b);
    CHECK(ab.effective_order(1e-10 * (1.0 + ab.max_abs_value())) <= 3);

    auto jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    CHECK(jacobi.max_abs_value() <= 1e-9 * (1.0 + compose(a, compose(b, c)).max_abs_value()));

    auto f = DiffOperator::multiplication(ComplexJet{random_jet(n, 6), random_jet(n, 6)});
    auto g = DiffOperator::multiplication(ComplexJet{random_jet(n, 6), random_jet(n, 6)});
    CHECK(commutator(f, g).max_abs_value() <= 1e-14);
  }
}

TEST_CASE("formal adjoint") {
  const auto flat = kqtest::flat_metric(1);
  const std::vector<double> x0{0.1};
  const auto geo1 = geometry_at(flat, x0, 4);
  auto d = DiffOperator::partial(1, 0, kMaxJetOrder);
  auto dd = formal_adjoint(d, geo1);
  CHECK(max_jet_difference(dd, -d) <= 1e-14);

  const auto metric = kqtest::perturbed_metric(3);
  const std::vector<double> x{0.1, -0.2, 0.15};
  const auto geo = geometry_at(metric, x, 5);
  auto m = DiffOperator::multiplication(random_jet(3, 6));
  CHECK(max_jet_difference(formal_adjoint(m, geo), m) <= 1e-14);

  for (int trial = 0; trial < 3; ++trial) {
    auto a = random_operator(3, 2);
    auto b = random_operator(3, 1);
    auto aa = formal_adjoint(formal_adjoint(a, geo), geo);
    CHECK(max_coefficient_difference(aa, a) <= 1e-10 * (1.0 + a.max_abs_value()));
    auto lhs = formal_adjoint(compose(a, b), geo);
    auto rhs = compose(formal_adjoint(b, geo), formal_adjoint(a, geo));
    CHECK(max_coefficient_difference(lhs, rhs) <= 1e-10 * (1.0 + lhs.max_abs_value()));
  }

  // The metric-volume adjoint matches the coordinate adjoint after
  // conjugation by |det g|^{1/2}.
  auto a = random_operator(3, 2);
  auto via_metric = change_trivialization(formal_adjoint(a, geo), geo, Trivialization::kCoordinate);
  auto via_coord = formal_adjoint(change_trivialization(a, geo, Trivialization::kCoordinate), geo);
  CHECK(max_coefficient_difference(via_metric, via_coord) <= 1e-10 * (1.0 + via_metric.max_abs_value()));
}

TEST_CASE("commutators do not depend on the trivialization") {
  const auto metric = kqtest::perturbed_metric(3);
  const std::vector<double> x{-0.1, 0.2, 0.05};
  const auto geo = geometry_at(metric, x, 6);
  for (int trial = 0; trial < 3; ++trial) {
    auto a = random_operator(3, 2);
    auto b = random_operator(3, 2);
    auto c_metric = change_trivialization(commutator(a, b), geo, Trivialization::kCoordinate);
    auto c_coord = commutator(change_trivialization(a, geo, Trivialization::kCoordinate),
                              change_trivialization(b, geo, Trivialization::kCoordinate));
    CHECK(max_coefficient_difference(c_metric, c_coord) <= 1e-10 * (1.0 + c_metric.max_abs_value()));
  }
}

TEST_CASE("trivialization of nabla-words") {
  SUBCASE("flat Laplacian") {
    const auto flat = kqtest::flat_metric(3);
    const std::vector<double> x{0.1, 0.2, 0.3};
    const auto geo = geometry_at(flat, x, 3);
    CovariantOperator op;
    op.n = 3;
    ComplexSymTensor a{SymTensor(3, 2, Jet::constant(0.0, 3, 3)), SymTensor(3, 2, Jet::constant(0.0, 3, 3))};
    for (int i = 0; i < 3; ++i) a.re.at({i, i}) += -1.0;
    op.terms[2] = a;
    auto d = trivialize(op, geo);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::vector<int> t{i, j};
        CHECK(d.symmetric_component(t).re.value() == doctest::Approx(i == j ? -1.0 : 0.0));
      }
    for (int i = 0; i < 3; ++i) {
      std::vector<int> t{i};
      CHECK(d.symmetric_component(t).max_abs_value() == 0.0);
    }
    CHECK(d[0].max_abs_value() == 0.0);
  }
  SUBCASE("identity") {
    const auto geo = geometry_at(kqtest::perturbed_metric(2), std::vector<double>{0.1, 0.1}, 2);
    CovariantOperator op;
    op.n = 2;
    op.terms[0] = ComplexSymTensor{SymTensor(2, 0, Jet::constant(1.0, 2, 2)), SymTensor(2, 0, Jet::constant(0.0, 2, 2))};
    auto d = trivialize(op, geo);
    CHECK(d.order() == 0);
    CHECK(d[0].re.value() == 1.0);
  }
  SUBCASE("curved metric against covariant evaluation") {
    const auto metric = kqtest::perturbed_metric(3);
    auto& gen = kqtest::rng();
    for (int trial = 0; trial < 3; ++trial) {
      const auto x = metric.chart().sample(gen);
      const auto geo = geometry_at(metric, x, 4);
      CovariantOperator op;
      op.n = 3;
      for (int k = 0; k <= 3; ++k) op.terms[k] = random_sym(3, k, 4);
      const auto d = trivialize(op, geo);
      for (int t = 0; t < 10; ++t) {
        const Jet f = random_jet(3, 6);
        const ComplexJet got = d.apply(f);
        const std::complex<double> want = covariant_apply(op, geo, f);
        CHECK(std::abs(got.re.value() - want.real()) <= 1e-10 * (1.0 + std::abs(want)));
        CHECK(std::abs(got.im.value() - want.imag()) <= 1e-10 * (1.0 + std::abs(want)));
      }
      // The coordinate form acts on F = f mu^{1/2}.
      const auto dc = trivialize(op, geo, Trivialization::kCoordinate);
      const Jet f = random_jet(3, 6);
      const Jet root = sqrt(geo.volume());
      const ComplexJet lhs = dc.apply(f * root);
      const ComplexJet rhs = root * d.apply(f);
      CHECK(std::abs(lhs.re.value() - rhs.re.value()) <= 1e-10 * (1.0 + std::abs(rhs.re.value())));
      CHECK(std::abs(lhs.im.value() - rhs.im.value()) <= 1e-10 * (1.0 + std::abs(rhs.im.value())));
    }
  }
  SUBCASE("insufficient depth") {
    const auto geo = geometry_at(kqtest::perturbed_metric(2), std::vector<double>{0.1, 0.1}, 1);
    CovariantOperator op;
    op.n = 2;
    op.terms[3] = random_sym(2, 3, 2);
    CHECK_THROWS_AS(trivialize(op, geo), DomainError);
  }
}
