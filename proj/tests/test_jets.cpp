#include <cmath>
#include <vector>

#include "doctest.h"
#include "kq/common/error.hpp"
#include "kq/jets/field_bundle.hpp"
#include "kq/jets/jet.hpp"
#include "kq/jets/multi_index.hpp"
#include "kq/jets/scalar_field.hpp"
#include "support.hpp"

using namespace kq;
using kqtest::uniform;

namespace {

int binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

}  // namespace

TEST_CASE("multi-index table is graded and complete") {
  for (int dim = 1; dim <= 4; ++dim) {
    const auto& t = MultiIndexTable::get(dim);
    for (int order = 0; order <= kMaxJetOrder; ++order) {
      CHECK(t.count(order) == static_cast<std::size_t>(binomial(dim + order, order)));
    }
    for (std::size_t k = 0; k < t.count(kMaxJetOrder); ++k) {
      auto a = t.alpha(k);
      CHECK(t.index_of(a) == static_cast<int>(k));
    }
  }
}

TEST_CASE("seed_variable") {
  Jet x = seed_variable(0, 3.0, 2, 2);
  CHECK(x.size() == 6);
  CHECK(x.value() == 3.0);
  const int e0[] = {1, 0}, e1[] = {0, 1}, e00[] = {2, 0};
  CHECK(x.coeff(e0) == 1.0);
  CHECK(x.coeff(e1) == 0.0);
  Jet sq = x * x;
  CHECK(sq.value() == 9.0);
  CHECK(sq.partial(e0) == 6.0);
  CHECK(sq.partial(e00) == 2.0);
  CHECK(sq.coeff(e00) == 1.0);
  CHECK_THROWS_AS(seed_variable(5, 0.0, 2, 2), std::out_of_range);
}

TEST_CASE("jet_sqrt") {
  Jet four = Jet::constant(4.0, 2, 3);
  Jet two = jet_sqrt(four);
  CHECK(two.value() == doctest::Approx(2.0));
  for (std::size_t k = 1; k < two.size(); ++k) CHECK(two[k] == 0.0);

  Jet x = seed_variable(0, 1.0, 1, 2);
  Jet r = jet_sqrt(x);
  const int d1[] = {1}, d2[] = {2};
  CHECK(r.value() == doctest::Approx(1.0));
  CHECK(r.partial(d1) == doctest::Approx(0.5));
  CHECK(r.partial(d2) == doctest::Approx(-0.25));

  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 3, order = 4;
    const auto& t = MultiIndexTable::get(dim);
    std::vector<double> c(t.count(order));
    for (auto& v : c) v = uniform(-1, 1);
    c[0] = uniform(0.5, 3.0);
    Jet j = Jet::from_coefficients(dim, order, c);
    Jet back = jet_sqrt(j) * jet_sqrt(j);
    for (std::size_t k = 0; k < j.size(); ++k) {
      CHECK(std::abs(back[k] - j[k]) <= 1e-12 * (1 + std::abs(j[k])));
    }
  }

  Jet bad = seed_variable(0, -2.0, 1, 2);
  try {
    (void)jet_sqrt(bad);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.offending_value() == -2.0);
  }
}

TEST_CASE("division by a zero-valued jet is an error") {
  Jet z = seed_variable(0, 0.0, 1, 3);
  Jet one = Jet::constant(1.0, 1, 3);
  CHECK_THROWS_AS(one / z, DomainError);
  CHECK_THROWS_AS(z.reciprocal(), DomainError);
}

TEST_CASE("arithmetic is exact on polynomials") {
  // (1 + x + y)^3 has exact Taylor coefficients 3!/(a!b!c!) multinomials.
  Jet x = seed_variable(0, 0.0, 2, 4), y = seed_variable(1, 0.0, 2, 4);
  Jet p = pow(1.0 + x + y, 3);
  const int a21[] = {2, 1}, a30[] = {3, 0}, a40[] = {4, 0}, a11[] = {1, 1};
  CHECK(p.coeff(a21) == doctest::Approx(3.0));
  CHECK(p.coeff(a30) == doctest::Approx(1.0));
  CHECK(p.coeff(a40) == 0.0);
  CHECK(p.coeff(a11) == doctest::Approx(6.0));
  Jet q = p / (1.0 + x + y);
  Jet expect = pow(1.0 + x + y, 2);
  for (std::size_t k = 0; k < q.size(); ++k) CHECK(q[k] == doctest::Approx(expect[k]));
}

TEST_CASE("ring homomorphism on random expression trees") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3;
    auto f = kqtest::random_tree(n, 3), g = kqtest::random_tree(n, 3);
    auto x = kqtest::random_point(n);
    for (int order = 0; order <= 4; ++order) {
      Jet jf = f.evaluate(x, order), jg = g.evaluate(x, order);
      Jet prod = (f * g).evaluate(x, order);
      Jet sum = (f + g).evaluate(x, order);
      Jet pj = jf * jg, sj = jf + jg;
      for (std::size_t k = 0; k < prod.size(); ++k) {
        CHECK(std::abs(prod[k] - pj[k]) <= 1e-12 * (1 + std::abs(pj[k])));
        CHECK(std::abs(sum[k] - sj[k]) <= 1e-12 * (1 + std::abs(sj[k])));
      }
    }
  }
}

TEST_CASE("jet partials agree with a central finite-difference oracle") {
  const long double h = 1e-3L;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 2;
    auto f = kqtest::random_tree(n, 3);
    auto x = kqtest::random_point(n);
    Jet j = f.evaluate(x, 4);
    const auto& t = j.table();
    auto fn = [&](const std::vector<long double>& p) { return kqtest::eval_ld(f.node(), p); };
    std::vector<long double> xl(x.begin(), x.end());
    for (std::size_t k = 0; k < j.size(); ++k) {
      auto a = t.alpha(k);
      std::vector<int> alpha(a.begin(), a.end());
      const double exact = j.partial(alpha);
      const double fd = static_cast<double>(kqtest::fd_partial_richardson(fn, xl, alpha, h));
      CHECK(std::abs(exact - fd) <= 1e-5 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("chain rule on compositions matches the finite-difference oracle") {
  // f(g(x)) built by substituting g for the single variable of f.
  const long double h = 1e-3L;
  for (int trial = 0; trial < 20; ++trial) {
    auto g = kqtest::random_tree(2, 2);
    const ScalarField u = g;
    const ScalarField f = sqrt(2.0 + pow(u, 2)) / (1.5 + pow(u, 4)) - pow(u, 3);
    auto x = kqtest::random_point(2);
    Jet j = f.evaluate(x, 3);
    Jet jg = g.evaluate(x, 3);
    Jet composed = sqrt(2.0 + pow(jg, 2)) / (1.5 + pow(jg, 4)) - pow(jg, 3);
    auto fn = [&](const std::vector<long double>& p) { return kqtest::eval_ld(f.node(), p); };
    std::vector<long double> xl(x.begin(), x.end());
    for (std::size_t k = 0; k < j.size(); ++k) {
      auto a = j.table().alpha(k);
      std::vector<int> alpha(a.begin(), a.end());
      const double fd = static_cast<double>(kqtest::fd_partial_richardson(fn, xl, alpha, h));
      CHECK(std::abs(j.partial(alpha) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      CHECK(std::abs(j[k] - composed[k]) <= 1e-12 * (1 + std::abs(j[k])));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  auto f = kqtest::random_tree(3, 4);
  auto x = kqtest::random_point(3);
  Jet a = f.evaluate(x, 4), b = f.evaluate(x, 4);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("expression JSON round trip") {
  for (int trial = 0; trial < 20; ++trial) {
    auto f = kqtest::random_tree(3, 4);
    auto g = ScalarField::from_json(f.to_json());
    auto x = kqtest::random_point(3);
    Jet a = f.evaluate(x, 2), b = g.evaluate(x, 2);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]));
  }
  auto j = nlohmann::json::parse(R"({"op":"pow","args":[{"op":"add","args":[{"var":0},{"const":1}]},{"const":2}]})");
  auto f = ScalarField::from_json(j);
  const double x[] = {2.0};
  CHECK(f.value(x) == 9.0);
  CHECK_THROWS_AS(ScalarField::from_json(nlohmann::json::parse(R"({"op":"exp","args":[{"var":0}]})")), ConfigError);
  CHECK_THROWS_AS(ScalarField::from_json(nlohmann::json::parse(R"({"op":"div","args":[{"var":0}]})")), ConfigError);
}

TEST_CASE("field bundle shares subexpressions and supports evaluators") {
  auto x0 = ScalarField::variable(0), x1 = ScalarField::variable(1);
  auto common = sqrt(1.0 + x0 * x0 + x1 * x1);
  FieldBundle b({common, common * x0, common / (2.0 + x1)});
  const double p[] = {0.3, -0.4};
  auto jets = b.evaluate(p, 3);
  REQUIRE(jets.size() == 3);
  CHECK(jets[1].value() == doctest::Approx(std::sqrt(1.25) * 0.3));

  FieldBundle e(1, [](std::span<const double> x, int order) {
    return std::vector<Jet>{seed_variable(1, x[1], 2, order) * 2.0};
  });
  auto je = e.evaluate(p, 2);
  CHECK(je[0].value() == doctest::Approx(-0.8));
}
