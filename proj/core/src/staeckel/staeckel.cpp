#include "kq/staeckel/staeckel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "kq/common/error.hpp"
#include "kq/geometry/geometry_jet.hpp"

namespace kq {

StaeckelSystem StaeckelSystem::assemble(Chart chart, std::vector<std::vector<ScalarField>> b,
                                        std::vector<ScalarField> f, int probes) {
  const int n = chart.dim();
  if (static_cast<int>(b.size()) != n || static_cast<int>(f.size()) != n) {
    throw ConfigError("Staeckel matrix and potentials must match the chart dimension");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(b[i].size()) != n) throw ConfigError("Staeckel matrix must be square");
    for (int k = 0; k < n; ++k) {
      if (!b[i][k].depends_only_on(k)) {
        throw ConfigError("Staeckel matrix column " + std::to_string(k + 1) + " depends on a foreign coordinate");
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    if (!f[k].depends_only_on(k)) {
      throw ConfigError("potential f_" + std::to_string(k + 1) + " depends on a foreign coordinate");
    }
  }
  StaeckelSystem s;
  s.data_ = std::make_shared<const Data>(Data{std::move(chart), std::move(b), std::move(f)});
  std::mt19937_64 rng(0x5eed);
  for (int p = 0; p < probes; ++p) {
    const auto x = s.chart().sample(rng);
    auto m = s.matrix(x, 0);
    double rows = 1.0;
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      for (int k = 0; k < n; ++k) r += m[i * n + k].value() * m[i * n + k].value();
      rows *= std::sqrt(r);
    }
    double det = 0.0;
    try {
      det = invert(m, n).determinant.value();
    } catch (const SingularError&) {
    }
    if (!(std::abs(det) > 1e-12 * rows)) {
      std::ostringstream os;
      os << "singular Staeckel matrix at (";
      for (int i = 0; i < n; ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw SingularError(os.str());
    }
  }
  return s;
}

std::vector<Jet> StaeckelSystem::matrix(std::span<const double> x, int order) const {
  const int n = dim();
  FieldEvaluator ev(x, order);
  std::vector<Jet> m(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) m[i * n + k] = ev(data_->b[i][k]);
  return m;
}

std::vector<Jet> StaeckelSystem::inverse(std::span<const double> x, int order) const {
  return invert(matrix(x, order), dim()).inverse;
}

MetricField StaeckelSystem::metric() const {
  const int n = dim();
  auto self = *this;
  return MetricField::diagonal(chart(), FieldBundle(n, [self, n](std::span<const double> x, int order) {
    auto a = self.inverse(x, order);
    std::vector<Jet> g(n);
    for (int i = 0; i < n; ++i) g[i] = a[i * n].reciprocal();
    return g;
  }), Signature::kRiemannian);
}

PolyObservable StaeckelSystem::integral(int l) const {
  const int n = dim();
  if (l < 0 || l >= n) throw std::out_of_range("Staeckel integral index out of range");
  auto self = *this;
  PolyObservable p(n);
  const auto& ms = MultisetIndex::get(n, 2);
  p.set_component(2, FieldBundle(ms.count(), [self, n, l](std::span<const double> x, int order) {
    auto a = self.inverse(x, order);
    const auto& ms2 = MultisetIndex::get(n, 2);
    std::vector<Jet> c(ms2.count(), Jet::constant(0.0, n, order));
    for (int i = 0; i < n; ++i) {
      const int idx[] = {i, i};
      c[ms2.index_of(idx)] = a[i * n + l];
    }
    return c;
  }));
  p.set_component(0, FieldBundle(1, [self, l](std::span<const double> x, int order) {
    return std::vector<Jet>{self.potential(l, x, order)};
  }));
  return p;
}

std::vector<PolyObservable> StaeckelSystem::integrals() const {
  std::vector<PolyObservable> v;
  for (int l = 0; l < dim(); ++l) v.push_back(integral(l));
  return v;
}

PolyObservable StaeckelSystem::hamiltonian() const { return 0.5 * integral(0); }

Jet StaeckelSystem::potential(int l, std::span<const double> x, int order) const {
  const int n = dim();
  auto a = inverse(x, order);
  FieldEvaluator ev(x, order);
  Jet u = Jet::constant(0.0, n, order);
  for (int i = 0; i < n; ++i) u += a[i * n + l] * ev(data_->f[i]);
  return u;
}

int StaeckelSystem::integral_rank(std::span<const double> x, std::span<const double> xi,
                                  double rel_threshold) const {
  const int n = dim();
  chart().require(x);
  auto a = inverse(x, 1);
  FieldEvaluator ev(x, 1);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, 2 * n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      const Jet& ail = a[i * n + l];
      const Jet& fi = ev(data_->f[i]);
      const double w = xi[i] * xi[i] + fi.value();
      const auto ga = ail.gradient(), gf = fi.gradient();
      for (int j = 0; j < n; ++j) jac(l, j) += ga[j] * w + ail.value() * gf[j];
      jac(l, n + i) += 2.0 * ail.value() * xi[i];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > rel_threshold * sv(0)) ++rank;
  return rank;
}

SymmetricFunctions symmetric_functions(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  auto elementary = [](std::span<const double> v) {
    std::vector<double> e(v.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t k = j + 1; k >= 1; --k) e[k] += v[j] * e[k - 1];
    return e;
  };
  SymmetricFunctions s;
  s.sigma = elementary(x);
  for (int i = 0; i < n; ++i) {
    std::vector<double> rest;
    for (int j = 0; j < n; ++j)
      if (j != i) rest.push_back(x[j]);
    s.sigma_excl.push_back(elementary(rest));
  }
  return s;
}

std::vector<ScalarField> sigma_fields(int n, int excluded) {
  std::vector<ScalarField> e{ScalarField(1.0)};
  for (int j = 0; j < n; ++j) {
    if (j == excluded) continue;
    const auto xj = ScalarField::variable(j);
    e.push_back(0.0);
    for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] = e[k] + xj * e[k - 1];
  }
  return e;
}

std::vector<double> EmbeddedModel::y(std::span<const double> x) const {
  const int nn = n();
  std::vector<double> out(nn + 1);
  for (int al = 0; al <= nn; ++al) {
    double num = kind == EmbeddingKind::kEllipsoid ? a[al] : 1.0, den = 1.0;
    for (int i = 0; i < nn; ++i) num *= a[al] - x[i];
    for (int b = 0; b <= nn; ++b)
      if (b != al) den *= a[al] - a[b];
    const double y2 = num / den;
    if (!(y2 >= 0.0)) throw DomainError("point outside the embedded chart: y^2 < 0", y2);
    out[al] = std::sqrt(y2);
  }
  return out;
}

std::vector<double> EmbeddedModel::inverse_metric(std::span<const double> x) const {
  const int nn = n();
  std::vector<double> gi(nn);
  for (int i = 0; i < nn; ++i) {
    double up = 1.0, v = 1.0;
    for (int j = 0; j < nn; ++j)
      if (j != i) up *= x[i] - x[j];
    for (double al : a) v *= x[i] - al;
    const double g = kind == EmbeddingKind::kEllipsoid ? -(x[i] / 4.0) * up / v : -up / (4.0 * v);
    gi[i] = 1.0 / g;
  }
  return gi;
}

std::vector<double> EmbeddedModel::p(std::span<const double> x, std::span<const double> xi) const {
  const int nn = n();
  const auto yy = y(x);
  const auto gi = inverse_metric(x);
  std::vector<double> out(nn + 1);
  for (int al = 0; al <= nn; ++al) {
    double s = 0.0;
    for (int i = 0; i < nn; ++i) s += gi[i] * xi[i] / (a[al] - x[i]);
    out[al] = -0.5 * yy[al] * s;
  }
  return out;
}

double EmbeddedModel::generating_function(double lambda, std::span<const double> x,
                                          std::span<const double> xi) const {
  const int nn = n();
  const auto gi = inverse_metric(x);
  double g = 0.0, u = 1.0;
  for (int i = 0; i < nn; ++i) {
    double prod = 1.0;
    for (int j = 0; j < nn; ++j)
      if (j != i) prod *= lambda - x[j];
    g += gi[i] * prod * xi[i] * xi[i];
    u *= lambda - x[i];
  }
  return g + (kind == EmbeddingKind::kEllipsoid ? harmonic : 1.0) * u;
}

std::vector<double> EmbeddedModel::ambient_integrals(std::span<const double> yy, std::span<const double> pp) const {
  const int nn = n();
  std::vector<double> f(nn + 1);
  for (int al = 0; al <= nn; ++al) {
    double v = kind == EmbeddingKind::kEllipsoid ? pp[al] * pp[al] + harmonic * yy[al] * yy[al] : yy[al] * yy[al];
    for (int b = 0; b <= nn; ++b) {
      if (b == al) continue;
      const double l = pp[al] * yy[b] - pp[b] * yy[al];
      v += l * l / (a[al] - a[b]);
    }
    f[al] = v;
  }
  return f;
}

double EmbeddedModel::z1(std::span<const double> yy) const {
  double s = 0.0;
  for (int al = 0; al <= n(); ++al) s += kind == EmbeddingKind::kEllipsoid ? yy[al] * yy[al] / a[al] : yy[al] * yy[al];
  return s - 1.0;
}

double EmbeddedModel::z2(std::span<const double> yy, std::span<const double> pp) const {
  double s = 0.0;
  for (int al = 0; al <= n(); ++al) s += kind == EmbeddingKind::kEllipsoid ? pp[al] * yy[al] / a[al] : pp[al] * yy[al];
  return s;
}

MoserRestriction moser_restriction(const EmbeddedModel& model, std::span<const double> x,
                                   std::span<const double> xi) {
  MoserRestriction r;
  const auto yy = model.y(x);
  const auto pp = model.p(x, xi);
  r.ambient = model.ambient_integrals(yy, pp);
  r.z1 = model.z1(yy);
  r.z2 = model.z2(yy, pp);
  const int nn = model.n();
  for (int al = 0; al <= nn; ++al) {
    double den = 1.0;
    for (int b = 0; b <= nn; ++b)
      if (b != al) den *= model.a[al] - model.a[b];
    const double g = model.generating_function(model.a[al], x, xi);
    r.closed_form.push_back(model.kind == EmbeddingKind::kEllipsoid ? model.a[al] * g / den : g / den);
  }
  return r;
}

namespace {

void check_parameters(const std::vector<double>& a) {
  if (a.size() < 2) throw ConfigError("need at least two parameters a_0 < a_1");
  if (static_cast<int>(a.size()) - 1 > kMaxJetDim) throw ConfigError("too many parameters");
  if (!(a[0] > 0.0)) throw ConfigError("parameters must satisfy 0 < a_0 < ... < a_n");
  for (std::size_t k = 1; k < a.size(); ++k) {
    if (!(a[k] > a[k - 1])) throw ConfigError("parameters must satisfy 0 < a_0 < ... < a_n");
  }
}

StaeckelModel build(EmbeddingKind kind, std::vector<double> a, double harmonic) {
  check_parameters(a);
  const int n = static_cast<int>(a.size()) - 1;
  const bool ell = kind == EmbeddingKind::kEllipsoid;
  std::vector<std::string> labels;
  std::vector<Interval> dom;
  for (int i = 0; i < n; ++i) {
    labels.push_back("x" + std::to_string(i + 1));
    dom.push_back({a[i], a[i + 1]});
  }
  Chart chart(labels, dom);

  auto V = [&](const ScalarField& l) {
    ScalarField v = 1.0;
    for (double al : a) v *= l - al;
    return v;
  };
  std::vector<ScalarField> g(n), ginv(n);
  for (int i = 0; i < n; ++i) {
    const auto xi = ScalarField::variable(i);
    ScalarField up = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != i) up *= xi - ScalarField::variable(j);
    g[i] = ell ? -(xi / 4.0) * up / V(xi) : -up / (4.0 * V(xi));
    ginv[i] = ScalarField(1.0) / g[i];
  }
  MetricField metric = MetricField::diagonal(chart, g, Signature::kRiemannian);

  std::vector<std::vector<ScalarField>> B(n, std::vector<ScalarField>(n));
  std::vector<ScalarField> f(n);
  for (int k = 0; k < n; ++k) {
    const auto xk = ScalarField::variable(k);
    const auto v4 = 4.0 * V(xk);
    for (int r = 0; r < n; ++r) {
      const int i = r + 1;
      const double sign = (i % 2) ? -1.0 : 1.0;
      B[r][k] = sign * pow(xk, ell ? n + 1 - i : n - i) / v4;
    }
    f[k] = ell ? harmonic * pow(xk, n + 1) / v4 : pow(xk, n) / v4;
  }
  auto system = StaeckelSystem::assemble(chart, B, f);

  const double c = ell ? harmonic : 1.0;
  const auto sigma = sigma_fields(n);
  std::vector<std::vector<ScalarField>> sigma_ex;
  for (int j = 0; j < n; ++j) sigma_ex.push_back(sigma_fields(n, j));
  std::vector<PolyObservable> closed;
  const auto& ms = MultisetIndex::get(n, 2);
  for (int i = 1; i <= n; ++i) {
    std::vector<ScalarField> q(ms.count(), ScalarField(0.0));
    for (int j = 0; j < n; ++j) {
      const int idx[] = {j, j};
      q[ms.index_of(idx)] = ginv[j] * sigma_ex[j][i - 1];
    }
    PolyObservable I(n);
    I.set_component(2, std::move(q));
    I.set_component(0, std::vector<ScalarField>{-c * sigma[i]});
    closed.push_back(std::move(I));
  }
  double suma = 0.0;
  for (double al : a) suma += al;
  std::vector<ScalarField> hq(ms.count(), ScalarField(0.0));
  for (int j = 0; j < n; ++j) {
    const int idx[] = {j, j};
    hq[ms.index_of(idx)] = 0.5 * ginv[j];
  }
  PolyObservable h(n);
  h.set_component(2, std::move(hq));
  h.set_component(0, std::vector<ScalarField>{(0.5 * c) * (ScalarField(suma) - sigma[1])});

  StaeckelModel m{chart, metric, system, EmbeddedModel{kind, a, ell ? harmonic : 0.0}, closed, h};
  return m;
}

}  // namespace

StaeckelModel jacobi_ellipsoid(std::vector<double> a, double harmonic) {
  return build(EmbeddingKind::kEllipsoid, std::move(a), harmonic);
}

StaeckelModel neumann(std::vector<double> a) { return build(EmbeddingKind::kNeumann, std::move(a), 0.0); }

}  // namespace kq
