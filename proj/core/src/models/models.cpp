#include "kq/models/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kq/common/error.hpp"
#include "kq/common/parallel.hpp"
#include "kq/common/tolerance.hpp"
#include "kq/geometry/geometry_jet.hpp"

namespace kq {

namespace {

using SF = ScalarField;

SF var(int i) { return SF::variable(i); }

std::vector<std::vector<double>> probe_points(const Chart& chart) {
  std::mt19937_64 rng(0x6b71u);
  return chart.sample(rng, kValidationProbes);
}

ValidationEntry entry(std::string check, double residual, double scale, double tol) {
  return {std::move(check), residual, scale, tol, is_negligible(residual, scale, tol)};
}

// Largest {P_i, P_j} coefficient over all declared pairs and probes.
ValidationEntry involution_entry(const ModelInstance& m, const std::vector<std::vector<double>>& probes) {
  struct Res {
    double r = 0.0, s = 0.0;
  };
  const auto pairs = m.pairs();
  const auto per_point = parallel_map(probes.size(), [&](std::size_t k) {
    const auto& x = probes[k];
    const auto geo = geometry_at(m.metric, x, 1);
    std::vector<PolyJet> ev;
    for (const auto& o : m.observables) ev.push_back(o.observable.evaluate(x, 1));
    Res out;
    for (auto [i, j] : pairs) {
      const PolyJet b = schouten_bracket(ev[i], ev[j], geo, BracketForm::kCoordinate);
      out.r = std::max(out.r, b.max_abs_value());
      out.s = std::max({out.s, ev[i].max_abs_value(), ev[j].max_abs_value()});
    }
    return out;
  });
  Res total;
  for (const auto& r : per_point) {
    total.r = std::max(total.r, r.r);
    total.s = std::max(total.s, r.s);
  }
  return entry("involution", total.r, total.s, kZeroTolerance);
}

// Killing residual of every homogeneous degree-1 or degree-2 observable.
ValidationEntry killing_entry(const ModelInstance& m, const std::vector<std::vector<double>>& probes,
                              std::span<const std::string> names) {
  double r = 0.0, s = 0.0;
  for (const auto& x : probes) {
    const auto geo = geometry_at(m.metric, x, 1);
    for (const auto& name : names) {
      const PolyJet p = m.observable(name).evaluate(x, 1);
      const int d = p.max_degree();
      for (int k = 0; k < d; ++k)
        if (p.has(k) && p.deg[k]->max_abs_value() > 0.0)
          throw ConfigError("observable '" + name + "' of model '" + m.name + "' is not homogeneous");
      if (d < 1 || d > 2) throw ConfigError("observable '" + name + "' must have degree 1 or 2");
      r = std::max(r, killing_residual(*p.deg[d], geo).max_abs_value());
      s = std::max({s, p.deg[d]->max_abs_value(), geo.metric_scale()});
    }
  }
  return entry("killing", r, s, kZeroTolerance);
}

std::string describe(const ValidationEntry& e) {
  std::ostringstream os;
  os << e.check << ": residual " << e.residual << " > " << e.tolerance << " * (1 + " << e.scale << ")";
  return os.str();
}

// (1/mu) d_i (mu g^ij A_j)
double divergence_of_form(const GeometryJet& geo, const Tensor& a) {
  const int n = geo.dim();
  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    Jet w = geo.zero(1);
    for (int j = 0; j < n; ++j) w += geo.ginv(i, j) * a.at({j});
    div += (geo.volume() * w).derivative(i).value();
  }
  return div / geo.volume().value();
}

}  // namespace

nlohmann::json ExpectedVerdicts::to_json() const {
  nlohmann::json j;
  j["classically_integrable"] = classically_integrable;
  j["quantum_commuting"] = quantum_commuting;
  j["robertson"] = robertson ? nlohmann::json(*robertson) : nlohmann::json(nullptr);
  j["ricci_flat"] = ricci_flat ? nlohmann::json(*ricci_flat) : nlohmann::json(nullptr);
  return j;
}

ExpectedVerdicts ExpectedVerdicts::from_json(const nlohmann::json& j, const ExpectedVerdicts& defaults) {
  if (!j.is_object()) throw ConfigError("expected verdicts must be an object");
  ExpectedVerdicts v = defaults;
  auto flag = [&](const char* key) -> std::optional<bool> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_boolean()) throw ConfigError(std::string("expected verdict '") + key + "' must be a boolean");
    return j[key].get<bool>();
  };
  if (auto f = flag("classically_integrable")) v.classically_integrable = *f;
  if (auto f = flag("quantum_commuting")) v.quantum_commuting = *f;
  if (j.contains("robertson")) v.robertson = flag("robertson");
  if (j.contains("ricci_flat")) v.ricci_flat = flag("ricci_flat");
  return v;
}

const PolyObservable& ModelInstance::observable(std::string_view name) const {
  for (const auto& o : observables)
    if (o.name == name) return o.observable;
  throw std::out_of_range("model '" + this->name + "' has no observable '" + std::string(name) + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> ModelInstance::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < observables.size(); ++i)
    for (std::size_t j = i + 1; j < observables.size(); ++j) out.emplace_back(i, j);
  return out;
}

void require_valid(const std::string& model, const std::vector<ValidationEntry>& entries) {
  std::string failed;
  for (const auto& e : entries)
    if (!e.passed) failed += "\n  " + describe(e);
  if (!failed.empty()) throw ConfigError("model '" + model + "' failed validation:" + failed);
}

// ---------------------------------------------------------------------------
// Kerr-Newman-de Sitter

nlohmann::json KnsParameters::to_json() const {
  return {{"m", m}, {"gamma", gamma}, {"e", e}, {"g", g}, {"nut", nut}, {"lambda", lambda}, {"epsilon", epsilon}};
}

KnsParameters KnsParameters::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("KNS parameters must be an object");
  KnsParameters p;
  auto read = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string("KNS parameter '") + key + "' must be a number");
    out = j[key].get<double>();
  };
  read("m", p.m);
  read("gamma", p.gamma);
  read("e", p.e);
  read("g", p.g);
  read("nut", p.nut);
  read("lambda", p.lambda);
  read("epsilon", p.epsilon);
  return p;
}

KnsStructure kns_structure(const KnsParameters& prm) {
  const SF p = var(0), q = var(1);
  KnsStructure s;
  s.x = prm.gamma - prm.g * prm.g + 2.0 * prm.nut * p - prm.epsilon * p * p - (prm.lambda / 3.0) * pow(p, 4);
  s.y = prm.gamma + prm.e * prm.e - 2.0 * prm.m * q + prm.epsilon * q * q - (prm.lambda / 3.0) * pow(q, 4);
  s.rho2 = p * p + q * q;
  const SF a = sqrt(s.y / (2.0 * s.rho2));
  const SF b = sqrt(s.rho2 / (2.0 * s.y));
  const SF c = sqrt(s.x / s.rho2);
  s.frames[0] = {0.0, b, -(p * p) * a, a};               // K
  s.frames[1] = {0.0, -b, -(p * p) * a, a};              // L
  s.frames[2] = {sqrt(s.rho2 / s.x), 0.0, 0.0, 0.0};     // M1
  s.frames[3] = {0.0, 0.0, q * q * c, c};                // M2
  return s;
}

namespace {

struct KnsBlock {
  Interval p, q;
};

// Longest run of grid values where f > 0, shrunk by 10% at both ends.
std::optional<Interval> positive_run(const SF& f, int coord, double lo, double hi, double step) {
  double best_lo = 0, best_hi = 0, run_lo = 0;
  bool in_run = false;
  std::vector<double> x(4, 0.0);
  for (double t = lo; t <= hi + 1e-12; t += step) {
    x[coord] = t;
    const bool ok = f.value(x) > 0.0;
    if (ok && !in_run) {
      run_lo = t;
      in_run = true;
    }
    if (in_run && (!ok || t + step > hi + 1e-12)) {
      const double run_hi = ok ? t : t - step;
      if (run_hi - run_lo > best_hi - best_lo) {
        best_lo = run_lo;
        best_hi = run_hi;
      }
      in_run = false;
    }
  }
  if (best_hi - best_lo <= step) return std::nullopt;
  const double w = best_hi - best_lo;
  return Interval{best_lo + 0.1 * w, best_hi - 0.1 * w};
}

KnsBlock kns_block(const KnsStructure& s) {
  auto p = positive_run(s.x, 0, -4.0, 4.0, 0.05);
  auto q = positive_run(s.y, 1, 0.25, 6.0, 0.05);
  if (!p || !q) throw ConfigError("KNS parameters admit no chart block with X > 0 and Y > 0");
  return {*p, *q};
}

}  // namespace

ModelInstance kns(const KnsParameters& prm) {
  const KnsStructure s = kns_structure(prm);
  const KnsBlock block = kns_block(s);
  const SF p = var(0), q = var(1);
  const SF& X = s.x;
  const SF& Y = s.y;
  const SF& r2 = s.rho2;
  const SF p2 = p * p, q2 = q * q;

  // sigma and tau are cyclic: unbounded domain, unit sampling box.
  Chart chart({"p", "q", "sigma", "tau"}, {block.p, block.q, Interval{}, Interval{}});
  chart.set_sampling_box({block.p, block.q, Interval{-1.0, 1.0}, Interval{-1.0, 1.0}});
  chart.add_constraint(X).add_constraint(Y);

  std::vector<std::vector<SF>> g(4, std::vector<SF>(4, SF(0.0)));
  g[0][0] = r2 / X;
  g[1][1] = r2 / Y;
  g[2][2] = (X * q2 * q2 - Y * p2 * p2) / r2;
  g[2][3] = (X * q2 + Y * p2) / r2;
  g[3][3] = (X - Y) / r2;
  MetricField metric(chart, g, Signature::kLorentzian);

  // U = (d_sigma + p^2 d_tau)/rho^2 and V = (q^2 d_tau - d_sigma)/rho^2 are
  // dual to d_tau + q^2 d_sigma and d_tau - p^2 d_sigma.
  std::vector<std::vector<SF>> pu(4, std::vector<SF>(4, SF(0.0)));
  pu[0][0] = q2 * X / r2;
  pu[1][1] = -(p2 * Y) / r2;
  pu[2][2] = p2 / (Y * r2) + q2 / (X * r2);
  pu[2][3] = p2 * q2 * (1.0 / X - 1.0 / Y) / r2;
  pu[3][3] = p2 * q2 * q2 / (Y * r2) + q2 * p2 * p2 / (X * r2);
  pu[3][2] = pu[2][3];
  std::vector<std::vector<SF>> hu(4, std::vector<SF>(4, SF(0.0)));
  hu[0][0] = X / r2;
  hu[1][1] = Y / r2;
  hu[2][2] = (1.0 / X - 1.0 / Y) / r2;
  hu[2][3] = (p2 / X + q2 / Y) / r2;
  hu[3][3] = (p2 * p2 / X - q2 * q2 / Y) / r2;
  hu[3][2] = hu[2][3];
  for (auto& row : hu)
    for (auto& c : row) c = 0.5 * c;

  MaxwellField maxwell(std::vector<SF>{0.0, 0.0, p * q * (prm.g * q - prm.e * p) / r2, (prm.e * q + prm.g * p) / r2});

  ModelInstance m;
  m.name = "kns";
  m.chart = chart;
  m.metric = metric;
  m.maxwell = maxwell;
  m.observables = {{"H", tilde_shift(PolyObservable::quadratic(hu), maxwell)},
                   {"P", tilde_shift(PolyObservable::quadratic(pu), maxwell)},
                   {"S", PolyObservable::momentum(4, 2)},
                   {"T", PolyObservable::momentum(4, 3)}};
  m.expected = {true, true, std::nullopt, false};
  m.parameters = prm.to_json();
  m.parameters["block"] = {{"p", {block.p.lo, block.p.hi}}, {"q", {block.q.lo, block.q.hi}}};
  m.source = prm;

  const auto probes = probe_points(chart);
  const PolyObservable pquad = PolyObservable::quadratic(pu);
  double div = 0.0, div_scale = 0.0, km = 0.0, km_scale = 0.0, frames = 0.0, yano = 0.0, yscale = 0.0;
  for (const auto& x : probes) {
    const auto geo = geometry_at(metric, x, 1);
    const auto a = maxwell.evaluate(x, 2);
    div = std::max(div, std::abs(divergence_of_form(geo, a.A)));
    div_scale = std::max({div_scale, a.A.max_abs_value(), geo.metric_scale()});
    const PolyJet pj = pquad.evaluate(x, 1);
    const auto [kr, fr] = killing_maxwell_residual(*pj.deg[2], a.F, geo);
    km = std::max({km, kr.max_abs_value(), fr.max_abs_value()});
    km_scale = std::max({km_scale, pj.max_abs_value(), a.F.max_abs_value(), geo.metric_scale()});
    const YanoCheck yc = kns_yano_check(prm, metric, pquad, x);
    frames = std::max(frames, yc.frames_vs_declared);
    yano = std::max(yano, yc.yano_vs_declared);
    yscale = std::max(yscale, yc.scale);
  }
  m.validation.push_back(entry("divergence of A", div, div_scale, 1e-10));
  m.validation.push_back(entry("killing-maxwell P", km, km_scale, kZeroTolerance));
  m.validation.push_back(entry("P from frames", frames, yscale, 1e-10));
  m.validation.push_back(entry("P = -Y^2", yano, yscale, 1e-10));
  m.validation.push_back(involution_entry(m, probes));
  require_valid(m.name, m.validation);
  return m;
}

YanoCheck kns_yano_check(const KnsParameters& prm, const MetricField& metric, const PolyObservable& p,
                         std::span<const double> x) {
  constexpr int n = 4;
  const KnsStructure s = kns_structure(prm);
  std::array<std::array<double, n>, 4> f{};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < n; ++i) f[a][i] = s.frames[a][i].value(x);
  const auto& [K, L, M1, M2] = f;
  const double pp = x[0] * x[0], qq = x[1] * x[1];

  const std::vector<Jet> gc = metric.components(x, 0);
  const JetInverse inv = invert(gc, n);
  auto gl = [&](int i, int j) { return gc[i * n + j].value(); };
  auto gu = [&](int i, int j) { return inv.inverse[i * n + j].value(); };

  double y[n][n], from_frames[n][n];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      y[i][j] = x[0] * (K[i] * L[j] - K[j] * L[i]) - x[1] * (M1[i] * M2[j] - M1[j] * M2[i]);
      from_frames[i][j] = pp * (K[i] * L[j] + L[i] * K[j]) + qq * (M1[i] * M1[j] + M2[i] * M2[j]);
    }
  const PolyJet pj = p.evaluate(x, 0);
  const SymTensor& pu = *pj.deg[2];

  YanoCheck out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double declared = 0.0, ysq = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          declared += gl(i, a) * pu.at({a, b}).value() * gl(b, j);
          ysq -= y[i][a] * gu(a, b) * y[b][j];
        }
      out.frames_vs_declared = std::max(out.frames_vs_declared, std::abs(from_frames[i][j] - declared));
      out.yano_vs_declared = std::max(out.yano_vs_declared, std::abs(ysq - declared));
      out.scale = std::max(out.scale, std::abs(declared));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Multi-Centre

ModelInstance multicentre(Chart chart, const MultiCentreFields& fields, std::vector<NamedObservable> extra) {
  if (chart.dim() != 4) throw ConfigError("Multi-Centre chart must have coordinates (t, y1, y2, y3)");
  if (fields.sign != 1 && fields.sign != -1) throw ConfigError("Multi-Centre sign must be +1 or -1");
  const SF& V = fields.v;
  const auto& A = fields.a;
  chart.add_constraint(V);

  std::vector<std::vector<SF>> g(4, std::vector<SF>(4, SF(0.0)));
  g[0][0] = 1.0 / V;
  for (int a = 0; a < 3; ++a) {
    g[0][a + 1] = A[a] / V;
    for (int b = a; b < 3; ++b) g[a + 1][b + 1] = A[a] * A[b] / V + (a == b ? V : SF(0.0));
  }
  MetricField metric(chart, g, Signature::kRiemannian);

  std::vector<std::vector<SF>> hu(4, std::vector<SF>(4, SF(0.0)));
  SF a2 = 0.0;
  for (int a = 0; a < 3; ++a) a2 += A[a] * A[a];
  hu[0][0] = 0.5 * (V + a2 / V);
  for (int a = 0; a < 3; ++a) {
    hu[0][a + 1] = -0.5 * A[a] / V;
    hu[a + 1][0] = hu[0][a + 1];
    hu[a + 1][a + 1] = 0.5 / V;
  }

  ModelInstance m;
  m.name = "multicentre";
  m.chart = chart;
  m.metric = metric;
  m.observables = {{"H", PolyObservable::quadratic(hu)}, {"K", PolyObservable::momentum(4, 0)}};
  std::vector<std::string> killing_names{"K"};
  for (auto& e : extra) {
    if (e.observable.dim() != 4) throw ConfigError("observable '" + e.name + "' has the wrong dimension");
    killing_names.push_back(e.name);
    m.observables.push_back(std::move(e));
  }
  m.expected = {true, true, std::nullopt, true};
  m.parameters = {{"sign", fields.sign}, {"V", V.to_json()}, {"A", {A[0].to_json(), A[1].to_json(), A[2].to_json()}}};
  m.source = fields;

  const auto probes = probe_points(chart);
  double mono = 0.0, mono_scale = 0.0, ric = 0.0, ric_scale = 0.0;
  for (const auto& x : probes) {
    const Jet v = V.evaluate(x, 1);
    std::array<Jet, 3> aj{A[0].evaluate(x, 1), A[1].evaluate(x, 1), A[2].evaluate(x, 1)};
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      const double curl = aj[c].derivative(b + 1).value() - aj[b].derivative(c + 1).value();
      mono = std::max(mono, std::abs(v.derivative(a + 1).value() - fields.sign * curl));
      mono_scale = std::max({mono_scale, std::abs(v.derivative(a + 1).value()), std::abs(curl)});
    }
    const auto geo = geometry_at(metric, x, 2);
    ric = std::max(ric, geo.ricci_tensor().max_abs_value());
    ric_scale = std::max(ric_scale, geo.metric_scale());
  }
  m.validation.push_back(entry("dV = sign * curl A", mono, mono_scale, kZeroTolerance));
  m.validation.push_back(entry("ricci-flat", ric, ric_scale, kZeroTolerance));
  m.validation.push_back(killing_entry(m, probes, killing_names));
  m.validation.push_back(involution_entry(m, probes));
  require_valid(m.name, m.validation);
  return m;
}

// ---------------------------------------------------------------------------
// Di Pirro

std::string to_string(DiPirroVariant v) { return v == DiPirroVariant::kConstantC ? "i" : "ii"; }

DiPirroVariant dipirro_variant_from_string(const std::string& s) {
  if (s == "i") return DiPirroVariant::kConstantC;
  if (s == "ii") return DiPirroVariant::kRotational;
  throw ConfigError("Di Pirro variant must be \"i\" or \"ii\", got '" + s + "'");
}

ModelInstance dipirro(Chart chart, const DiPirroFields& f) {
  if (chart.dim() != 3) throw ConfigError("Di Pirro chart must be three-dimensional");
  for (const SF* s : {&f.a, &f.b, &f.gamma})
    if (s->max_variable() > 1) throw ConfigError("Di Pirro a, b, gamma must depend on x1, x2 only");
  if (!f.c.depends_only_on(2)) throw ConfigError("Di Pirro c must depend on x3 only");
  if (f.variant == DiPirroVariant::kConstantC && !f.c.is_constant())
    throw ConfigError("Di Pirro variant i requires a constant c");
  const SF s = f.gamma + f.c;
  chart.add_constraint(s);

  std::vector<SF> diag{s / f.a, s / f.b, s};
  MetricField metric = MetricField::diagonal(chart, diag, Signature::kRiemannian);

  std::vector<std::vector<SF>> hu(3, std::vector<SF>(3, SF(0.0))), pu = hu;
  hu[0][0] = 0.5 * f.a / s;
  hu[1][1] = 0.5 * f.b / s;
  hu[2][2] = 0.5 / s;
  pu[0][0] = f.c * f.a / s;
  pu[1][1] = f.c * f.b / s;
  pu[2][2] = -f.gamma / s;

  ModelInstance m;
  m.name = "dipirro-" + to_string(f.variant);
  m.chart = chart;
  m.metric = metric;
  m.observables = {{"H", PolyObservable::quadratic(hu)}, {"P", PolyObservable::quadratic(pu)}};
  if (f.variant == DiPirroVariant::kConstantC) {
    m.observables.push_back({"T", PolyObservable::momentum(3, 2)});
  } else {
    m.observables.push_back({"J", PolyObservable::vector_field({var(1), -var(0), 0.0})});
  }
  m.expected = {true, f.variant == DiPirroVariant::kConstantC || f.gamma.is_constant(), false, false};
  m.parameters = {{"variant", to_string(f.variant)},
                  {"a", f.a.to_json()},
                  {"b", f.b.to_json()},
                  {"gamma", f.gamma.to_json()},
                  {"c", f.c.to_json()}};
  m.source = f;

  const auto probes = probe_points(chart);
  if (f.variant == DiPirroVariant::kRotational) {
    // a = b and x2 d_1 - x1 d_2 annihilates a and gamma.
    double r = 0.0, sc = 0.0;
    for (const auto& x : probes) {
      const Jet a = f.a.evaluate(x, 1), b = f.b.evaluate(x, 1), gm = f.gamma.evaluate(x, 1);
      r = std::max(r, std::abs(a.value() - b.value()));
      for (const Jet* h : {&a, &gm})
        r = std::max(r, std::abs(x[1] * h->derivative(0).value() - x[0] * h->derivative(1).value()));
      sc = std::max({sc, std::abs(a.value()), std::abs(gm.value())});
    }
    m.validation.push_back(entry("rotational symmetry", r, sc, 1e-12));
  }
  m.validation.push_back(involution_entry(m, probes));
  require_valid(m.name, m.validation);
  return m;
}

Tensor dipirro_closed_form(const DiPirroFields& f, std::span<const double> x) {
  const Jet a = f.a.evaluate(x, 0), b = f.b.evaluate(x, 0);
  const Jet gm = f.gamma.evaluate(x, 1), c = f.c.evaluate(x, 1);
  const double s = gm.value() + c.value();
  const double k = -3.0 / 16.0 * c.derivative(2).value() / (s * s * s);
  Tensor out(3, {Slot::kUp, Slot::kUp}, Jet::constant(0.0, 3, 0));
  const double c13 = k * a.value() * gm.derivative(0).value();
  const double c23 = k * b.value() * gm.derivative(1).value();
  out.at({0, 2}) = Jet::constant(c13, 3, 0);
  out.at({2, 0}) = Jet::constant(-c13, 3, 0);
  out.at({1, 2}) = Jet::constant(c23, 3, 0);
  out.at({2, 1}) = Jet::constant(-c23, 3, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Staeckel models

ModelInstance from_staeckel(std::string name, const StaeckelModel& model) {
  ModelInstance m;
  m.name = std::move(name);
  m.chart = model.chart;
  m.metric = model.metric;
  m.observables.push_back({"H", model.hamiltonian});
  for (std::size_t i = 0; i < model.closed_form_integrals.size(); ++i)
    m.observables.push_back({"I" + std::to_string(i + 1), model.closed_form_integrals[i]});
  m.expected = {true, true, true, false};
  m.parameters = {{"n", model.embedded.n()}, {"a", model.embedded.a}};
  if (model.embedded.kind == EmbeddingKind::kEllipsoid) m.parameters["harmonic"] = model.embedded.harmonic;
  m.source = model;
  m.validation.push_back(involution_entry(m, probe_points(m.chart)));
  require_valid(m.name, m.validation);
  return m;
}

}  // namespace kq
