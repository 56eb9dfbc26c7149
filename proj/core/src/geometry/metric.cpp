#include "kq/geometry/metric.hpp"

#include "kq/common/error.hpp"

namespace kq {

std::string to_string(Signature s) {
  switch (s) {
    case Signature::kRiemannian: return "riemannian";
    case Signature::kLorentzian: return "lorentzian";
    case Signature::kEuclideanized: return "euclideanized";
    case Signature::kUnspecified: break;
  }
  return "unspecified";
}

Signature signature_from_string(const std::string& s) {
  if (s == "riemannian") return Signature::kRiemannian;
  if (s == "lorentzian") return Signature::kLorentzian;
  if (s == "euclideanized") return Signature::kEuclideanized;
  if (s == "unspecified") return Signature::kUnspecified;
  throw ConfigError("unknown metric signature '" + s + "'");
}

namespace {

void check_fields(const Chart& chart, const std::vector<ScalarField>& fields) {
  for (const auto& f : fields) {
    if (f.max_variable() >= chart.dim()) {
      throw ConfigError("metric component references a coordinate outside the chart");
    }
  }
}

}  // namespace

MetricField::MetricField(Chart chart, const std::vector<std::vector<ScalarField>>& g, Signature sig)
    : chart_(std::move(chart)), signature_(sig) {
  const int n = chart_.dim();
  if (static_cast<int>(g.size()) != n) throw ConfigError("metric matrix has the wrong size");
  std::vector<ScalarField> upper;
  bool diag = true;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(g[i].size()) != n) throw ConfigError("metric matrix has the wrong size");
    for (int j = i; j < n; ++j) {
      upper.push_back(g[i][j]);
      if (i != j && !g[i][j].is_zero()) diag = false;
      const auto& lower = g[j][i];
      if (i != j && lower.node() != g[i][j].node() && !lower.is_zero() &&
          !(lower.is_constant() && g[i][j].is_constant() && lower.constant_value() == g[i][j].constant_value())) {
        throw ConfigError("metric matrix is not symmetric by construction");
      }
    }
  }
  check_fields(chart_, upper);
  if (diag) {
    std::vector<ScalarField> d;
    for (int i = 0; i < n; ++i) d.push_back(g[i][i]);
    bundle_ = FieldBundle(std::move(d));
    diagonal_ = true;
  } else {
    bundle_ = FieldBundle(std::move(upper));
  }
}

MetricField::MetricField(Chart chart, FieldBundle upper, Signature sig)
    : chart_(std::move(chart)), bundle_(std::move(upper)), signature_(sig) {
  const std::size_t n = chart_.dim();
  if (bundle_.size() != n * (n + 1) / 2) throw ConfigError("upper-triangle bundle has the wrong size");
  if (bundle_.has_expressions()) check_fields(chart_, bundle_.expressions());
}

MetricField MetricField::diagonal(Chart chart, std::vector<ScalarField> diag, Signature sig) {
  check_fields(chart, diag);
  return diagonal(std::move(chart), FieldBundle(std::move(diag)), sig);
}

MetricField MetricField::diagonal(Chart chart, FieldBundle diag, Signature sig) {
  if (static_cast<int>(diag.size()) != chart.dim()) throw ConfigError("diagonal bundle has the wrong size");
  MetricField m;
  m.chart_ = std::move(chart);
  m.bundle_ = std::move(diag);
  m.diagonal_ = true;
  m.signature_ = sig;
  return m;
}

std::vector<Jet> MetricField::components(std::span<const double> x, int order) const {
  const int n = dim();
  auto c = bundle_.evaluate(x, order);
  std::vector<Jet> g(n * n);
  if (diagonal_) {
    const Jet zero = c[0] * 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[i * n + j] = i == j ? c[i] : zero;
    return g;
  }
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) g[i * n + j] = g[j * n + i] = c[k];
  return g;
}

ScalarField MetricField::expression(int i, int j) const {
  const auto& e = bundle_.expressions();
  const int n = dim();
  if (diagonal_) return i == j ? e[i] : ScalarField(0.0);
  if (i > j) std::swap(i, j);
  return e[i * n - i * (i - 1) / 2 + (j - i)];
}

nlohmann::json MetricField::to_json() const {
  nlohmann::json j;
  j["chart"] = chart_.to_json();
  j["signature"] = to_string(signature_);
  const int n = dim();
  if (diagonal_) {
    j["diagonal"] = nlohmann::json::array();
    for (int i = 0; i < n; ++i) j["diagonal"].push_back(expression(i, i).to_json());
  } else {
    j["components"] = nlohmann::json::array();
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) j["components"].push_back({{"i", i}, {"j", k}, {"expr", expression(i, k).to_json()}});
  }
  return j;
}

MetricField MetricField::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("chart")) throw ConfigError("metric needs a \"chart\"");
  Chart chart = Chart::from_json(j.at("chart"));
  const Signature sig = j.contains("signature") ? signature_from_string(j.at("signature").get<std::string>())
                                                : Signature::kUnspecified;
  const int n = chart.dim();
  if (j.contains("diagonal")) {
    const auto& d = j.at("diagonal");
    if (!d.is_array() || static_cast<int>(d.size()) != n) throw ConfigError("diagonal needs one entry per coordinate");
    std::vector<ScalarField> diag;
    for (const auto& e : d) diag.push_back(ScalarField::from_json(e));
    return diagonal(std::move(chart), std::move(diag), sig);
  }
  if (!j.contains("components") || !j.at("components").is_array()) {
    throw ConfigError("metric needs \"diagonal\" or \"components\"");
  }
  std::vector<std::vector<ScalarField>> g(n, std::vector<ScalarField>(n, ScalarField(0.0)));
  for (const auto& c : j.at("components")) {
    const int a = c.at("i").get<int>(), b = c.at("j").get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n) throw ConfigError("metric component index out of range");
    g[a][b] = g[b][a] = ScalarField::from_json(c.at("expr"));
  }
  return MetricField(std::move(chart), g, sig);
}

}  // namespace kq
