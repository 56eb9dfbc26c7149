#include "kq/observables/poly_observable.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kq/common/error.hpp"

namespace kq {

int PolyJet::max_degree() const {
  for (int k = kMaxPolyDegree; k >= 0; --k)
    if (deg[k]) return k;
  return -1;
}

double PolyJet::value(std::span<const double> xi) const {
  double total = 0.0;
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!deg[k]) continue;
    const auto& s = *deg[k];
    const auto& ms = s.indices();
    for (std::size_t m = 0; m < s.size(); ++m) {
      double mono = ms.multiplicity(m);
      for (int i : ms.tuple(m)) mono *= xi[i];
      total += mono * s[m].value();
    }
  }
  return total;
}

double PolyJet::max_abs_value() const {
  double m = 0.0;
  for (const auto& d : deg)
    if (d) m = std::max(m, d->max_abs_value());
  return m;
}

int PolyJet::order() const {
  int o = kMaxJetOrder;
  for (const auto& d : deg)
    if (d) o = std::min(o, d->order());
  return o;
}

void PolyJet::accumulate(int k, const SymTensor& s) {
  if (k < 0 || k > kMaxPolyDegree) throw std::out_of_range("polynomial degree overflow");
  if (deg[k]) {
    *deg[k] += s;
  } else {
    deg[k] = s;
  }
}

PolyJet& PolyJet::operator+=(const PolyJet& o) {
  for (int k = 0; k <= kMaxPolyDegree; ++k)
    if (o.deg[k]) accumulate(k, *o.deg[k]);
  return *this;
}

PolyJet& PolyJet::operator-=(const PolyJet& o) {
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!o.deg[k]) continue;
    SymTensor neg = *o.deg[k];
    neg *= -1.0;
    accumulate(k, neg);
  }
  return *this;
}

PolyJet& PolyJet::operator*=(double s) {
  for (auto& d : deg)
    if (d) *d *= s;
  return *this;
}

PolyObservable::PolyObservable(int n) : n_(n) {
  if (n < 1 || n > kMaxJetDim) throw std::invalid_argument("observable dimension out of range");
}

int PolyObservable::degree() const {
  for (int k = kMaxPolyDegree; k >= 0; --k)
    if (comps_[k]) return k;
  return -1;
}

const FieldBundle& PolyObservable::component(int k) const {
  if (!has(k)) throw std::out_of_range("observable has no degree-" + std::to_string(k) + " component");
  return *comps_[k];
}

bool PolyObservable::has_expressions() const {
  for (const auto& c : comps_)
    if (c && !c->has_expressions()) return false;
  return true;
}

PolyObservable& PolyObservable::set_component(int k, FieldBundle fields) {
  if (k < 0 || k > kMaxPolyDegree) throw std::out_of_range("polynomial degree overflow");
  if (fields.size() != MultisetIndex::get(n_, k).count()) {
    throw ConfigError("degree-" + std::to_string(k) + " component needs one field per index multiset");
  }
  if (fields.has_expressions()) {
    for (const auto& f : fields.expressions())
      if (f.max_variable() >= n_) throw ConfigError("observable field references a coordinate outside the chart");
  }
  comps_[k] = std::move(fields);
  return *this;
}

PolyObservable& PolyObservable::set_component(int k, std::vector<ScalarField> fields) {
  return set_component(k, FieldBundle(std::move(fields)));
}

PolyObservable& PolyObservable::clear_component(int k) {
  comps_.at(k).reset();
  return *this;
}

ScalarField PolyObservable::expression(int k, std::span<const int> idx) const {
  if (!has(k)) return 0.0;
  return component(k).expressions()[MultisetIndex::get(n_, k).index_of(idx)];
}

PolyJet PolyObservable::evaluate(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension does not match observable");
  PolyJet pj;
  pj.n = n_;
  FieldEvaluator shared(x, order);
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!comps_[k]) continue;
    SymTensor s(n_, k, Jet::constant(0.0, n_, order));
    if (comps_[k]->has_expressions()) {
      const auto& e = comps_[k]->expressions();
      for (std::size_t m = 0; m < e.size(); ++m) s[m] = shared(e[m]);
    } else {
      auto jets = comps_[k]->evaluate(x, order);
      for (std::size_t m = 0; m < jets.size(); ++m) s[m] = std::move(jets[m]);
    }
    pj.deg[k] = std::move(s);
  }
  return pj;
}

double PolyObservable::value(std::span<const double> x, std::span<const double> xi) const {
  return evaluate(x, 0).value(xi);
}

nlohmann::json PolyObservable::to_json() const {
  nlohmann::json j;
  j["dim"] = n_;
  j["components"] = nlohmann::json::object();
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!comps_[k]) continue;
    const auto& ms = MultisetIndex::get(n_, k);
    const auto& e = comps_[k]->expressions();
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t m = 0; m < e.size(); ++m) {
      if (e[m].is_zero()) continue;
      auto t = ms.tuple(m);
      list.push_back({{"index", std::vector<int>(t.begin(), t.end())}, {"expr", e[m].to_json()}});
    }
    j["components"][std::to_string(k)] = list;
  }
  return j;
}

PolyObservable PolyObservable::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("components")) {
    throw ConfigError("observable needs \"dim\" and \"components\"");
  }
  PolyObservable p(j.at("dim").get<int>());
  for (const auto& [key, list] : j.at("components").items()) {
    int k = -1;
    try {
      k = std::stoi(key);
    } catch (const std::exception&) {
      throw ConfigError("observable degree key '" + key + "' is not an integer");
    }
    if (k < 0 || k > kMaxPolyDegree) throw ConfigError("observable degree out of range");
    const auto& ms = MultisetIndex::get(p.n_, k);
    std::vector<ScalarField> fields(ms.count(), ScalarField(0.0));
    for (const auto& c : list) {
      auto idx = c.at("index").get<std::vector<int>>();
      if (static_cast<int>(idx.size()) != k) throw ConfigError("component index has the wrong length");
      for (int i : idx)
        if (i < 0 || i >= p.n_) throw ConfigError("component index out of range");
      fields[ms.index_of(idx)] = ScalarField::from_json(c.at("expr"));
    }
    p.set_component(k, std::move(fields));
  }
  return p;
}

PolyObservable PolyObservable::momentum(int n, int i) {
  PolyObservable p(n);
  std::vector<ScalarField> f(n, ScalarField(0.0));
  f.at(i) = 1.0;
  return p.set_component(1, std::move(f));
}

PolyObservable PolyObservable::function(int n, ScalarField f) {
  PolyObservable p(n);
  return p.set_component(0, std::vector<ScalarField>{std::move(f)});
}

PolyObservable PolyObservable::vector_field(std::vector<ScalarField> X) {
  PolyObservable p(static_cast<int>(X.size()));
  return p.set_component(1, std::move(X));
}

PolyObservable PolyObservable::quadratic(std::vector<std::vector<ScalarField>> P) {
  const int n = static_cast<int>(P.size());
  PolyObservable p(n);
  const auto& ms = MultisetIndex::get(n, 2);
  std::vector<ScalarField> f(ms.count());
  for (std::size_t m = 0; m < ms.count(); ++m) f[m] = P[ms.tuple(m)[0]][ms.tuple(m)[1]];
  return p.set_component(2, std::move(f));
}

namespace {

FieldBundle combine(const FieldBundle& a, double sa, const FieldBundle& b, double sb) {
  if (a.has_expressions() && b.has_expressions()) {
    std::vector<ScalarField> f(a.size());
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = sa * a.expressions()[m] + sb * b.expressions()[m];
    return FieldBundle(std::move(f));
  }
  return FieldBundle(a.size(), [a, b, sa, sb](std::span<const double> x, int order) {
    auto ja = a.evaluate(x, order), jb = b.evaluate(x, order);
    for (std::size_t m = 0; m < ja.size(); ++m) ja[m] = sa * ja[m] + sb * jb[m];
    return ja;
  });
}

FieldBundle scaled(const FieldBundle& a, double s) {
  if (a.has_expressions()) {
    std::vector<ScalarField> f(a.size());
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = s * a.expressions()[m];
    return FieldBundle(std::move(f));
  }
  return FieldBundle(a.size(), [a, s](std::span<const double> x, int order) {
    auto j = a.evaluate(x, order);
    for (auto& v : j) v *= s;
    return j;
  });
}

}  // namespace

PolyObservable operator+(const PolyObservable& a, const PolyObservable& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("observable dimension mismatch");
  PolyObservable r(a.n_);
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (a.comps_[k] && b.comps_[k]) {
      r.comps_[k] = combine(*a.comps_[k], 1.0, *b.comps_[k], 1.0);
    } else if (a.comps_[k]) {
      r.comps_[k] = a.comps_[k];
    } else if (b.comps_[k]) {
      r.comps_[k] = b.comps_[k];
    }
  }
  return r;
}

PolyObservable operator*(double s, const PolyObservable& a) {
  PolyObservable r(a.n_);
  for (int k = 0; k <= kMaxPolyDegree; ++k)
    if (a.comps_[k]) r.comps_[k] = scaled(*a.comps_[k], s);
  return r;
}

PolyObservable operator*(const PolyObservable& a, const PolyObservable& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("observable dimension mismatch");
  if (a.degree() + b.degree() > kMaxPolyDegree) throw std::out_of_range("product degree overflow");
  PolyObservable r(a.n_);
  for (int d = 0; d <= a.degree() + b.degree(); ++d) {
    bool present = false;
    for (int k = 0; k <= d; ++k) present = present || (a.has(k) && b.has(d - k));
    if (!present) continue;
    r.comps_[d] = FieldBundle(MultisetIndex::get(a.n_, d).count(), [a, b, d](std::span<const double> x, int order) {
      PolyJet pj = product(a.evaluate(x, order), b.evaluate(x, order));
      const auto& s = *pj.deg[d];
      std::vector<Jet> out(s.size());
      for (std::size_t m = 0; m < s.size(); ++m) out[m] = s[m];
      return out;
    });
  }
  return r;
}

SymTensor symmetric_product(const SymTensor& p, const SymTensor& q) {
  const int n = p.n();
  const int k = p.degree(), l = q.degree();
  Tensor dense(n, std::vector<Slot>(k + l, Slot::kUp), p[0] * q[0] * 0.0);
  std::vector<int> idx(k + l);
  for (std::size_t f = 0; f < dense.size(); ++f) {
    dense.unflat(f, idx);
    dense[f] = p.at(std::span<const int>(idx.data(), k)) * q.at(std::span<const int>(idx.data() + k, l));
  }
  return symmetrize(dense);
}

PolyJet product(const PolyJet& p, const PolyJet& q) {
  PolyJet r;
  r.n = p.n;
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!p.deg[k]) continue;
    for (int l = 0; l + k <= kMaxPolyDegree; ++l) {
      if (!q.deg[l]) continue;
      r.accumulate(k + l, symmetric_product(*p.deg[k], *q.deg[l]));
    }
  }
  return r;
}

}  // namespace kq
