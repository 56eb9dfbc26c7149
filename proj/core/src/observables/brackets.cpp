#include "kq/observables/brackets.hpp"

#include <algorithm>
#include <stdexcept>

#include "kq/common/error.hpp"

namespace kq {

MaxwellField::MaxwellField(std::vector<ScalarField> potential) : potential_(std::move(potential)) {}
MaxwellField::MaxwellField(FieldBundle potential) : potential_(std::move(potential)) {}

MaxwellField::At MaxwellField::evaluate(std::span<const double> x, int order) const {
  if (order < 1) throw std::invalid_argument("field strength needs potential jets of order >= 1");
  const int n = dim();
  auto a = potential_.evaluate(x, order);
  At at{Tensor(n, {Slot::kDown}, a[0]), Tensor(n, {Slot::kDown, Slot::kDown}, a[0].derivative(0) * 0.0)};
  for (int i = 0; i < n; ++i) at.A[i] = a[i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      at.F.at({i, j}) = a[j].derivative(i) - a[i].derivative(j);
      at.F.at({j, i}) = -at.F.at({i, j});
    }
  return at;
}

nlohmann::json MaxwellField::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : potential_.expressions()) j.push_back(f.to_json());
  return {{"potential", j}};
}

MaxwellField MaxwellField::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("potential") || !j.at("potential").is_array()) {
    throw ConfigError("Maxwell field needs a \"potential\" array");
  }
  std::vector<ScalarField> a;
  for (const auto& e : j.at("potential")) a.push_back(ScalarField::from_json(e));
  return MaxwellField(std::move(a));
}

double poisson_bracket_numeric(const PolyJet& p, const PolyJet& q, std::span<const double> xi) {
  const int n = p.n;
  // dP/dxi_i and dP/dx^i as values at the expansion point.
  auto partials = [&](const PolyJet& a, std::vector<double>& dxi, std::vector<double>& dx) {
    dxi.assign(n, 0.0);
    dx.assign(n, 0.0);
    for (int k = 0; k <= kMaxPolyDegree; ++k) {
      if (!a.deg[k]) continue;
      const auto& s = *a.deg[k];
      const auto& ms = s.indices();
      for (std::size_t m = 0; m < s.size(); ++m) {
        const auto t = ms.tuple(m);
        double mono = ms.multiplicity(m);
        for (int i : t) mono *= xi[i];
        if (s[m].order() < 1) throw std::logic_error("Poisson bracket needs jets of order >= 1");
        const auto grad = s[m].gradient();
        for (int i = 0; i < n; ++i) dx[i] += mono * grad[i];
        // derivative of the monomial w.r.t. each distinct xi_i
        for (std::size_t a2 = 0; a2 < t.size(); ++a2) {
          if (a2 > 0 && t[a2] == t[a2 - 1]) continue;
          double d = ms.multiplicity(m) * s[m].value();
          bool removed = false;
          for (std::size_t b = 0; b < t.size(); ++b) {
            if (!removed && t[b] == t[a2]) {
              removed = true;
              d *= static_cast<double>(std::count(t.begin(), t.end(), t[a2]));
              continue;
            }
            d *= xi[t[b]];
          }
          dxi[t[a2]] += d;
        }
      }
    }
  };
  std::vector<double> pxi, px, qxi, qx;
  partials(p, pxi, px);
  partials(q, qxi, qx);
  double r = 0.0;
  for (int i = 0; i < n; ++i) r += pxi[i] * qx[i] - qxi[i] * px[i];
  return r;
}

double poisson_bracket_numeric(const PolyObservable& p, const PolyObservable& q, const Chart& chart,
                               std::span<const double> x, std::span<const double> xi) {
  chart.require(x);
  if (static_cast<int>(xi.size()) != chart.dim()) throw std::invalid_argument("momentum has the wrong dimension");
  return poisson_bracket_numeric(p.evaluate(x, 1), q.evaluate(x, 1), xi);
}

namespace {

// sum_i P^{i a..} D_i Q^{b..} as a dense tensor over (a.., b..).
Tensor contract_first(const SymTensor& p, const Tensor& dq) {
  const int n = p.n();
  const int k = p.degree();
  const int l = dq.rank() - 1;
  const int r = k - 1 + l;
  Tensor out(n, std::vector<Slot>(r, Slot::kUp), dq[0] * p[0] * 0.0);
  std::vector<int> idx(r), pi(k), qi(l + 1);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    std::copy(idx.begin(), idx.begin() + (k - 1), pi.begin() + 1);
    std::copy(idx.begin() + (k - 1), idx.end(), qi.begin() + 1);
    Jet v = out[f];
    for (int i = 0; i < n; ++i) {
      pi[0] = i;
      qi[0] = i;
      v += p.at(pi) * dq.at(qi);
    }
    out[f] = v;
  }
  return out;
}

Tensor derivative_tensor(const SymTensor& s, const GeometryJet& geo, BracketForm form) {
  Tensor t = to_tensor(s, Slot::kUp);
  if (form == BracketForm::kCovariant) return covariant_derivative(geo, t);
  const int n = s.n();
  std::vector<Slot> slots{Slot::kDown};
  slots.insert(slots.end(), t.slots().begin(), t.slots().end());
  Tensor out(n, slots, t[0].derivative(0) * 0.0);
  std::vector<int> idx(t.rank() + 1);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    out[f] = t.at(std::span<const int>(idx.data() + 1, t.rank())).derivative(idx[0]);
  }
  return out;
}

}  // namespace

SymTensor schouten_bracket(const SymTensor& p, const SymTensor& q, const GeometryJet& geo, BracketForm form) {
  const int k = p.degree(), l = q.degree();
  if (k + l - 1 > kMaxPolyDegree) throw std::out_of_range("Schouten bracket output degree overflow");
  if (k + l == 0) throw std::invalid_argument("bracket of two functions has no tensor form");
  const int n = p.n();
  const int order = std::min(p.order(), q.order()) - 1;
  SymTensor out(n, k + l - 1, Jet::constant(0.0, n, std::max(order, 0)));
  if (order < 0) throw std::logic_error("Schouten bracket needs jets of order >= 1");
  if (k > 0) {
    SymTensor a = symmetrize(contract_first(p, derivative_tensor(q, geo, form)));
    a *= static_cast<double>(k);
    out += a;
  }
  if (l > 0) {
    SymTensor b = symmetrize(contract_first(q, derivative_tensor(p, geo, form)));
    b *= static_cast<double>(l);
    out -= b;
  }
  return out;
}

PolyJet schouten_bracket(const PolyJet& p, const PolyJet& q, const GeometryJet& geo, BracketForm form) {
  PolyJet r;
  r.n = p.n;
  for (int k = 0; k <= kMaxPolyDegree; ++k) {
    if (!p.deg[k]) continue;
    for (int l = 0; l <= kMaxPolyDegree; ++l) {
      if (!q.deg[l] || k + l == 0) continue;
      r.accumulate(k + l - 1, schouten_bracket(*p.deg[k], *q.deg[l], geo, form));
    }
  }
  return r;
}

PolyJet MaxwellBracket::total() const {
  PolyJet t = schouten;
  t += electromagnetic;
  return t;
}

MaxwellBracket schouten_maxwell_bracket(const PolyJet& p, const PolyJet& q, const Tensor& F,
                                        const GeometryJet& geo) {
  MaxwellBracket mb{schouten_bracket(p, q, geo), PolyJet{}};
  mb.electromagnetic.n = p.n;
  const int n = p.n;
  for (int k = 1; k <= kMaxPolyDegree; ++k) {
    if (!p.deg[k]) continue;
    for (int l = 1; l <= kMaxPolyDegree; ++l) {
      if (!q.deg[l]) continue;
      const int r = k + l - 2;
      if (r > kMaxPolyDegree) throw std::out_of_range("Schouten-Maxwell output degree overflow");
      const SymTensor& P = *p.deg[k];
      const SymTensor& Q = *q.deg[l];
      Tensor dense(n, std::vector<Slot>(r, Slot::kUp), P[0] * Q[0] * F[0] * 0.0);
      std::vector<int> idx(r), pi(k), qi(l);
      for (std::size_t f = 0; f < dense.size(); ++f) {
        dense.unflat(f, idx);
        std::copy(idx.begin(), idx.begin() + (k - 1), pi.begin() + 1);
        std::copy(idx.begin() + (k - 1), idx.end(), qi.begin() + 1);
        Jet v = dense[f];
        for (int i = 0; i < n; ++i) {
          pi[0] = i;
          for (int j = 0; j < n; ++j) {
            qi[0] = j;
            v += F.at({i, j}) * P.at(pi) * Q.at(qi);
          }
        }
        dense[f] = v;
      }
      SymTensor s = symmetrize(dense);
      s *= -static_cast<double>(k * l);
      mb.electromagnetic.accumulate(r, s);
    }
  }
  return mb;
}

SymTensor killing_residual(const SymTensor& s, const GeometryJet& geo) {
  if (s.degree() > 3) throw std::invalid_argument("Killing residual supports degree <= 3");
  Tensor ds = cov_deriv_sym(geo, s);
  return symmetrize(raise_slot(geo, ds, 0));
}

std::pair<SymTensor, SymTensor> killing_maxwell_residual(const SymTensor& s, const Tensor& F,
                                                         const GeometryJet& geo) {
  const int n = s.n();
  const int k = s.degree();
  if (k < 1) throw std::invalid_argument("Killing-Maxwell residual needs degree >= 1");
  // Fmix(a, j) = F^a_j = g^{am} F_mj
  Tensor fmix = raise_slot(geo, F, 0);
  Tensor dense(n, std::vector<Slot>(k, Slot::kUp), s[0] * fmix[0] * 0.0);
  std::vector<int> idx(k), si(k);
  for (std::size_t f = 0; f < dense.size(); ++f) {
    dense.unflat(f, idx);
    std::copy(idx.begin(), idx.end() - 1, si.begin() + 1);
    Jet v = dense[f];
    for (int j = 0; j < n; ++j) {
      si[0] = j;
      v += s.at(si) * fmix.at({idx[k - 1], j});
    }
    dense[f] = v;
  }
  return {killing_residual(s, geo), symmetrize(dense)};
}

namespace {

int binom(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Degree-m part of P_k(xi - A): C(k,m)(-1)^(k-m) P^{(i1..im) j..} A_j.. ,
// generic over ScalarField and Jet.
template <class T, class GetP, class GetA>
std::vector<T> shifted_component(int n, int k, int m, GetP getp, GetA geta, T zero) {
  const auto& ms = MultisetIndex::get(n, m);
  std::vector<T> out(ms.count(), zero);
  const int c = k - m;
  const double coef = binom(k, m) * ((c % 2) ? -1.0 : 1.0);
  std::vector<int> idx(k);
  for (std::size_t a = 0; a < ms.count(); ++a) {
    auto t = ms.tuple(a);
    std::copy(t.begin(), t.end(), idx.begin());
    T acc = zero;
    // sum over all (j_1..j_c) in [0,n)^c
    std::size_t total = 1;
    for (int r = 0; r < c; ++r) total *= n;
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t g = f;
      T term = getp(idx, m, g, c);
      for (int r = 0; r < c; ++r) {
        term = term * geta(idx[m + r]);
      }
      acc = acc + term;
    }
    out[a] = coef * acc;
  }
  return out;
}

}  // namespace

PolyObservable tilde_shift(const PolyObservable& p, const MaxwellField& a) {
  const int n = p.dim();
  if (a.dim() != n) throw std::invalid_argument("potential dimension does not match observable");
  if (p.degree() > 3) throw std::invalid_argument("tilde_shift supports degree <= 3");
  PolyObservable out(n);
  const bool expr = p.has_expressions() && a.potential().has_expressions();
  for (int m = 0; m <= std::max(p.degree(), 0); ++m) {
    bool present = false;
    for (int k = m; k <= 3; ++k) present = present || p.has(k);
    if (!present) continue;
    if (expr) {
      const auto& A = a.potential().expressions();
      std::vector<ScalarField> acc(MultisetIndex::get(n, m).count(), ScalarField(0.0));
      for (int k = m; k <= 3; ++k) {
        if (!p.has(k)) continue;
        const auto& ms = MultisetIndex::get(n, k);
        const auto& e = p.component(k).expressions();
        auto getp = [&](std::vector<int>& idx, int mm, std::size_t g, int c) {
          for (int r = c - 1; r >= 0; --r) {
            idx[mm + r] = static_cast<int>(g % n);
            g /= n;
          }
          return e[ms.index_of(idx)];
        };
        auto geta = [&](int j) { return A[j]; };
        auto part = shifted_component<ScalarField>(n, k, m, getp, geta, ScalarField(0.0));
        for (std::size_t q = 0; q < acc.size(); ++q) acc[q] = acc[q] + part[q];
      }
      out.set_component(m, std::move(acc));
    } else {
      out.set_component(m, FieldBundle(MultisetIndex::get(n, m).count(),
                                       [p, a, m, n](std::span<const double> x, int order) {
        PolyJet pj = p.evaluate(x, order);
        auto A = a.potential().evaluate(x, order);
        std::vector<Jet> acc(MultisetIndex::get(n, m).count(), Jet::constant(0.0, n, order));
        for (int k = m; k <= 3; ++k) {
          if (!pj.deg[k]) continue;
          const SymTensor& s = *pj.deg[k];
          auto getp = [&](std::vector<int>& idx, int mm, std::size_t g, int c) {
            for (int r = c - 1; r >= 0; --r) {
              idx[mm + r] = static_cast<int>(g % n);
              g /= n;
            }
            return s.at(idx);
          };
          auto geta = [&](int j) { return A[j]; };
          auto part = shifted_component<Jet>(n, k, m, getp, geta, Jet::constant(0.0, n, order));
          for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += part[q];
        }
        return acc;
      }));
    }
  }
  return out;
}

}  // namespace kq
