#include "kq/geometry/geometry_jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kq/common/error.hpp"

namespace kq {

JetInverse invert(const std::vector<Jet>& m, int n) {
  std::vector<Jet> a = m;
  const Jet zero = m[0] * 0.0;
  std::vector<Jet> inv(n * n, zero);
  for (int i = 0; i < n; ++i) inv[i * n + i] += 1.0;
  Jet det = zero + 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value())) piv = r;
    }
    if (a[piv * n + col].value() == 0.0) throw SingularError("singular matrix of jets");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
      det = -det;
    }
    const Jet p = a[col * n + col];
    det *= p;
    const Jet pinv = p.reciprocal();
    for (int c = 0; c < n; ++c) {
      a[col * n + c] *= pinv;
      inv[col * n + c] *= pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a[r * n + col];
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return {std::move(inv), std::move(det)};
}

GeometryJet geometry_at(const MetricField& metric, std::span<const double> x, int depth) {
  if (depth < 0 || depth > GeometryJet::kMaxDepth) {
    throw std::invalid_argument("geometry depth must be in [0, " + std::to_string(GeometryJet::kMaxDepth) + "]");
  }
  metric.chart().require(x);
  const int n = metric.dim();
  GeometryJet geo;
  geo.n_ = n;
  geo.depth_ = depth;
  geo.point_.assign(x.begin(), x.end());
  geo.g_ = metric.components(x, depth);

  double row_product = 1.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += geo.g_[i * n + j].value() * geo.g_[i * n + j].value();
    row_product *= std::sqrt(s);
  }
  JetInverse inv;
  try {
    inv = invert(geo.g_, n);
  } catch (const SingularError&) {
    inv.determinant = geo.g_[0] * 0.0;
  }
  if (!(std::abs(inv.determinant.value()) > 1e-12 * row_product)) {
    std::ostringstream os;
    os << "singular metric at (";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << x[i];
    os << "): |det g| = " << std::abs(inv.determinant.value());
    throw SingularError(os.str());
  }
  geo.ginv_ = std::move(inv.inverse);
  geo.mu_ = sqrt(inv.determinant.value() < 0 ? -inv.determinant : inv.determinant);

  if (depth < 1) return geo;

  // dg[m][i][j] = d_m g_ij at order depth-1
  std::vector<Jet> dg(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int m = 0; m < n; ++m) dg[(m * n + i) * n + j] = dg[(m * n + j) * n + i] = geo.g_[i * n + j].derivative(m);

  const Jet zero1 = Jet::constant(0.0, n, depth - 1);
  geo.gamma_.assign(n * n * n, zero1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // Christoffel of the first kind Gamma_mij
      std::vector<Jet> first(n);
      for (int m = 0; m < n; ++m) {
        first[m] = 0.5 * (dg[(i * n + m) * n + j] + dg[(j * n + m) * n + i] - dg[(m * n + i) * n + j]);
      }
      for (int k = 0; k < n; ++k) {
        Jet s = zero1;
        for (int m = 0; m < n; ++m) s += geo.ginv_[k * n + m] * first[m];
        geo.gamma_[(k * n + i) * n + j] = s;
        geo.gamma_[(k * n + j) * n + i] = s;
      }
    }
  }
  geo.half_.assign(n, zero1);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) geo.half_[j] += 0.5 * geo.gamma(k, j, k);

  if (depth < 2) return geo;

  const Jet zero2 = Jet::constant(0.0, n, depth - 2);
  geo.riemann_.assign(n * n * n * n, zero2);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
          Jet r = geo.gamma(l, i, k).derivative(j) - geo.gamma(l, i, j).derivative(k);
          for (int m = 0; m < n; ++m) {
            r += geo.gamma(l, j, m) * geo.gamma(m, i, k) - geo.gamma(l, k, m) * geo.gamma(m, i, j);
          }
          geo.riemann_[((l * n + i) * n + j) * n + k] = r;
          geo.riemann_[((l * n + i) * n + k) * n + j] = -r;
        }
      }
    }
  }
  geo.ricci_.assign(n * n, zero2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) geo.ricci_[i * n + j] += geo.riemann(k, i, k, j);
  geo.scalar_ = zero2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geo.scalar_ += geo.ginv(i, j) * geo.ricci(i, j);
  return geo;
}

Tensor GeometryJet::metric_tensor() const {
  Tensor t(n_, {Slot::kDown, Slot::kDown}, g_[0]);
  for (int i = 0; i < n_ * n_; ++i) t[i] = g_[i];
  return t;
}

Tensor GeometryJet::inverse_metric_tensor() const {
  Tensor t(n_, {Slot::kUp, Slot::kUp}, ginv_[0]);
  for (int i = 0; i < n_ * n_; ++i) t[i] = ginv_[i];
  return t;
}

Tensor GeometryJet::ricci_tensor() const {
  if (depth_ < 2) throw std::logic_error("curvature needs geometry depth >= 2");
  Tensor t(n_, {Slot::kDown, Slot::kDown}, ricci_[0]);
  for (int i = 0; i < n_ * n_; ++i) t[i] = ricci_[i];
  return t;
}

Tensor GeometryJet::ricci_mixed() const { return raise_slot(*this, ricci_tensor(), 0); }

double GeometryJet::metric_scale() const {
  double m = 0.0;
  for (const auto& j : g_) m = std::max(m, std::abs(j.value()));
  return m;
}

Tensor covariant_derivative(const GeometryJet& geo, const Tensor& t) {
  if (geo.depth() < 1) throw std::logic_error("covariant derivative needs geometry depth >= 1");
  const int n = geo.dim();
  const int r = t.rank();
  if (t.order() < 1) throw std::logic_error("covariant derivative needs tensor jets of order >= 1");
  std::vector<Slot> slots{Slot::kDown};
  slots.insert(slots.end(), t.slots().begin(), t.slots().end());
  const int order = std::min(t.order() - 1, geo.depth() - 1);
  Tensor out(n, slots, Jet::constant(0.0, n, order));
  std::vector<int> idx(r + 1), src(r);
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    const int j = idx[0];
    std::copy(idx.begin() + 1, idx.end(), src.begin());
    Jet v = t.at(src).derivative(j);
    for (int s = 0; s < r; ++s) {
      const int a = src[s];
      for (int m = 0; m < n; ++m) {
        src[s] = m;
        if (t.slots()[s] == Slot::kUp) {
          v += geo.gamma(a, j, m) * t.at(src);
        } else {
          v -= geo.gamma(m, j, a) * t.at(src);
        }
      }
      src[s] = a;
    }
    out[f] = v;
  }
  return out;
}

Tensor cov_deriv_sym(const GeometryJet& geo, const SymTensor& s) {
  if (s.degree() > 3) throw std::invalid_argument("cov_deriv_sym supports degree <= 3");
  return covariant_derivative(geo, to_tensor(s, Slot::kUp));
}

Tensor divergence_skew(const GeometryJet& geo, const Tensor& b) {
  const int n = geo.dim();
  if (b.rank() != 2 || b.slots()[0] != Slot::kUp || b.slots()[1] != Slot::kUp) {
    throw std::invalid_argument("divergence_skew expects a contravariant 2-tensor");
  }
  const double scale = b.max_abs_value();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double asym = std::abs(b.at({i, j}).value() + b.at({j, i}).value());
      if (asym > 1e-12 * (1.0 + scale)) throw std::invalid_argument("divergence_skew input is not antisymmetric");
    }
  Tensor d = covariant_derivative(geo, b);
  Tensor out(n, {Slot::kUp}, d[0] * 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) out.at({l}) += d.at({k, k, l});
  return out;
}

namespace {

Tensor contract_slot(const GeometryJet& geo, const Tensor& t, int slot, bool raise) {
  const int n = geo.dim();
  auto slots = t.slots();
  if (slot < 0 || slot >= t.rank()) throw std::out_of_range("slot out of range");
  if (slots[slot] == (raise ? Slot::kUp : Slot::kDown)) throw std::invalid_argument("slot already has that variance");
  slots[slot] = raise ? Slot::kUp : Slot::kDown;
  Tensor out(n, slots, t[0] * 0.0);
  std::vector<int> idx(t.rank()), src(t.rank());
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.unflat(f, idx);
    src = idx;
    Jet v = out[f];
    for (int m = 0; m < n; ++m) {
      src[slot] = m;
      v += (raise ? geo.ginv(idx[slot], m) : geo.g(idx[slot], m)) * t.at(src);
    }
    out[f] = v;
  }
  return out;
}

}  // namespace

Tensor raise_slot(const GeometryJet& geo, const Tensor& t, int slot) { return contract_slot(geo, t, slot, true); }
Tensor lower_slot(const GeometryJet& geo, const Tensor& t, int slot) { return contract_slot(geo, t, slot, false); }

}  // namespace kq
