#include "kq/opalg/diff_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kq/common/error.hpp"
#include "kq/jets/multi_index.hpp"

namespace kq {

namespace {

bool is_zero(const Jet& j) {
  for (double v : j.coefficients())
    if (v != 0.0) return false;
  return true;
}

bool is_zero(const ComplexJet& c) { return is_zero(c.re) && is_zero(c.im); }

ComplexJet trunc(const ComplexJet& c, int order) {
  return {c.re.truncated(std::min(order, c.re.order())), c.im.truncated(std::min(order, c.im.order()))};
}

ComplexJet zero_complex(int n, int order) {
  Jet z = Jet::constant(0.0, n, order);
  return {z, z};
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<int> tuple_to_alpha(int n, std::span<const int> tuple) {
  std::vector<int> alpha(n, 0);
  for (int i : tuple) {
    if (i < 0 || i >= n) throw std::out_of_range("operator index out of range");
    ++alpha[i];
  }
  return alpha;
}

}  // namespace

DiffOperator::DiffOperator(int n, int order, int jet_order, Trivialization triv)
    : n_(n), order_(order), triv_(triv) {
  if (order < 0 || order > kMaxOrder) throw DomainError("operator order overflow", order);
  if (jet_order < 0 || jet_order > kMaxJetOrder) throw DomainError("operator jet order out of range", jet_order);
  c_.assign(MultiIndexTable::get(n).count(order), zero_complex(n, jet_order));
}

DiffOperator DiffOperator::identity(int n, int jet_order, Trivialization triv) {
  DiffOperator op(n, 0, jet_order, triv);
  op.c_[0].re += 1.0;
  return op;
}

DiffOperator DiffOperator::multiplication(const ComplexJet& c, Trivialization triv) {
  DiffOperator op(c.re.dim(), 0, c.order(), triv);
  op.c_[0] = c;
  return op;
}

DiffOperator DiffOperator::multiplication(const Jet& c, Trivialization triv) {
  return multiplication(ComplexJet::real(c), triv);
}

DiffOperator DiffOperator::partial(std::span<const int> beta, int jet_order, Trivialization triv) {
  int k = 0;
  for (int b : beta) k += b;
  DiffOperator op(static_cast<int>(beta.size()), k, jet_order, triv);
  op.coefficient(beta).re += 1.0;
  return op;
}

DiffOperator DiffOperator::partial(int n, int i, int jet_order, Trivialization triv) {
  std::vector<int> beta(n, 0);
  beta.at(i) = 1;
  return partial(beta, jet_order, triv);
}

int DiffOperator::jet_order() const {
  int m = kMaxJetOrder;
  for (const auto& c : c_) m = std::min(m, c.order());
  return m;
}

std::span<const int> DiffOperator::multi_index(std::size_t idx) const {
  return MultiIndexTable::get(n_).alpha(idx);
}

ComplexJet& DiffOperator::coefficient(std::span<const int> beta) {
  const int idx = MultiIndexTable::get(n_).index_of(beta);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size())
    throw std::out_of_range("multi-index exceeds operator order");
  return c_[idx];
}

const ComplexJet& DiffOperator::coefficient(std::span<const int> beta) const {
  return const_cast<DiffOperator*>(this)->coefficient(beta);
}

ComplexJet DiffOperator::symmetric_component(std::span<const int> tuple) const {
  const auto alpha = tuple_to_alpha(n_, tuple);
  double mult = 1.0;
  int k = 0;
  for (int a : alpha) {
    k += a;
    mult *= binomial(k, a);
  }
  if (k > order_) return zero_complex(n_, jet_order());
  return coefficient(alpha) * (1.0 / mult);
}

void DiffOperator::add_term(std::span<const int> tuple, const ComplexJet& c) {
  coefficient(tuple_to_alpha(n_, tuple)) += c;
}

int DiffOperator::effective_order(double tol) const {
  const auto& table = MultiIndexTable::get(n_);
  int k = -1;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i].max_abs_value() > tol) k = std::max(k, table.degree(i));
  return k;
}

double DiffOperator::max_abs_value() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, c.max_abs_value());
  return m;
}

void DiffOperator::check_compatible(const DiffOperator& o) const {
  if (n_ != o.n_) throw std::invalid_argument("operator dimensions differ");
  if (triv_ != o.triv_) throw std::invalid_argument("operator trivializations differ");
}

DiffOperator DiffOperator::raised_to(int order) const {
  if (order <= order_) return *this;
  DiffOperator out(n_, order, jet_order(), triv_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i];
  return out;
}

DiffOperator& DiffOperator::operator+=(const DiffOperator& o) {
  check_compatible(o);
  if (o.order_ > order_) *this = raised_to(o.order_);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

DiffOperator& DiffOperator::operator-=(const DiffOperator& o) { return *this += -o; }

DiffOperator& DiffOperator::operator*=(double s) {
  for (auto& c : c_) c = c * s;
  return *this;
}

DiffOperator DiffOperator::operator-() const {
  DiffOperator out = *this;
  for (auto& c : out.c_) c = -c;
  return out;
}

DiffOperator DiffOperator::times_i() const {
  DiffOperator out = *this;
  for (auto& c : out.c_) c = c.times_i();
  return out;
}

DiffOperator DiffOperator::truncated(int jet_order) const {
  DiffOperator out = *this;
  for (auto& c : out.c_) c = trunc(c, jet_order);
  return out;
}

ComplexJet DiffOperator::apply(const Jet& f) const {
  if (f.order() < order_) throw DomainError("test function jet order below operator order", f.order());
  const int out_order = std::min(jet_order(), f.order() - order_);
  ComplexJet out = zero_complex(n_, out_order);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (is_zero(c_[i])) continue;
    out += c_[i] * ComplexJet::real(f.derivative(multi_index(i)));
  }
  return out;
}

DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
DiffOperator operator-(DiffOperator a, const DiffOperator& b) { return a -= b; }
DiffOperator operator*(double s, DiffOperator a) { return a *= s; }

DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  if (a.trivialization() != b.trivialization()) throw std::invalid_argument("operator trivializations differ");
  const int order = a.order() + b.order();
  if (order > DiffOperator::kMaxOrder) throw DomainError("composed operator order overflow", order);
  const int jet = std::min(a.jet_order(), b.jet_order() - a.order());
  if (jet < 0) throw DomainError("insufficient coefficient jet order for composition", b.jet_order());

  const int n = a.dim();
  const auto& table = MultiIndexTable::get(n);
  const std::size_t na = table.count(a.order());
  const std::size_t nb = table.count(b.order());

  // Derivatives d^gamma of B's coefficients for |gamma| <= order(A).
  std::vector<std::vector<ComplexJet>> db(na);
  std::vector<bool> b_zero(nb);
  for (std::size_t bi = 0; bi < nb; ++bi) b_zero[bi] = is_zero(b[bi]);
  for (std::size_t g = 0; g < na; ++g) {
    db[g].resize(nb);
    const auto gamma = table.alpha(g);
    for (std::size_t bi = 0; bi < nb; ++bi) {
      if (b_zero[bi]) continue;
      db[g][bi] = trunc(b[bi].derivative(gamma), jet);
    }
  }

  DiffOperator out(n, order, jet, a.trivialization());
  std::vector<int> target(n);
  for (std::size_t ai = 0; ai < na; ++ai) {
    if (is_zero(a[ai])) continue;
    const auto alpha = table.alpha(ai);
    for (std::size_t g = 0; g <= ai && g < na; ++g) {
      const auto gamma = table.alpha(g);
      double coef = 1.0;
      bool contained = true;
      for (int i = 0; i < n && contained; ++i) {
        if (gamma[i] > alpha[i]) contained = false;
        else coef *= binomial(alpha[i], gamma[i]);
      }
      if (!contained) continue;
      for (std::size_t bi = 0; bi < nb; ++bi) {
        if (b_zero[bi]) continue;
        const auto beta = table.alpha(bi);
        for (int i = 0; i < n; ++i) target[i] = alpha[i] - gamma[i] + beta[i];
        out.coefficient(target) += (a[ai] * db[g][bi]) * coef;
      }
    }
  }
  return out;
}

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) {
  return compose(a, b) - compose(b, a);
}

namespace {

Jet pairing_weight(const DiffOperator& a, const GeometryJet& geo, int order) {
  if (a.trivialization() == Trivialization::kCoordinate) return Jet::constant(1.0, a.dim(), order);
  return geo.volume().truncated(std::min(order, geo.volume().order()));
}

}  // namespace

DiffOperator formal_adjoint(const DiffOperator& a, const GeometryJet& geo) {
  if (a.order() > 4) throw DomainError("formal adjoint supports operator order <= 4", a.order());
  if (geo.dim() != a.dim()) throw std::invalid_argument("geometry dimension differs from operator");
  const int n = a.dim();
  const Jet w = pairing_weight(a, geo, kMaxJetOrder);
  if (w.order() < a.order()) throw DomainError("geometry depth below operator order", geo.depth());
  const Jet winv = w.reciprocal();
  const auto triv = a.trivialization();

  DiffOperator sum(n, a.order(), kMaxJetOrder, triv);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    const auto beta = a.multi_index(i);
    int k = 0;
    for (int b : beta) k += b;
    const ComplexJet wc = w * a[i].conj();
    DiffOperator term = compose(DiffOperator::partial(beta, kMaxJetOrder, triv), DiffOperator::multiplication(wc, triv));
    if (k % 2 == 1) term *= -1.0;
    sum += term;
  }
  return compose(DiffOperator::multiplication(winv, triv), sum);
}

DiffOperator conjugate(const DiffOperator& a, const Jet& h) {
  const auto triv = a.trivialization();
  return compose(compose(DiffOperator::multiplication(h, triv), a),
                 DiffOperator::multiplication(h.reciprocal(), triv));
}

DiffOperator change_trivialization(const DiffOperator& a, const GeometryJet& geo, Trivialization target) {
  if (a.trivialization() == target) return a;
  const Jet root = sqrt(geo.volume());
  // A f-operator becomes an F-operator through F = f mu^{1/2}.
  DiffOperator out(a.dim(), a.order(), a.jet_order(), target);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  if (target == Trivialization::kCoordinate) return conjugate(out, root);
  return conjugate(out, root.reciprocal());
}

double max_coefficient_difference(const DiffOperator& a, const DiffOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  const std::size_t na = a.size(), nb = b.size();
  double m = 0.0;
  for (std::size_t i = 0; i < std::max(na, nb); ++i) {
    double re = 0.0, im = 0.0;
    if (i < na) {
      re += a[i].re.value();
      im += a[i].im.value();
    }
    if (i < nb) {
      re -= b[i].re.value();
      im -= b[i].im.value();
    }
    m = std::max({m, std::abs(re), std::abs(im)});
  }
  return m;
}

}  // namespace kq
