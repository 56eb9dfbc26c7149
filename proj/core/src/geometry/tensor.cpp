#include "kq/geometry/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace kq {

Tensor::Tensor(int n, std::vector<Slot> slots, const Jet& fill) : n_(n), slots_(std::move(slots)) {
  std::size_t total = 1;
  for (std::size_t r = 0; r < slots_.size(); ++r) total *= static_cast<std::size_t>(n_);
  data_.assign(total, fill);
}

std::size_t Tensor::flat(std::span<const int> idx) const {
  if (idx.size() != slots_.size()) throw std::invalid_argument("tensor index has the wrong rank");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= n_) throw std::out_of_range("tensor index out of range");
    f = f * n_ + i;
  }
  return f;
}

void Tensor::unflat(std::size_t f, std::span<int> out) const {
  for (int r = rank() - 1; r >= 0; --r) {
    out[r] = static_cast<int>(f % n_);
    f /= n_;
  }
}

double Tensor::max_abs_value() const {
  double m = 0.0;
  for (const auto& j : data_) m = std::max(m, std::abs(j.value()));
  return m;
}

int Tensor::order() const {
  int o = kMaxJetOrder;
  for (const auto& j : data_) o = std::min(o, j.order());
  return o;
}

MultisetIndex::MultisetIndex(int n, int degree) : n_(n), degree_(degree) {
  std::vector<int> cur(degree, 0);
  auto rec = [&](auto&& self, int pos, int start) -> void {
    if (pos == degree) {
      tuples_.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur[pos] = i;
      self(self, pos + 1, i);
    }
  };
  rec(rec, 0, 0);
  std::array<int, 7> fact{1, 1, 2, 6, 24, 120, 720};
  for (const auto& t : tuples_) {
    int m = fact[degree];
    for (std::size_t a = 0; a < t.size();) {
      std::size_t b = a;
      while (b < t.size() && t[b] == t[a]) ++b;
      m /= fact[b - a];
      a = b;
    }
    multiplicity_.push_back(m);
  }
  std::size_t dense = 1;
  for (int r = 0; r < degree; ++r) dense *= n;
  dense_to_set_.resize(dense);
  std::vector<int> idx(degree);
  for (std::size_t f = 0; f < dense; ++f) {
    std::size_t g = f;
    for (int r = degree - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(g % n);
      g /= n;
    }
    std::sort(idx.begin(), idx.end());
    auto it = std::lower_bound(tuples_.begin(), tuples_.end(), idx);
    dense_to_set_[f] = static_cast<std::size_t>(it - tuples_.begin());
  }
}

const MultisetIndex& MultisetIndex::get(int n, int degree) {
  if (n < 1 || n > kMaxJetDim || degree < 0 || degree > 6) {
    throw std::out_of_range("multiset index size out of range");
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<MultisetIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, degree}];
  if (!slot) slot.reset(new MultisetIndex(n, degree));
  return *slot;
}

std::size_t MultisetIndex::index_of(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != degree_) throw std::invalid_argument("multiset has the wrong size");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= n_) throw std::out_of_range("multiset index out of range");
    f = f * n_ + i;
  }
  return dense_to_set_[f];
}

SymTensor::SymTensor(int n, int degree, const Jet& fill)
    : n_(n), degree_(degree), index_(&MultisetIndex::get(n, degree)), comps_(index_->count(), fill) {}

double SymTensor::max_abs_value() const {
  double m = 0.0;
  for (const auto& j : comps_) m = std::max(m, std::abs(j.value()));
  return m;
}

int SymTensor::order() const {
  int o = kMaxJetOrder;
  for (const auto& j : comps_) o = std::min(o, j.order());
  return o;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  if (o.n_ != n_ || o.degree_ != degree_) throw std::invalid_argument("symmetric tensor shape mismatch");
  for (std::size_t m = 0; m < comps_.size(); ++m) comps_[m] += o.comps_[m];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  if (o.n_ != n_ || o.degree_ != degree_) throw std::invalid_argument("symmetric tensor shape mismatch");
  for (std::size_t m = 0; m < comps_.size(); ++m) comps_[m] -= o.comps_[m];
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

Tensor to_tensor(const SymTensor& s, Slot slot) {
  Tensor t(s.n(), std::vector<Slot>(s.degree(), slot), s[0]);
  std::vector<int> idx(s.degree());
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflat(f, idx);
    t[f] = s.at(idx);
  }
  return t;
}

SymTensor symmetrize(const Tensor& t) {
  SymTensor s(t.n(), t.rank(), t[0] * 0.0);
  std::vector<int> idx(t.rank());
  const auto& ms = s.indices();
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.unflat(f, idx);
    s.at(idx) += t[f];
  }
  for (std::size_t m = 0; m < s.size(); ++m) s[m] /= static_cast<double>(ms.multiplicity(m));
  return s;
}

}  // namespace kq
