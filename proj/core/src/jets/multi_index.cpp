#include "kq/jets/multi_index.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace kq {
namespace {

void enumerate_degree(int dim, int degree, std::vector<int>& current, int slot,
                      std::vector<int>& out) {
  if (slot == dim - 1) {
    current[slot] = degree;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int k = degree; k >= 0; --k) {
    current[slot] = k;
    enumerate_degree(dim, degree - k, current, slot + 1, out);
  }
}

std::uint64_t encode(std::span<const int> alpha) {
  std::uint64_t key = 0;
  for (int a : alpha) key = key * (kMaxJetOrder + 1) + static_cast<std::uint64_t>(a);
  return key;
}

}  // namespace

MultiIndexTable::MultiIndexTable(int dim) : dim_(dim) {
  count_.resize(kMaxJetOrder + 1);
  std::vector<int> current(dim, 0);
  for (int t = 0; t <= kMaxJetOrder; ++t) {
    if (dim == 0) {
      if (t == 0) alphas_.clear();
    } else {
      enumerate_degree(dim, t, current, 0, alphas_);
    }
    count_[t] = dim == 0 ? 1 : alphas_.size() / dim;
  }
  const std::size_t n = count_[kMaxJetOrder];
  degree_.resize(n);
  factorial_.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    auto a = alpha(idx);
    int deg = 0;
    double fact = 1.0;
    for (int v : a) {
      deg += v;
      for (int k = 2; k <= v; ++k) fact *= k;
    }
    degree_[idx] = deg;
    factorial_[idx] = fact;
    index_.emplace(encode(a), static_cast<int>(idx));
  }
  raise_.assign(n * dim, -1);
  std::vector<int> tmp(dim);
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (degree_[idx] == kMaxJetOrder) continue;
    auto a = alpha(idx);
    for (int i = 0; i < dim; ++i) {
      tmp.assign(a.begin(), a.end());
      ++tmp[i];
      raise_[idx * dim + i] = index_.at(encode(tmp));
    }
  }
  // Product pairs grouped by the index of the sum.
  std::vector<std::vector<Pair>> by_sum(n);
  for (std::size_t ia = 0; ia < n; ++ia) {
    for (std::size_t ib = 0; ib < n; ++ib) {
      if (degree_[ia] + degree_[ib] > kMaxJetOrder) continue;
      auto a = alpha(ia);
      auto b = alpha(ib);
      for (int i = 0; i < dim; ++i) tmp[i] = a[i] + b[i];
      const int ic = index_.at(encode(tmp));
      by_sum[ic].push_back({static_cast<std::uint32_t>(ia), static_cast<std::uint32_t>(ib)});
    }
  }
  pair_offset_.resize(n + 1, 0);
  for (std::size_t c = 0; c < n; ++c) {
    pair_offset_[c + 1] = pair_offset_[c] + by_sum[c].size();
    pairs_.insert(pairs_.end(), by_sum[c].begin(), by_sum[c].end());
  }
}

int MultiIndexTable::index_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) {
    throw std::invalid_argument("multi-index has wrong length");
  }
  int deg = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("negative multi-index entry");
    deg += a;
  }
  if (deg > kMaxJetOrder) return -1;
  auto it = index_.find(encode(alpha));
  return it == index_.end() ? -1 : it->second;
}

const MultiIndexTable& MultiIndexTable::get(int dim) {
  if (dim < 1 || dim > kMaxJetDim) {
    throw std::invalid_argument("jet dimension must be in [1, " +
                                std::to_string(kMaxJetDim) + "], got " +
                                std::to_string(dim));
  }
  static std::array<std::once_flag, kMaxJetDim + 1> flags;
  static std::array<std::unique_ptr<MultiIndexTable>, kMaxJetDim + 1> tables;
  std::call_once(flags[dim], [dim] {
    tables[dim].reset(new MultiIndexTable(dim));
  });
  return *tables[dim];
}

}  // namespace kq
