#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace kq {

// Upper bound on jet truncation order. Metric jets rarely need more than 4;
// the operator oracle composes second-order operators and needs up to 6.
inline constexpr int kMaxJetOrder = 6;
inline constexpr int kMaxJetDim = 8;

// Graded enumeration of the multi-indices alpha in N^dim with |alpha| <= 6.
// Indices of total degree t precede those of degree t+1, so the coefficients
// of a jet truncated at order k form a prefix of the coefficients at any
// higher order.
class MultiIndexTable {
 public:
  static const MultiIndexTable& get(int dim);

  int dim() const { return dim_; }

  // Number of multi-indices with |alpha| <= order, i.e. binomial(dim+order, order).
  std::size_t count(int order) const { return count_[order]; }

  std::span<const int> alpha(std::size_t idx) const {
    return {alphas_.data() + idx * dim_, static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }
  double factorial(std::size_t idx) const { return factorial_[idx]; }

  // Index of alpha + e_i, or -1 when that exceeds kMaxJetOrder.
  int raise(std::size_t idx, int i) const { return raise_[idx * dim_ + i]; }

  // Index of alpha, or -1 if |alpha| > kMaxJetOrder.
  int index_of(std::span<const int> alpha) const;

  // All (a, b) with alpha_a + alpha_b = alpha_c, grouped by c.
  struct Pair {
    std::uint32_t a;
    std::uint32_t b;
  };
  std::span<const Pair> products_of(std::size_t c) const {
    return {pairs_.data() + pair_offset_[c], pair_offset_[c + 1] - pair_offset_[c]};
  }

 private:
  explicit MultiIndexTable(int dim);

  int dim_;
  std::vector<std::size_t> count_;
  std::vector<int> alphas_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<int> raise_;
  std::vector<Pair> pairs_;
  std::vector<std::size_t> pair_offset_;
  std::unordered_map<std::uint64_t, int> index_;
};

}  // namespace kq
