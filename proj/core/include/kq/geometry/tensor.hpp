#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "kq/jets/jet.hpp"

namespace kq {

enum class Slot : std::uint8_t { kUp, kDown };

/// Dense tensor of jets, row-major over its slots.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, std::vector<Slot> slots, const Jet& fill);

  int n() const { return n_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return data_.size(); }

  Jet& operator[](std::size_t flat) { return data_[flat]; }
  const Jet& operator[](std::size_t flat) const { return data_[flat]; }
  Jet& at(std::initializer_list<int> idx) { return data_[flat(idx)]; }
  const Jet& at(std::initializer_list<int> idx) const { return data_[flat(idx)]; }
  Jet& at(std::span<const int> idx) { return data_[flat(idx)]; }
  const Jet& at(std::span<const int> idx) const { return data_[flat(idx)]; }

  std::size_t flat(std::span<const int> idx) const;
  std::size_t flat(std::initializer_list<int> idx) const {
    return flat(std::span<const int>(idx.begin(), idx.size()));
  }
  void unflat(std::size_t f, std::span<int> out) const;

  /// Largest |value part| over components.
  double max_abs_value() const;
  /// Smallest jet order over components.
  int order() const;

 private:
  int n_ = 0;
  std::vector<Slot> slots_;
  std::vector<Jet> data_;
};

/// Enumeration of index multisets (non-decreasing tuples) of a given size.
class MultisetIndex {
 public:
  static const MultisetIndex& get(int n, int degree);

  int n() const { return n_; }
  int degree() const { return degree_; }
  std::size_t count() const { return tuples_.size(); }
  std::span<const int> tuple(std::size_t m) const {
    return {tuples_[m].data(), tuples_[m].size()};
  }
  /// Index of the multiset of idx (any order).
  std::size_t index_of(std::span<const int> idx) const;
  /// Number of distinct orderings of the multiset.
  int multiplicity(std::size_t m) const { return multiplicity_[m]; }

 private:
  MultisetIndex(int n, int degree);
  int n_, degree_;
  std::vector<std::vector<int>> tuples_;
  std::vector<int> multiplicity_;
  std::vector<std::size_t> dense_to_set_;  // dense row-major index -> multiset
};

/// Totally symmetric contravariant tensor, one jet per index multiset.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int n, int degree, const Jet& fill);

  int n() const { return n_; }
  int degree() const { return degree_; }
  std::size_t size() const { return comps_.size(); }
  const MultisetIndex& indices() const { return *index_; }

  Jet& operator[](std::size_t m) { return comps_[m]; }
  const Jet& operator[](std::size_t m) const { return comps_[m]; }
  Jet& at(std::span<const int> idx) { return comps_[index_->index_of(idx)]; }
  const Jet& at(std::span<const int> idx) const { return comps_[index_->index_of(idx)]; }
  Jet& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const Jet& at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  double max_abs_value() const;
  int order() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

 private:
  int n_ = 0;
  int degree_ = 0;
  const MultisetIndex* index_ = nullptr;
  std::vector<Jet> comps_;
};

/// Expands to a dense tensor with all slots of the given variance.
Tensor to_tensor(const SymTensor& s, Slot slot = Slot::kUp);
/// Total symmetrization (average over index orderings) of a dense tensor.
SymTensor symmetrize(const Tensor& t);

}  // namespace kq
