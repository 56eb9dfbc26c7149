#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kq/geometry/geometry_jet.hpp"
#include "kq/jets/complex_jet.hpp"

namespace kq {

/// Which scalar function a half-density operator acts on. With
/// kMetricVolume the operator acts on f where phi = f |vol_g|^{1/2}; with
/// kCoordinate on F where phi = F |dx|^{1/2}.
enum class Trivialization { kMetricVolume, kCoordinate };

/// Linear differential operator Sum_beta c_beta d^beta at a chart point.
///
/// Coefficients are complex jets indexed by multi-index beta (graded
/// MultiIndexTable order), |beta| <= order. The symmetric tensor form
/// c^{i1..ik} d_i1..d_ik relates to this by c_beta = multiplicity * c^{(beta)}.
class DiffOperator {
 public:
  static constexpr int kMaxOrder = 6;

  DiffOperator() = default;
  /// Zero operator whose coefficients are jets of the given order.
  DiffOperator(int n, int order, int jet_order, Trivialization triv = Trivialization::kMetricVolume);

  static DiffOperator identity(int n, int jet_order, Trivialization triv = Trivialization::kMetricVolume);
  static DiffOperator multiplication(const ComplexJet& c, Trivialization triv = Trivialization::kMetricVolume);
  static DiffOperator multiplication(const Jet& c, Trivialization triv = Trivialization::kMetricVolume);
  /// d^beta with constant unit coefficient.
  static DiffOperator partial(std::span<const int> beta, int jet_order,
                              Trivialization triv = Trivialization::kMetricVolume);
  /// d_i.
  static DiffOperator partial(int n, int i, int jet_order, Trivialization triv = Trivialization::kMetricVolume);

  int dim() const { return n_; }
  int order() const { return order_; }
  /// Smallest truncation order over the coefficient jets.
  int jet_order() const;
  Trivialization trivialization() const { return triv_; }
  std::size_t size() const { return c_.size(); }

  ComplexJet& operator[](std::size_t idx) { return c_[idx]; }
  const ComplexJet& operator[](std::size_t idx) const { return c_[idx]; }
  std::span<const int> multi_index(std::size_t idx) const;

  /// Coefficient of d^beta; beta must have |beta| <= order.
  ComplexJet& coefficient(std::span<const int> beta);
  const ComplexJet& coefficient(std::span<const int> beta) const;
  /// Symmetric tensor component c^{i1..ik} for an index tuple.
  ComplexJet symmetric_component(std::span<const int> tuple) const;
  /// Adds the term c d_i1 .. d_ik.
  void add_term(std::span<const int> tuple, const ComplexJet& c);

  /// Highest k with a coefficient whose value exceeds tol, -1 for zero.
  int effective_order(double tol = 0.0) const;
  /// Largest |value| of the real and imaginary coefficient parts.
  double max_abs_value() const;

  DiffOperator& operator+=(const DiffOperator& o);
  DiffOperator& operator-=(const DiffOperator& o);
  DiffOperator& operator*=(double s);
  DiffOperator operator-() const;
  DiffOperator times_i() const;
  DiffOperator truncated(int jet_order) const;

  /// (A f) as a complex jet of order min(jet_order, f.order() - order).
  ComplexJet apply(const Jet& f) const;

 private:
  void check_compatible(const DiffOperator& o) const;
  DiffOperator raised_to(int order) const;

  int n_ = 0;
  int order_ = 0;
  Trivialization triv_ = Trivialization::kMetricVolume;
  std::vector<ComplexJet> c_;
};

DiffOperator operator+(DiffOperator a, const DiffOperator& b);
DiffOperator operator-(DiffOperator a, const DiffOperator& b);
DiffOperator operator*(double s, DiffOperator a);

/// A o B by Leibniz expansion. Needs jets of B's coefficients to order(A);
/// the result carries jets of order min(jet(A), jet(B) - order(A)).
/// Throws DomainError on order overflow or insufficient jet order and
/// std::invalid_argument on mismatched trivializations.
DiffOperator compose(const DiffOperator& a, const DiffOperator& b);
/// A o B - B o A.
DiffOperator commutator(const DiffOperator& a, const DiffOperator& b);

/// Adjoint for the half-density pairing <phi, psi> = int conj(phi) psi:
/// A^dagger f = w^{-1} Sum_beta (-1)^|beta| d^beta (w conj(c_beta) f), with
/// w = |det g|^{1/2} for kMetricVolume and w = 1 for kCoordinate.
DiffOperator formal_adjoint(const DiffOperator& a, const GeometryJet& geo);

/// M(h) o A o M(1/h).
DiffOperator conjugate(const DiffOperator& a, const Jet& h);
/// Re-expresses A in the other trivialization: F = f |det g|^{1/2}.
DiffOperator change_trivialization(const DiffOperator& a, const GeometryJet& geo, Trivialization target);

/// Largest coefficientwise |difference| of value parts (missing orders count
/// as zero).
double max_coefficient_difference(const DiffOperator& a, const DiffOperator& b);

}  // namespace kq
