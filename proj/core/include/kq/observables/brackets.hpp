#pragma once

#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/geometry/chart.hpp"
#include "kq/geometry/geometry_jet.hpp"
#include "kq/observables/poly_observable.hpp"

namespace kq {

/// Electromagnetic potential A_i; F_ij = d_i A_j - d_j A_i.
class MaxwellField {
 public:
  MaxwellField() = default;
  explicit MaxwellField(std::vector<ScalarField> potential);
  explicit MaxwellField(FieldBundle potential);

  int dim() const { return static_cast<int>(potential_.size()); }
  const FieldBundle& potential() const { return potential_; }

  struct At {
    Tensor A;  // A_i, order `order`
    Tensor F;  // F_ij, order `order - 1`
  };
  At evaluate(std::span<const double> x, int order) const;

  nlohmann::json to_json() const;
  static MaxwellField from_json(const nlohmann::json& j);

 private:
  FieldBundle potential_;
};

/// Canonical bracket {P,Q} = dP/dxi_i dQ/dx^i - dQ/dxi_i dP/dx^i at (x, xi).
double poisson_bracket_numeric(const PolyObservable& p, const PolyObservable& q, const Chart& chart,
                               std::span<const double> x, std::span<const double> xi);
/// Same, on observables already evaluated at order >= 1.
double poisson_bracket_numeric(const PolyJet& p, const PolyJet& q, std::span<const double> xi);

enum class BracketForm { kCovariant, kCoordinate };

/// Schouten bracket of symmetric tensors of degrees k and l:
/// sym(k P^{i..} nabla_i Q^{..} - l Q^{i..} nabla_i P^{..}), degree k+l-1.
/// The coordinate form uses partial derivatives (zero connection).
SymTensor schouten_bracket(const SymTensor& p, const SymTensor& q, const GeometryJet& geo,
                           BracketForm form = BracketForm::kCovariant);
/// Degreewise Schouten bracket of full polynomials, i.e. the tensor form of
/// the Poisson bracket.
PolyJet schouten_bracket(const PolyJet& p, const PolyJet& q, const GeometryJet& geo,
                         BracketForm form = BracketForm::kCovariant);

/// Twisted bracket {P,Q}_F split into the Schouten part and the
/// electromagnetic part -kl F_ij P^{i(..} Q^{..)j} of degree k+l-2.
struct MaxwellBracket {
  PolyJet schouten;
  PolyJet electromagnetic;
  PolyJet total() const;
};
MaxwellBracket schouten_maxwell_bracket(const PolyJet& p, const PolyJet& q, const Tensor& F,
                                        const GeometryJet& geo);

/// sym(g^{ij} nabla_j S^{i1..ik}), degree k+1; zero iff S is Killing.
SymTensor killing_residual(const SymTensor& s, const GeometryJet& geo);
/// (Killing residual, sym(S^{j(i1..} F^{ik)}_j)) with F^a_j = g^{am} F_mj.
std::pair<SymTensor, SymTensor> killing_maxwell_residual(const SymTensor& s, const Tensor& F,
                                                         const GeometryJet& geo);

/// P(x, xi - A(x)) expanded into homogeneous components (deg P <= 3).
PolyObservable tilde_shift(const PolyObservable& p, const MaxwellField& a);

}  // namespace kq
