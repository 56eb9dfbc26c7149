#include "kq/opalg/trivialize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kq/common/error.hpp"

namespace kq {

int CovariantOperator::order() const {
  int k = -1;
  for (int d = 0; d <= kMaxOrder; ++d)
    if (terms[d]) k = d;
  return k;
}

namespace {

DiffOperator scaled(const Jet& s, const DiffOperator& d) {
  return compose(DiffOperator::multiplication(s), d);
}

DiffOperator hessian_word(const GeometryJet& geo, int j, int k) {
  const int n = geo.dim();
  std::vector<int> beta(n, 0);
  ++beta[j];
  ++beta[k];
  DiffOperator d = DiffOperator::partial(beta, kMaxJetOrder);
  for (int m = 0; m < n; ++m) d -= scaled(geo.gamma(m, j, k), DiffOperator::partial(n, m, kMaxJetOrder));
  return d;
}

}  // namespace

DiffOperator trivialize(const CovariantOperator& op, const GeometryJet& geo, Trivialization target) {
  const int n = geo.dim();
  if (op.n != n) throw std::invalid_argument("operator and geometry dimensions differ");
  const int order = std::max(0, op.order());
  const int need = target == Trivialization::kCoordinate ? order : std::max(1, order - 1);
  if (geo.depth() < need) throw DomainError("insufficient geometry depth for trivialization", geo.depth());

  std::vector<DiffOperator> hess;
  if (order >= 2) {
    hess.reserve(n * n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) hess.push_back(hessian_word(geo, j, k));
  }
  auto h = [&](int j, int k) -> const DiffOperator& { return hess[j * n + k]; };

  DiffOperator out(n, order, kMaxJetOrder);
  for (int k = 0; k <= order; ++k) {
    if (!op.terms[k]) continue;
    const auto& a = *op.terms[k];
    const auto& ms = MultisetIndex::get(n, k);
    if (k == 0) {
      out += DiffOperator::multiplication(ComplexJet{a.re[0], a.im[0]});
      continue;
    }
    std::vector<int> t(k, 0);
    const std::size_t words = static_cast<std::size_t>(std::pow(n, k));
    for (std::size_t w = 0; w < words; ++w) {
      std::size_t r = w;
      for (int s = k - 1; s >= 0; --s) {
        t[s] = static_cast<int>(r % n);
        r /= n;
      }
      const std::size_t m = ms.index_of(t);
      const ComplexJet c{a.re[m], a.im[m]};
      DiffOperator word;
      if (k == 1) {
        word = DiffOperator::partial(n, t[0], kMaxJetOrder);
      } else if (k == 2) {
        word = h(t[0], t[1]);
      } else {
        word = compose(DiffOperator::partial(n, t[0], kMaxJetOrder), h(t[1], t[2]));
        for (int p = 0; p < n; ++p) {
          word -= scaled(geo.gamma(p, t[0], t[1]), h(p, t[2]));
          word -= scaled(geo.gamma(p, t[0], t[2]), h(t[1], p));
        }
      }
      out += compose(DiffOperator::multiplication(c), word);
    }
  }
  return change_trivialization(out, geo, target);
}

}  // namespace kq
