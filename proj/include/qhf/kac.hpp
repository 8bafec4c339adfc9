#pragma once

#include "qhf/algebra.hpp"
#include "qhf/report.hpp"

namespace qhf {

/// A (possibly twisted) finite-dimensional Kac bundle: algebra plus
/// coproduct, counit, coinvolution and Haar state, all as coefficient
/// matrices over the monomial basis.
struct KacBundle {
  AlgebraPtr alg;
  Mat coproduct;     // d^2 x d; column k = vec of Delta(basis_k), layout i*d+j
  RowVec counit;     // 1 x d
  Mat coinvolution;  // d x d; column k = kappa(basis_k)
  RowVec haar;       // 1 x d

  int dim() const { return alg->dim(); }
  TensorElement coproduct_of_basis(int k) const;
  TensorElement coproduct_of(const AlgebraElement& a) const;
  AlgebraElement kappa(const AlgebraElement& a) const;
  cplx eps(const AlgebraElement& a) const { return (counit * a.coeffs)(0); }
  cplx mu(const AlgebraElement& a) const { return (haar * a.coeffs)(0); }
  /// The coinvolution star = kappa(.)* (antilinear).
  AlgebraElement star_op(const AlgebraElement& a) const;
  TensorElement star_op(const TensorElement& t) const;  // star (x) star
};

/// Cocommutative bundle on the group algebra: Delta(lambda(g)) =
/// lambda(g) (x) lambda(g), eps = 1, kappa(lambda(g)) = lambda(g^{-1}),
/// mu = coefficient of lambda(e).
KacBundle group_kac(GroupPtr g);

/// Commutative bundle on C(G): Delta(delta_x) = sum_{yz=x} delta_y (x)
/// delta_z, eps(delta_x) = [x=e], kappa(delta_x) = delta_{x^{-1}},
/// mu(delta_x) = 1/|G|.
KacBundle function_kac(GroupPtr g);

/// P_x = (1/|H|) sum_h conj(<x,h>) lambda(h), one projection per dual
/// element, enumerated in the character-table row order.
struct IdempotentFamily {
  AbelianSubgroup dual;
  std::vector<AlgebraElement> p;
};
IdempotentFamily dual_idempotents(const KacBundle& bundle, const AbelianSubgroup& h);

/// Deterministic basis-pair selection for quadratic checks: all pairs when
/// d*d <= max_pairs, otherwise max_pairs seeded samples (reported as
/// "sampled" by callers).
std::vector<std::pair<int, int>> sample_pairs(int d, int max_pairs = 576,
                                              unsigned seed = 20240901);

/// Full axiom audit: coalgebra axioms (coassociativity, counit, co3, co4),
/// Delta and eps multiplicative and unital, kappa antihomomorphism with
/// kappa^2 = id, Haar invariance, strong invariance, faithfulness,
/// mu and eps invariance under kappa.
Report verify_bundle(const KacBundle& bundle, double tol = 1e-9,
                     int max_pairs = 576, unsigned seed = 20240901);

/// ||Sigma Delta - Delta|| over the basis (0 for cocommutative bundles).
double cocommutativity_defect(const KacBundle& bundle);

}  // namespace qhf
