#pragma once

#include <optional>

#include "qhf/twist.hpp"
#include "qhf/wedderburn.hpp"

namespace qhf {

/// A mu-invariant conditional expectation P: A -> B on a Kac bundle, stored
/// as a coefficient matrix together with a mu-orthonormal basis of its range.
struct ConditionalExpectation {
  KacBundle bundle;
  Mat p;                                   // d x d on coefficients
  std::vector<AlgebraElement> range_basis; // deterministic mu-ONB of B
  std::string provenance;                  // "delsart" / "double_coset" / "orbital"

  int dim_B() const { return static_cast<int>(range_basis.size()); }
  AlgebraElement apply(const AlgebraElement& a) const;
};

/// P = |Gamma|^{-1} sum gamma over the group generated by the certified
/// automorphisms (closure computed). Refuses rejected certificates.
ConditionalExpectation delsart_expectation(
    const KacBundle& bundle, const std::vector<AutomorphismCertificate>& gamma,
    double tol = 1e-9);

/// Double coset expectation P = pi_l pi_r for a Hopf epimorphism
/// pi: bundle1 -> bundle2 given by its coefficient matrix (d2 x d1).
/// Verifies (pi (x) pi) Delta1 = Delta2 pi, eps2 pi = eps1,
/// pi kappa1 = kappa2 pi; throws with the residual otherwise.
ConditionalExpectation double_coset_expectation(const KacBundle& bundle1,
                                                const KacBundle& bundle2,
                                                const Mat& pi, double tol = 1e-9);

/// The quotient epimorphism C(G) -> C(G/N), lambda(g) -> lambda(gN).
Mat quotient_epimorphism(const KacBundle& bundle1, const KacBundle& bundle2,
                         const Eigen::VectorXi& projection);

/// Orbital expectation on a commutative bundle: (Pf)(x) = <q_{phi(x)}, f>.
/// weights[y] is a probability vector over the full basis supported on
/// block y. Enforces: commutativity, the identity's block is the singleton
/// {e}, the partition is star-stable, weights are probability vectors.
ConditionalExpectation orbital_expectation(const KacBundle& bundle,
                                           const Partition& partition,
                                           const std::vector<Vec>& weights,
                                           double tol = 1e-9);

/// Theorem-level hypothesis audit: projection, unit, positivity on a
/// generating positive family, bimodule property, mu-invariance, kernel
/// coideal (condition 1), kappa/star commutation (condition 2/(A)), and the
/// counit condition (directly when eps P = eps, else through the
/// one-dimensional central projection p_eps).
Report check_expectation_hypotheses(const ConditionalExpectation& e,
                                    double tol = 1e-9);

/// The central projection p with a p = eps(a) p for all a, normalized by
/// eps(p) = 1.
AlgebraElement counit_projection(const KacBundle& bundle, double tol = 1e-9);

struct HypergroupBundle {
  KacBundle base;
  Mat p;
  std::vector<AlgebraElement> basis; // mu-ONB of B
  Mat coproduct;     // dim_B^2 x dim_B over the B basis, layout i*dB+j
  RowVec counit;     // eps on the B basis
  Mat star_map;      // column k = B coords of (b_k)^star (apply with conj)
  Mat coinv;         // column k = B coords of kappa(b_k)
  RowVec haar;       // mu on the B basis
  std::string provenance;
  double basis_residual = 0; // worst out-of-span residual met while building
  double delsart_identity_residual = -1; // < 0 when not a Delsart bundle

  int dim_B() const { return static_cast<int>(basis.size()); }
  AlgebraElement element(const Vec& coords) const;
  Vec coords(const AlgebraElement& a) const;
  /// (P (x) P) Delta of a B element, as a tensor over A.
  TensorElement coproduct_in_A(const Vec& coords) const;
};

/// Delta~ = (P (x) P) Delta expressed over the range basis. Requires the
/// hypothesis report to pass unless allow_failed_hypotheses is set (used for
/// counterexample studies). For Delsart provenance the identity
/// (P (x) P)Delta(b) = (id (x) P)Delta(b) is verified and recorded.
HypergroupBundle induced_coproduct(const ConditionalExpectation& e,
                                   double tol = 1e-9,
                                   bool allow_failed_hypotheses = false);

/// Full quantum hypergroup audit: coassociativity, counit, coinvolution
/// axioms, positivity of Delta~ on a generating positive family, complete
/// positivity via blockwise Choi matrices when dim A <= cp_dim_limit,
/// positive-definite span, Haar uniqueness with mu+ = mu, strong invariance
/// and faithfulness on B.
Report verify_hypergroup(const HypergroupBundle& h, double tol = 1e-9,
                         int cp_dim_limit = 24);

/// Index of a B basis element maximizing ||Delta~(b) - Sigma Delta~(b)||,
/// when that maximum exceeds tol; nothing when Delta~ is symmetric.
struct SymmetryWitness {
  int basis_index;
  double defect;
};
std::optional<SymmetryWitness> symmetry_witness(const HypergroupBundle& h,
                                                double tol = 1e-9);

/// Lemma-level check that P': B' -> A', <P' xi, a> = <xi, P a>, is a
/// *-homomorphism for the dual multiplications.
bool dual_pushforward_check(const HypergroupBundle& h, double tol = 1e-9);

/// Delta~ expansion over a caller basis of B (columns are A coefficients):
/// c(i, j, k) with Delta~(v_k) = sum c(i,j,k) v_i (x) v_j. When the bundle
/// is commutative and the basis consists of the minimal idempotents, also
/// reports the DJS property: all dual convolution coefficients
/// (eta_y . eta_z)(f_w) nonnegative, where eta_y is the state dual to f_y.
struct StructureConstants {
  std::vector<Mat> c;  // c[k](i, j)
  double residual = 0; // worst expansion residual
  bool djs_checked = false;
  bool djs_nonnegative = false;
  double djs_min = 0;  // most negative coefficient seen (0 when clean)
};
StructureConstants structure_constants(const HypergroupBundle& h,
                                       const std::vector<AlgebraElement>& basis,
                                       double tol = 1e-9);

}  // namespace qhf
