#pragma once

#include "qhf/kac.hpp"

namespace qhf {

/// A 2-(pseudo)-cocycle candidate on the dual of an abelian subgroup, as a
/// table of unit-modulus values indexed like the character rows of
/// AbelianSubgroup.
struct CocycleTable {
  Mat omega;

  int dual_order() const { return static_cast<int>(omega.rows()); }
};

/// Unit modulus of every entry (square table). Throws on violation.
void validate_cocycle_table(const CocycleTable& t, double tol = 1e-9);
bool is_counital_table(const CocycleTable& t, double tol = 1e-9);

/// JSON form {"dual_order": k, "omega": [[re, im], ...]} with k^2 entries in
/// row-major order.
CocycleTable cocycle_from_json(const std::string& text);
std::string cocycle_to_json(const CocycleTable& t);

/// The table with 1 on the trivial row/column and the diagonal,
/// conjugate-symmetric, and value i on the cyclic triple
/// (t0,t1), (t1,t2), (t2,t0) of nontrivial dual indices; 1 elsewhere.
CocycleTable cyclic_i_table(int dual_order, std::array<int, 3> triple);

/// Omega = sum omega(x, y) P_x (x) P_y.
TensorElement lift_cocycle(const CocycleTable& t, const IdempotentFamily& fam);

enum class CocycleClass { cocycle, pseudo_cocycle, invalid };
enum class CoinvolutivityClass { strong, coinvolutive, pseudo_coinvolutive, none };
const char* to_string(CocycleClass c);
const char* to_string(CoinvolutivityClass c);

/// Strict test first: (Omega (x) 1)(Delta (x) id)(Omega) =
/// (1 (x) Omega)(id (x) Delta)(Omega). Otherwise pseudo when
/// d2(Omega) = (id (x) Delta)(Omega*)(1 (x) Omega*)(Omega (x) 1)
/// (Delta (x) id)(Omega) commutes with (Delta (x) id)Delta on group
/// generators. Non-unitary Omega is invalid.
CocycleClass classify_cocycle(const TensorElement& Omega, const KacBundle& bundle,
                              double tol = 1e-9);

/// u = m(id (x) kappa)(Omega).
AlgebraElement gauge_unitary(const TensorElement& Omega, const KacBundle& bundle);

/// Omega^u = (u* (x) u*) Omega Delta(u).
TensorElement gauge_transform(const TensorElement& Omega, const AlgebraElement& u,
                              const KacBundle& bundle);

/// strong: Sigma(kappa (x) kappa)(Omega*) = Omega; coinvolutive: = Omega^u;
/// pseudo: Omega^u (Sigma(kappa (x) kappa)(Omega*))* commutes with
/// Delta(A) generators.
CoinvolutivityClass classify_coinvolutivity(const TensorElement& Omega,
                                            const AlgebraElement& u,
                                            const KacBundle& bundle,
                                            double tol = 1e-9);

/// Twisted bundle: Delta_Omega = Omega Delta(.) Omega*, kappa_Omega =
/// u kappa(.) u* (kappa unchanged when Omega is strongly coinvolutive),
/// same counit and Haar state. Throws std::invalid_argument when Omega is
/// not a (pseudo)cocycle or has no coinvolutivity class.
KacBundle twist_bundle(const KacBundle& bundle, const TensorElement& Omega,
                       const AlgebraElement& u, double tol = 1e-9);

/// The permutation matrix of lambda(g) -> lambda(alpha(g)) on coefficients.
Mat automorphism_matrix(const AlgebraPtr& alg, const GroupAutomorphism& alpha);

/// Action on the dual group, <alpha(h^), h> = <h^, alpha^{-1}(h)>.
/// Requires alpha(H) = H; returns the permutation of dual indices.
std::vector<int> dual_automorphism(const AbelianSubgroup& dual,
                                   const GroupAutomorphism& alpha);

enum class CertRoute { direct, gauged, cocycle_criterion, rejected };
const char* to_string(CertRoute r);

struct AutomorphismCertificate {
  CertRoute route = CertRoute::rejected;
  Mat gamma;            // linear map on A (valid unless rejected)
  double residual = 0;  // worst residual of the final verification
  std::string detail;   // first failing condition when rejected
};

/// Certification of a group automorphism against the twisted bundle.
/// Route order: direct ((alpha (x) alpha) commutes with Ad Omega), gauged
/// (skipped when u = 1; requires alpha(u) = u*, (alpha^{-1} (x)
/// alpha^{-1})(Omega^u) Omega* in the commutant of Delta(A), eps(u) = 1;
/// gamma = Ad u after alpha), cocycle_criterion (omega(alpha(x), alpha(y)) =
/// conj(omega(x, y)) on the dual). Every accepted route is finished by a
/// numerical audit of gamma against the twisted bundle; audit failure
/// rejects.
AutomorphismCertificate admissible_automorphism(
    const GroupAutomorphism& alpha, const CocycleTable& table,
    const TensorElement& Omega, const AlgebraElement& u, const KacBundle& base,
    const KacBundle& twisted, const IdempotentFamily& fam, double tol = 1e-9);

}  // namespace qhf
