#pragma once

#include "qhf/algebra.hpp"

namespace qhf {

/// Haar state of the ambient algebra: coefficient of the identity basis
/// element (convolution mode) or the mean of the coefficients (pointwise).
cplx haar_value(const AlgebraElement& a);

/// mu(a* b); proportional to the Euclidean inner product on coefficients in
/// both algebra modes, but computed from the product to keep the definition
/// honest.
cplx mu_inner(const AlgebraElement& a, const AlgebraElement& b);

/// Gram-Schmidt over the mu inner product, processed in the given order
/// (deterministic pivoting). Vectors with residual norm below tol are
/// dropped.
std::vector<AlgebraElement> orthonormalize(const std::vector<AlgebraElement>& v,
                                           double tol = 1e-9);

/// Coordinates of x in an orthonormal family, plus the out-of-span residual.
Vec span_coords(const std::vector<AlgebraElement>& onb, const AlgebraElement& x);
double span_residual(const std::vector<AlgebraElement>& onb, const AlgebraElement& x);

struct WedderburnDecomposition {
  std::vector<AlgebraElement> onb;                   // orthonormal basis of B
  std::vector<int> sizes;                            // block sizes, ascending
  std::vector<AlgebraElement> central_idempotents;   // aligned with sizes
  /// matrix_units[b] lists E_{jk} row-major (size n^2) for block b;
  /// E_{jk} E_{pq} = [k=p] E_{jq}, E_{jk}* = E_{kj}, sum_j E_{jj} = z_b.
  /// Empty unless requested.
  std::vector<std::vector<AlgebraElement>> matrix_units;

  int dim() const { return static_cast<int>(onb.size()); }
  bool commutative() const;
};

/// Wedderburn block decomposition of the *-subalgebra spanned by `spanning`.
/// Throws std::invalid_argument when the span is not a unital *-closed
/// algebra (message names the violating product).
WedderburnDecomposition wedderburn(const std::vector<AlgebraElement>& spanning,
                                   double tol = 1e-9, unsigned seed = 12345,
                                   double gap = 1e-6,
                                   bool with_matrix_units = false);

}  // namespace qhf
