#pragma once

#include <unordered_map>

#include "qhf/group.hpp"

namespace qhf {

/// A finite-dimensional *-algebra with a monomial basis: the product of two
/// basis elements is a single basis element (or zero), and the adjoint of a
/// basis element is a basis element.
///
/// Two modes over the same group:
///  - convolution: basis lambda(g), lambda(g)lambda(h) = lambda(gh),
///    lambda(g)* = lambda(g^{-1}), unit = lambda(e)
///  - pointwise: basis delta_x of C(G), delta_x delta_y = [x=y] delta_x,
///    delta_x* = delta_x, unit = sum of all delta_x
struct Algebra {
  GroupPtr group;
  bool pointwise = false;

  int dim() const { return group->order; }
  int prod(int i, int j) const {
    if (pointwise) return i == j ? i : -1;
    return group->mul(i, j);
  }
  int star(int i) const { return pointwise ? i : group->inv(i); }
  Vec unit_coeffs() const {
    if (pointwise) return Vec::Ones(dim());
    return Vec::Unit(dim(), 0);
  }
  std::string basis_label(int i) const;
};
using AlgebraPtr = std::shared_ptr<const Algebra>;

AlgebraPtr convolution_algebra(GroupPtr g);
AlgebraPtr function_algebra(GroupPtr g);

struct AlgebraElement {
  AlgebraPtr alg;
  Vec coeffs;

  AlgebraElement() = default;
  AlgebraElement(AlgebraPtr a, Vec c) : alg(std::move(a)), coeffs(std::move(c)) {}

  int dim() const { return static_cast<int>(coeffs.size()); }
  double norm_inf() const { return coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0; }
};

AlgebraElement basis_element(AlgebraPtr alg, int i);
AlgebraElement unit_element(AlgebraPtr alg);
AlgebraElement zero_element(AlgebraPtr alg);

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(cplx s, const AlgebraElement& a);
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement adjoint(const AlgebraElement& a);

/// Faithful representation by left multiplication: column j holds a * basis_j.
Mat regular_matrix(const AlgebraElement& a);

/// Hermitian within tol and min eigenvalue >= -tol * (1 + max eigenvalue).
bool is_positive(const AlgebraElement& a, double tol = 1e-9);

struct TensorElement {
  AlgebraPtr alg;
  Mat coeffs;  // coeffs(i, j) on basis_i (x) basis_j

  TensorElement() = default;
  TensorElement(AlgebraPtr a, Mat c) : alg(std::move(a)), coeffs(std::move(c)) {}

  int dim() const { return static_cast<int>(coeffs.rows()); }
  double norm_inf() const { return coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0; }
};

TensorElement tensor_product(const AlgebraElement& a, const AlgebraElement& b);
TensorElement unit_tensor(AlgebraPtr alg);
TensorElement operator+(const TensorElement& a, const TensorElement& b);
TensorElement operator-(const TensorElement& a, const TensorElement& b);
TensorElement operator*(cplx s, const TensorElement& a);
/// Componentwise product (a1 (x) a2)(b1 (x) b2) = a1 b1 (x) a2 b2,
/// implemented by iterating nonzero coefficient pairs.
TensorElement multiply(const TensorElement& a, const TensorElement& b);
TensorElement adjoint(const TensorElement& a);
/// Flip map Sigma(a (x) b) = b (x) a.
TensorElement flip(const TensorElement& a);
bool is_unitary(const TensorElement& a, double tol = 1e-9);
bool is_unitary(const AlgebraElement& a, double tol = 1e-9);

/// Representation on the |G|^2-dimensional tensor square of the regular
/// representation. Quadratic in |G| per nonzero coefficient; intended for
/// small groups.
Mat regular_matrix(const TensorElement& a);
bool is_positive(const TensorElement& a, double tol = 1e-9);

/// ||x s - s x||_inf <= tol for every s in S.
bool in_commutant(const TensorElement& x, const std::vector<TensorElement>& S,
                  double tol = 1e-9);
double commutant_residual(const TensorElement& x, const std::vector<TensorElement>& S);

/// Sparse element of A (x) A (x) A, keyed by i * d^2 + j * d + k.
struct TripleTensor {
  AlgebraPtr alg;
  std::unordered_map<long long, cplx> coeffs;

  double norm_inf() const;
  TripleTensor& add(int i, int j, int k, cplx v);
};

TripleTensor triple_multiply(const TripleTensor& a, const TripleTensor& b);
TripleTensor triple_adjoint(const TripleTensor& a);
TripleTensor triple_sub(const TripleTensor& a, const TripleTensor& b);
/// Embeddings of a two-leg tensor into three legs: pos selects which leg
/// carries the unit (0: 1 (x) t, 2: t (x) 1).
TripleTensor embed_with_unit(const TensorElement& t, int unit_leg);
double triple_commutator_norm(const TripleTensor& x, const TripleTensor& y);

/// A dense linear map between coefficient spaces (dimensions are whatever the
/// caller uses: d, d^2, 1, ...).
struct LinearMap {
  Mat m;

  int in_dim() const { return static_cast<int>(m.cols()); }
  int out_dim() const { return static_cast<int>(m.rows()); }
  Vec apply(const Vec& v) const { return m * v; }
};

LinearMap identity_map(int d);
LinearMap compose(const LinearMap& f, const LinearMap& g);  // f after g

/// Matrix of v -> coeffs(a * x) for x with coefficient vector v (left
/// multiplication by a), same as regular_matrix.
Mat left_mult_matrix(const AlgebraElement& a);
Mat right_mult_matrix(const AlgebraElement& a);

// Tensor coefficient layout: vec(T) stacks coeffs(i, j) at index i * d + j.
Vec tensor_to_vec(const TensorElement& t);
TensorElement vec_to_tensor(AlgebraPtr alg, const Vec& v);

}  // namespace qhf
