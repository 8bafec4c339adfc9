#include "qhf/algebra.hpp"

#include <stdexcept>

namespace qhf {

namespace {

void check_same(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a->group != b->group || a->pointwise != b->pointwise)
    throw std::invalid_argument("algebra mismatch");
}

constexpr double kSparseCutoff = 1e-15;

}  // namespace

std::string Algebra::basis_label(int i) const {
  std::string name = group->labels.empty() ? "g" + std::to_string(i) : group->labels[i];
  return (pointwise ? "d[" : "l[") + name + "]";
}

AlgebraPtr convolution_algebra(GroupPtr g) {
  auto a = std::make_shared<Algebra>();
  a->group = std::move(g);
  a->pointwise = false;
  return a;
}

AlgebraPtr function_algebra(GroupPtr g) {
  auto a = std::make_shared<Algebra>();
  a->group = std::move(g);
  a->pointwise = true;
  return a;
}

AlgebraElement basis_element(AlgebraPtr alg, int i) {
  int d = alg->dim();
  return {std::move(alg), Vec::Unit(d, i)};
}

AlgebraElement unit_element(AlgebraPtr alg) {
  Vec u = alg->unit_coeffs();
  return {std::move(alg), std::move(u)};
}

AlgebraElement zero_element(AlgebraPtr alg) {
  int d = alg->dim();
  return {std::move(alg), Vec::Zero(d)};
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a.alg, b.alg);
  return {a.alg, a.coeffs + b.coeffs};
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a.alg, b.alg);
  return {a.alg, a.coeffs - b.coeffs};
}

AlgebraElement operator*(cplx s, const AlgebraElement& a) { return {a.alg, s * a.coeffs}; }

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a.alg, b.alg);
  int d = a.dim();
  Vec out = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(a.coeffs(i)) < kSparseCutoff) continue;
    for (int j = 0; j < d; ++j) {
      if (std::abs(b.coeffs(j)) < kSparseCutoff) continue;
      int k = a.alg->prod(i, j);
      if (k >= 0) out(k) += a.coeffs(i) * b.coeffs(j);
    }
  }
  return {a.alg, std::move(out)};
}

AlgebraElement adjoint(const AlgebraElement& a) {
  int d = a.dim();
  Vec out = Vec::Zero(d);
  for (int i = 0; i < d; ++i) out(a.alg->star(i)) = std::conj(a.coeffs(i));
  return {a.alg, std::move(out)};
}

Mat regular_matrix(const AlgebraElement& a) {
  int d = a.dim();
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(a.coeffs(i)) < kSparseCutoff) continue;
    for (int j = 0; j < d; ++j) {
      int k = a.alg->prod(i, j);
      if (k >= 0) m(k, j) += a.coeffs(i);
    }
  }
  return m;
}

Mat left_mult_matrix(const AlgebraElement& a) { return regular_matrix(a); }

Mat right_mult_matrix(const AlgebraElement& a) {
  int d = a.dim();
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    if (std::abs(a.coeffs(i)) < kSparseCutoff) continue;
    for (int j = 0; j < d; ++j) {
      int k = a.alg->prod(j, i);
      if (k >= 0) m(k, j) += a.coeffs(i);
    }
  }
  return m;
}

namespace {

bool matrix_positive(const Mat& m, double tol) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return lo >= -tol * (1.0 + std::abs(hi));
}

}  // namespace

bool is_positive(const AlgebraElement& a, double tol) {
  return matrix_positive(regular_matrix(a), tol);
}

TensorElement tensor_product(const AlgebraElement& a, const AlgebraElement& b) {
  check_same(a.alg, b.alg);
  return {a.alg, a.coeffs * b.coeffs.transpose()};
}

TensorElement unit_tensor(AlgebraPtr alg) {
  Vec u = alg->unit_coeffs();
  return {alg, u * u.transpose()};
}

TensorElement operator+(const TensorElement& a, const TensorElement& b) {
  check_same(a.alg, b.alg);
  return {a.alg, a.coeffs + b.coeffs};
}

TensorElement operator-(const TensorElement& a, const TensorElement& b) {
  check_same(a.alg, b.alg);
  return {a.alg, a.coeffs - b.coeffs};
}

TensorElement operator*(cplx s, const TensorElement& a) { return {a.alg, s * a.coeffs}; }

TensorElement multiply(const TensorElement& a, const TensorElement& b) {
  check_same(a.alg, b.alg);
  int d = a.dim();
  // collect nonzeros once; products are monomial so cost is nnz(a) * nnz(b)
  std::vector<std::pair<int, int>> na, nb;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (std::abs(a.coeffs(i, j)) >= kSparseCutoff) na.emplace_back(i, j);
      if (std::abs(b.coeffs(i, j)) >= kSparseCutoff) nb.emplace_back(i, j);
    }
  Mat out = Mat::Zero(d, d);
  for (auto [i, j] : na)
    for (auto [k, l] : nb) {
      int ik = a.alg->prod(i, k);
      if (ik < 0) continue;
      int jl = a.alg->prod(j, l);
      if (jl < 0) continue;
      out(ik, jl) += a.coeffs(i, j) * b.coeffs(k, l);
    }
  return {a.alg, std::move(out)};
}

TensorElement adjoint(const TensorElement& a) {
  int d = a.dim();
  Mat out = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(a.alg->star(i), a.alg->star(j)) = std::conj(a.coeffs(i, j));
  return {a.alg, std::move(out)};
}

TensorElement flip(const TensorElement& a) { return {a.alg, a.coeffs.transpose()}; }

bool is_unitary(const TensorElement& a, double tol) {
  TensorElement u = unit_tensor(a.alg);
  return (multiply(a, adjoint(a)) - u).norm_inf() < tol &&
         (multiply(adjoint(a), a) - u).norm_inf() < tol;
}

bool is_unitary(const AlgebraElement& a, double tol) {
  AlgebraElement u = unit_element(a.alg);
  return (multiply(a, adjoint(a)) - u).norm_inf() < tol &&
         (multiply(adjoint(a), a) - u).norm_inf() < tol;
}

Mat regular_matrix(const TensorElement& a) {
  int d = a.dim();
  Mat out = Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx c = a.coeffs(i, j);
      if (std::abs(c) < kSparseCutoff) continue;
      for (int k = 0; k < d; ++k) {
        int ik = a.alg->prod(i, k);
        if (ik < 0) continue;
        for (int l = 0; l < d; ++l) {
          int jl = a.alg->prod(j, l);
          if (jl < 0) continue;
          out(ik * d + jl, k * d + l) += c;
        }
      }
    }
  return out;
}

bool is_positive(const TensorElement& a, double tol) {
  return matrix_positive(regular_matrix(a), tol);
}

double commutant_residual(const TensorElement& x, const std::vector<TensorElement>& S) {
  double worst = 0.0;
  for (const auto& s : S)
    worst = std::max(worst, (multiply(x, s) - multiply(s, x)).norm_inf());
  return worst;
}

bool in_commutant(const TensorElement& x, const std::vector<TensorElement>& S,
                  double tol) {
  return commutant_residual(x, S) <= tol;
}

double TripleTensor::norm_inf() const {
  double n = 0.0;
  for (auto& [k, v] : coeffs) n = std::max(n, std::abs(v));
  return n;
}

TripleTensor& TripleTensor::add(int i, int j, int k, cplx v) {
  long long d = alg->dim();
  coeffs[(long long)i * d * d + (long long)j * d + k] += v;
  return *this;
}

TripleTensor triple_multiply(const TripleTensor& a, const TripleTensor& b) {
  check_same(a.alg, b.alg);
  long long d = a.alg->dim();
  TripleTensor out{a.alg, {}};
  for (auto& [ka, va] : a.coeffs) {
    if (std::abs(va) < kSparseCutoff) continue;
    int i = static_cast<int>(ka / (d * d)), j = static_cast<int>((ka / d) % d),
        k = static_cast<int>(ka % d);
    for (auto& [kb, vb] : b.coeffs) {
      if (std::abs(vb) < kSparseCutoff) continue;
      int p = static_cast<int>(kb / (d * d)), q = static_cast<int>((kb / d) % d),
          r = static_cast<int>(kb % d);
      int ip = a.alg->prod(i, p);
      if (ip < 0) continue;
      int jq = a.alg->prod(j, q);
      if (jq < 0) continue;
      int kr = a.alg->prod(k, r);
      if (kr < 0) continue;
      out.add(ip, jq, kr, va * vb);
    }
  }
  return out;
}

TripleTensor triple_adjoint(const TripleTensor& a) {
  long long d = a.alg->dim();
  TripleTensor out{a.alg, {}};
  for (auto& [key, v] : a.coeffs) {
    int i = static_cast<int>(key / (d * d)), j = static_cast<int>((key / d) % d),
        k = static_cast<int>(key % d);
    out.add(a.alg->star(i), a.alg->star(j), a.alg->star(k), std::conj(v));
  }
  return out;
}

TripleTensor triple_sub(const TripleTensor& a, const TripleTensor& b) {
  check_same(a.alg, b.alg);
  TripleTensor out = a;
  for (auto& [k, v] : b.coeffs) out.coeffs[k] -= v;
  return out;
}

TripleTensor embed_with_unit(const TensorElement& t, int unit_leg) {
  int d = t.dim();
  TripleTensor out{t.alg, {}};
  Vec u = t.alg->unit_coeffs();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx c = t.coeffs(i, j);
      if (std::abs(c) < kSparseCutoff) continue;
      for (int e = 0; e < d; ++e) {
        if (std::abs(u(e)) < kSparseCutoff) continue;
        if (unit_leg == 0)
          out.add(e, i, j, u(e) * c);
        else if (unit_leg == 2)
          out.add(i, j, e, c * u(e));
        else
          throw std::invalid_argument("unit_leg must be 0 or 2");
      }
    }
  return out;
}

double triple_commutator_norm(const TripleTensor& x, const TripleTensor& y) {
  return triple_sub(triple_multiply(x, y), triple_multiply(y, x)).norm_inf();
}

LinearMap identity_map(int d) { return {Mat::Identity(d, d)}; }

LinearMap compose(const LinearMap& f, const LinearMap& g) { return {f.m * g.m}; }

Vec tensor_to_vec(const TensorElement& t) {
  int d = t.dim();
  Vec v(d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(i * d + j) = t.coeffs(i, j);
  return v;
}

TensorElement vec_to_tensor(AlgebraPtr alg, const Vec& v) {
  int d = alg->dim();
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return {std::move(alg), std::move(m)};
}

}  // namespace qhf
