#include "qhf/kac.hpp"

#include <random>

#include "qhf/wedderburn.hpp"

namespace qhf {

namespace {

constexpr double kSparseCutoff = 1e-15;

std::vector<std::pair<int, int>> nonzeros(const Mat& m) {
  std::vector<std::pair<int, int>> nz;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) >= kSparseCutoff) nz.emplace_back(i, j);
  return nz;
}

}  // namespace

TensorElement KacBundle::coproduct_of_basis(int k) const {
  return vec_to_tensor(alg, coproduct.col(k));
}

TensorElement KacBundle::coproduct_of(const AlgebraElement& a) const {
  return vec_to_tensor(alg, coproduct * a.coeffs);
}

AlgebraElement KacBundle::kappa(const AlgebraElement& a) const {
  return {alg, coinvolution * a.coeffs};
}

AlgebraElement KacBundle::star_op(const AlgebraElement& a) const {
  return adjoint(kappa(a));
}

TensorElement KacBundle::star_op(const TensorElement& t) const {
  int d = dim();
  TensorElement out{alg, Mat::Zero(d, d)};
  for (auto [i, j] : nonzeros(t.coeffs)) {
    AlgebraElement si = star_op(basis_element(alg, i));
    AlgebraElement sj = star_op(basis_element(alg, j));
    out = out + std::conj(t.coeffs(i, j)) * tensor_product(si, sj);
  }
  return out;
}

KacBundle group_kac(GroupPtr g) {
  KacBundle b;
  b.alg = convolution_algebra(g);
  int d = g->order;
  b.coproduct = Mat::Zero(d * d, d);
  for (int k = 0; k < d; ++k) b.coproduct(k * d + k, k) = 1.0;
  b.counit = RowVec::Ones(d);
  b.coinvolution = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) b.coinvolution(g->inv(k), k) = 1.0;
  b.haar = RowVec::Zero(d);
  b.haar(0) = 1.0;
  return b;
}

KacBundle function_kac(GroupPtr g) {
  KacBundle b;
  b.alg = function_algebra(g);
  int d = g->order;
  b.coproduct = Mat::Zero(d * d, d);
  for (int y = 0; y < d; ++y)
    for (int z = 0; z < d; ++z) b.coproduct(y * d + z, g->mul(y, z)) = 1.0;
  b.counit = RowVec::Zero(d);
  b.counit(0) = 1.0;
  b.coinvolution = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) b.coinvolution(g->inv(k), k) = 1.0;
  b.haar = RowVec::Constant(d, 1.0 / d);
  return b;
}

IdempotentFamily dual_idempotents(const KacBundle& bundle, const AbelianSubgroup& h) {
  if (bundle.alg->pointwise)
    throw std::invalid_argument("dual idempotents live in the convolution algebra");
  int n = h.size();
  IdempotentFamily fam{h, {}};
  for (int x = 0; x < n; ++x) {
    AlgebraElement p = zero_element(bundle.alg);
    for (int j = 0; j < n; ++j)
      p.coeffs(h.elements[j]) = std::conj(h.characters(x, j)) / double(n);
    fam.p.push_back(std::move(p));
  }
  return fam;
}

std::vector<std::pair<int, int>> sample_pairs(int d, int max_pairs, unsigned seed) {
  std::vector<std::pair<int, int>> out;
  if (d * d <= max_pairs) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.emplace_back(i, j);
    return out;
  }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, d - 1);
  for (int k = 0; k < max_pairs; ++k) out.emplace_back(dist(rng), dist(rng));
  return out;
}

double cocommutativity_defect(const KacBundle& bundle) {
  double worst = 0.0;
  for (int k = 0; k < bundle.dim(); ++k) {
    TensorElement t = bundle.coproduct_of_basis(k);
    worst = std::max(worst, (flip(t) - t).norm_inf());
  }
  return worst;
}

namespace {

/// (Delta (x) id)Delta(basis_k) and (id (x) Delta)Delta(basis_k) as sparse
/// triples, without ever forming a d^3 x d matrix.
double coassociativity_residual(const KacBundle& b, int k) {
  TensorElement t = b.coproduct_of_basis(k);
  TripleTensor lhs{b.alg, {}}, rhs{b.alg, {}};
  for (auto [i, j] : nonzeros(t.coeffs)) {
    cplx c = t.coeffs(i, j);
    TensorElement di = b.coproduct_of_basis(i);
    for (auto [p, q] : nonzeros(di.coeffs)) lhs.add(p, q, j, c * di.coeffs(p, q));
    TensorElement dj = b.coproduct_of_basis(j);
    for (auto [p, q] : nonzeros(dj.coeffs)) rhs.add(i, p, q, c * dj.coeffs(p, q));
  }
  return triple_sub(lhs, rhs).norm_inf();
}

/// (id (x) mu)(((kappa (x) id)Delta(b_i)) (1 (x) b_j)).
Vec strong_invariance_lhs(const KacBundle& b, int i, int j) {
  int d = b.dim();
  TensorElement t = b.coproduct_of_basis(i);
  Mat x = Mat::Zero(d, d);  // (kappa (x) id)Delta(b_i)
  for (auto [p, q] : nonzeros(t.coeffs)) x.col(q) += t.coeffs(p, q) * b.coinvolution.col(p);
  Mat y = Mat::Zero(d, d);  // x * (1 (x) b_j)
  for (int q = 0; q < d; ++q) {
    int qj = b.alg->prod(q, j);
    if (qj >= 0) y.col(qj) += x.col(q);
  }
  return y * b.haar.transpose();
}

/// (id (x) mu)((1 (x) b_i) Delta(b_j)).
Vec strong_invariance_rhs(const KacBundle& b, int i, int j) {
  int d = b.dim();
  TensorElement t = b.coproduct_of_basis(j);
  Mat z = Mat::Zero(d, d);
  for (auto [p, q] : nonzeros(t.coeffs)) {
    int iq = b.alg->prod(i, q);
    if (iq >= 0) z(p, iq) += t.coeffs(p, q);
  }
  return z * b.haar.transpose();
}

}  // namespace

Report verify_bundle(const KacBundle& b, double tol, int max_pairs, unsigned seed) {
  Report r;
  r.title = "kac bundle";
  r.tol = tol;
  int d = b.dim();
  auto pairs = sample_pairs(d, max_pairs, seed);
  bool sampled = d * d > max_pairs;
  std::string pair_note = sampled ? "sampled " + std::to_string(pairs.size()) + " pairs" : "";

  AlgebraElement one = unit_element(b.alg);

  // Delta is a unital *-homomorphism
  r.check("delta_unital", (b.coproduct_of(one) - unit_tensor(b.alg)).norm_inf());
  double mult = 0.0;
  for (auto [i, j] : pairs) {
    TensorElement lhs = b.coproduct_of(multiply(basis_element(b.alg, i), basis_element(b.alg, j)));
    TensorElement rhs = multiply(b.coproduct_of_basis(i), b.coproduct_of_basis(j));
    mult = std::max(mult, (lhs - rhs).norm_inf());
  }
  r.check("delta_multiplicative", mult, pair_note);
  double star_hom = 0.0;
  for (int k = 0; k < d; ++k) {
    TensorElement lhs = b.coproduct_of(adjoint(basis_element(b.alg, k)));
    TensorElement rhs = adjoint(b.coproduct_of_basis(k));
    star_hom = std::max(star_hom, (lhs - rhs).norm_inf());
  }
  r.check("delta_star_homomorphism", star_hom);

  // coalgebra axioms
  double coassoc = 0.0;
  for (int k = 0; k < d; ++k)
    coassoc = std::max(coassoc, coassociativity_residual(b, k));
  r.check("coassociativity", coassoc);

  double counit_res = 0.0;
  for (int k = 0; k < d; ++k) {
    TensorElement t = b.coproduct_of_basis(k);
    Vec left = t.coeffs.transpose() * b.counit.transpose();   // (eps (x) id)
    Vec right = t.coeffs * b.counit.transpose();              // (id (x) eps)
    Vec e = Vec::Unit(d, k);
    counit_res = std::max({counit_res, (left - e).cwiseAbs().maxCoeff(),
                           (right - e).cwiseAbs().maxCoeff()});
  }
  r.check("counit", counit_res);

  double co3 = 0.0;
  for (int k = 0; k < d; ++k) {
    TensorElement lhs = b.coproduct_of(b.star_op(basis_element(b.alg, k)));
    TensorElement rhs = flip(b.star_op(b.coproduct_of_basis(k)));
    co3 = std::max(co3, (lhs - rhs).norm_inf());
  }
  r.check("coinvolution_coproduct", co3);
  double co4 = 0.0;
  for (int k = 0; k < d; ++k) {
    AlgebraElement x = basis_element(b.alg, k);
    co4 = std::max(co4, (b.star_op(b.star_op(x)) - x).norm_inf());
  }
  r.check("coinvolution_involutive", co4);

  // counit is a character
  double eps_mult = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx lhs = b.eps(multiply(basis_element(b.alg, i), basis_element(b.alg, j)));
      eps_mult = std::max(eps_mult, std::abs(lhs - b.counit(i) * b.counit(j)));
    }
  r.check("counit_multiplicative", eps_mult);
  r.check("counit_unital", std::abs(b.eps(one) - cplx(1)));

  // kappa
  double antihom = 0.0;
  for (auto [i, j] : pairs) {
    AlgebraElement lhs = b.kappa(multiply(basis_element(b.alg, i), basis_element(b.alg, j)));
    AlgebraElement rhs = multiply(b.kappa(basis_element(b.alg, j)), b.kappa(basis_element(b.alg, i)));
    antihom = std::max(antihom, (lhs - rhs).norm_inf());
  }
  r.check("kappa_antihomomorphism", antihom, pair_note);
  r.check("kappa_involutive",
          (b.coinvolution * b.coinvolution - Mat::Identity(d, d)).cwiseAbs().maxCoeff());
  r.check("kappa_unital", (b.kappa(one) - one).norm_inf());
  r.check("eps_kappa", (b.counit * b.coinvolution - b.counit).cwiseAbs().maxCoeff());
  r.check("mu_kappa", (b.haar * b.coinvolution - b.haar).cwiseAbs().maxCoeff());

  // Haar invariance
  double inv = 0.0;
  for (int k = 0; k < d; ++k) {
    TensorElement t = b.coproduct_of_basis(k);
    Vec left = t.coeffs.transpose() * b.haar.transpose();
    Vec right = t.coeffs * b.haar.transpose();
    Vec target = b.haar(k) * one.coeffs;
    inv = std::max({inv, (left - target).cwiseAbs().maxCoeff(),
                    (right - target).cwiseAbs().maxCoeff()});
  }
  r.check("haar_invariance", inv);
  r.check("haar_state", std::abs(b.mu(one) - cplx(1)));

  // faithfulness: Gram matrix mu(b_i* b_j) positive definite
  Mat gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      gram(i, j) = b.mu(multiply(adjoint(basis_element(b.alg, i)), basis_element(b.alg, j)));
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.adjoint()));
  double gmin = es.eigenvalues().minCoeff();
  if (gmin > tol * d)
    r.pass("haar_faithful", "min Gram eigenvalue " + format_number(gmin));
  else
    r.fail("haar_faithful", -gmin, "Gram matrix not positive definite");

  // strong invariance
  double sinv = 0.0;
  for (auto [i, j] : pairs)
    sinv = std::max(sinv, (strong_invariance_lhs(b, i, j) - strong_invariance_rhs(b, i, j))
                              .cwiseAbs()
                              .maxCoeff());
  r.check("strong_invariance", sinv, pair_note);

  return r;
}

}  // namespace qhf
