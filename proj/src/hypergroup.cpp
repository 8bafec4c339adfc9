#include "qhf/hypergroup.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qhf {

namespace {

/// mu(m_s m_t) over the monomial basis (no star).
Mat plain_gram(const KacBundle& b) {
  int d = b.dim();
  Mat g = Mat::Zero(d, d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) {
      int r = b.alg->prod(s, t);
      if (r >= 0) g(s, t) = b.haar(r);
    }
  return g;
}

/// mu(m_s* m_t).
Mat star_gram(const KacBundle& b) {
  int d = b.dim();
  Mat g = Mat::Zero(d, d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) {
      int r = b.alg->prod(b.alg->star(s), t);
      if (r >= 0) g(s, t) = b.haar(r);
    }
  return g;
}

std::vector<AlgebraElement> range_onb(const KacBundle& bundle, const Mat& p,
                                      double tol) {
  std::vector<AlgebraElement> images;
  for (int k = 0; k < bundle.dim(); ++k)
    images.emplace_back(bundle.alg, Vec(p.col(k)));
  return orthonormalize(images, tol);
}

Mat delta_matrix(const KacBundle& b, const Vec& coeffs) {
  return vec_to_tensor(b.alg, b.coproduct * coeffs).coeffs;
}

double pos_residual(const AlgebraElement& a) {
  Mat m = regular_matrix(a);
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  return herm + std::max(0.0, -es.eigenvalues().minCoeff());
}

}  // namespace

AlgebraElement ConditionalExpectation::apply(const AlgebraElement& a) const {
  return {bundle.alg, p * a.coeffs};
}

ConditionalExpectation delsart_expectation(
    const KacBundle& bundle, const std::vector<AutomorphismCertificate>& gamma,
    double tol) {
  int d = bundle.dim();
  std::vector<Mat> group{Mat::Identity(d, d)};
  auto seen = [&](const Mat& m) {
    for (const auto& g : group)
      if ((g - m).cwiseAbs().maxCoeff() < 1e-8) return true;
    return false;
  };
  std::vector<Mat> gens;
  for (const auto& cert : gamma) {
    if (cert.route == CertRoute::rejected)
      throw std::invalid_argument("delsart expectation over an uncertified map: " +
                                  cert.detail);
    gens.push_back(cert.gamma);
  }
  for (size_t i = 0; i < group.size(); ++i) {
    for (const auto& g : gens) {
      Mat next = g * group[i];
      if (!seen(next)) group.push_back(next);
    }
    if (group.size() > 4096)
      throw std::invalid_argument("automorphism closure does not terminate");
  }

  ConditionalExpectation e;
  e.bundle = bundle;
  e.p = Mat::Zero(d, d);
  for (const auto& g : group) e.p += g;
  e.p /= static_cast<double>(group.size());
  e.range_basis = range_onb(bundle, e.p, tol);
  e.provenance = "delsart";
  return e;
}

Mat quotient_epimorphism(const KacBundle& bundle1, const KacBundle& bundle2,
                         const Eigen::VectorXi& projection) {
  Mat pi = Mat::Zero(bundle2.dim(), bundle1.dim());
  for (int g = 0; g < bundle1.dim(); ++g) pi(projection(g), g) = 1.0;
  return pi;
}

ConditionalExpectation double_coset_expectation(const KacBundle& bundle1,
                                                const KacBundle& bundle2,
                                                const Mat& pi, double tol) {
  int d = bundle1.dim();
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    Mat lhs = pi * delta_matrix(bundle1, Vec::Unit(d, k)) * pi.transpose();
    Mat rhs = delta_matrix(bundle2, Vec(pi.col(k)));
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  if (worst > tol)
    throw std::invalid_argument("pi does not intertwine the coproducts, residual " +
                                format_number(worst));
  double eps_res = (bundle2.counit * pi - bundle1.counit).cwiseAbs().maxCoeff();
  if (eps_res > tol)
    throw std::invalid_argument("pi does not intertwine the counits, residual " +
                                format_number(eps_res));
  double kap_res =
      (pi * bundle1.coinvolution - bundle2.coinvolution * pi).cwiseAbs().maxCoeff();
  if (kap_res > tol)
    throw std::invalid_argument("pi does not intertwine the coinvolutions, residual " +
                                format_number(kap_res));

  RowVec w = bundle2.haar * pi;  // mu_2(pi(m_i))
  Mat pl = Mat::Zero(d, d), pr = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Mat t = delta_matrix(bundle1, Vec::Unit(d, k));
    pl.col(k) = t.transpose() * w.transpose();
    pr.col(k) = t * w.transpose();
  }
  double comm = (pl * pr - pr * pl).cwiseAbs().maxCoeff();
  if (comm > tol)
    throw std::invalid_argument("one-sided projections fail to commute, residual " +
                                format_number(comm));

  ConditionalExpectation e;
  e.bundle = bundle1;
  e.p = pl * pr;
  e.range_basis = range_onb(bundle1, e.p, tol);
  e.provenance = "double_coset";
  return e;
}

ConditionalExpectation orbital_expectation(const KacBundle& bundle,
                                           const Partition& partition,
                                           const std::vector<Vec>& weights,
                                           double tol) {
  int d = bundle.dim();
  partition.validate(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (bundle.alg->prod(i, j) != bundle.alg->prod(j, i))
        throw std::invalid_argument("orbital expectation needs a commutative algebra");
  int eb = partition.block_of(0);
  if (partition.blocks[eb].size() != 1)
    throw std::invalid_argument("the identity's block must be the singleton {e}");
  // star-stability under the bundle coinvolution star (delta_x -> delta_{x^{-1}})
  auto star_index = [&](int x) {
    AlgebraElement st = bundle.star_op(basis_element(bundle.alg, x));
    int best = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(st.coeffs(i)) > std::abs(st.coeffs(best))) best = i;
    if ((st - basis_element(bundle.alg, best)).norm_inf() > tol)
      throw std::invalid_argument("the coinvolution star does not permute the basis");
    return best;
  };
  for (const auto& block : partition.blocks) {
    std::vector<int> dagger;
    for (int x : block) dagger.push_back(star_index(x));
    std::sort(dagger.begin(), dagger.end());
    bool found = false;
    for (const auto& other : partition.blocks) {
      auto sorted = other;
      std::sort(sorted.begin(), sorted.end());
      if (sorted == dagger) found = true;
    }
    if (!found)
      throw std::invalid_argument("the partition is not star-stable");
  }
  if (weights.size() != partition.blocks.size())
    throw std::invalid_argument("one weight vector per block required");
  for (size_t y = 0; y < weights.size(); ++y) {
    if (weights[y].size() != d)
      throw std::invalid_argument("weight vectors live over the full basis");
    cplx total = 0;
    for (int x = 0; x < d; ++x) {
      cplx q = weights[y](x);
      bool in_block = partition.block_of(x) == static_cast<int>(y);
      if (!in_block && std::abs(q) > tol)
        throw std::invalid_argument("weights must be supported on their block");
      if (std::abs(q.imag()) > tol || q.real() < -tol)
        throw std::invalid_argument("weights must be nonnegative");
      total += q;
    }
    if (std::abs(total - cplx(1)) > tol)
      throw std::invalid_argument("weights must be probability vectors");
  }

  ConditionalExpectation e;
  e.bundle = bundle;
  e.p = Mat::Zero(d, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) e.p(x, y) = weights[partition.block_of(x)](y);
  e.range_basis = range_onb(bundle, e.p, tol);
  e.provenance = "orbital";
  return e;
}

AlgebraElement counit_projection(const KacBundle& bundle, double tol) {
  int d = bundle.dim();
  Mat stacked(d * d, d);
  for (int k = 0; k < d; ++k) {
    AlgebraElement bk = basis_element(bundle.alg, k);
    stacked.middleRows(k * d, d) =
        left_mult_matrix(bk) - bundle.eps(bk) * Mat::Identity(d, d);
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = tol * std::max(1.0, sv(0));
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < cut) ++null_dim;
  if (null_dim != 1)
    throw std::invalid_argument("counit eigenspace has dimension " +
                                std::to_string(null_dim));
  AlgebraElement p{bundle.alg, Vec(svd.matrixV().col(d - 1))};
  cplx scale = bundle.eps(p);
  if (std::abs(scale) < tol)
    throw std::invalid_argument("counit projection is annihilated by eps");
  return (1.0 / scale) * p;
}

Report check_expectation_hypotheses(const ConditionalExpectation& e, double tol) {
  const KacBundle& b = e.bundle;
  int d = b.dim();
  Report r{"expectation (" + e.provenance + ")", tol, {}, {}};
  r.value("dim_B", static_cast<double>(e.dim_B()));

  r.check("projection", (e.p * e.p - e.p).cwiseAbs().maxCoeff());
  r.check("unital", (e.p * b.alg->unit_coeffs() - b.alg->unit_coeffs())
                        .cwiseAbs()
                        .maxCoeff());
  r.check("mu_invariance", (b.haar * e.p - b.haar).cwiseAbs().maxCoeff());

  // positivity on a generating positive family m_k* m_k plus seeded elements
  {
    double worst = 0.0;
    std::mt19937 rng(7551);
    std::normal_distribution<double> dist;
    std::vector<AlgebraElement> family;
    for (int k = 0; k < d; ++k) {
      AlgebraElement mk = basis_element(b.alg, k);
      family.push_back(multiply(adjoint(mk), mk));
    }
    for (int t = 0; t < 3; ++t) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v(i) = cplx(dist(rng), dist(rng));
      AlgebraElement x{b.alg, v};
      family.push_back(multiply(adjoint(x), x));
    }
    for (const auto& a : family) worst = std::max(worst, pos_residual(e.apply(a)));
    r.check("positivity", worst);
  }

  // bimodule property P(b1 a b2) = b1 P(a) b2 on sampled triples
  {
    double worst = 0.0;
    std::mt19937 rng(7552);
    int trials = std::min(64, e.dim_B() * e.dim_B());
    std::uniform_int_distribution<int> pick_b(0, e.dim_B() - 1);
    std::uniform_int_distribution<int> pick_a(0, d - 1);
    for (int t = 0; t < trials; ++t) {
      const auto& b1 = e.range_basis[pick_b(rng)];
      const auto& b2 = e.range_basis[pick_b(rng)];
      AlgebraElement a = basis_element(b.alg, pick_a(rng));
      AlgebraElement lhs = e.apply(multiply(multiply(b1, a), b2));
      AlgebraElement rhs = multiply(multiply(b1, e.apply(a)), b2);
      worst = std::max(worst, (lhs - rhs).norm_inf());
    }
    r.check("bimodule", worst);
  }

  // condition 1: ker P is a coideal, (P (x) P)Delta(x) = (P (x) P)Delta(Px)
  {
    double worst = 0.0;
    Mat ker = Mat::Identity(d, d) - e.p;
    for (int k = 0; k < d; ++k) {
      Mat x = e.p * delta_matrix(b, Vec(ker.col(k))) * e.p.transpose();
      worst = std::max(worst, x.cwiseAbs().maxCoeff());
    }
    r.check("condition1_kernel_coideal", worst);
  }

  // condition 2 / (A): P commutes with kappa, hence with star
  r.check("condition2_kappa",
          (e.p * b.coinvolution - b.coinvolution * e.p).cwiseAbs().maxCoeff());
  {
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
      AlgebraElement mk = basis_element(b.alg, k);
      worst = std::max(
          worst, (b.star_op(e.apply(mk)) - e.apply(b.star_op(mk))).norm_inf());
    }
    r.check("condition2_star", worst);
  }

  // condition 4: counit, directly or through p_eps
  double direct = (b.counit * e.p - b.counit).cwiseAbs().maxCoeff();
  if (direct <= tol) {
    r.check("counit", direct, "eps P = eps");
  } else {
    AlgebraElement pe = counit_projection(b, tol);
    AlgebraElement ppe = e.apply(pe);
    AlgebraElement one = unit_element(b.alg);
    double worst = 0.0;
    for (const auto& bb : e.range_basis) {
      TensorElement db{b.alg, delta_matrix(b, bb.coeffs)};
      auto project = [&](const TensorElement& t) {
        return Mat(e.p * t.coeffs * e.p.transpose());
      };
      Mat l1 = project(multiply(tensor_product(pe, one), db));
      Mat r1 = project(multiply(tensor_product(ppe, one), db));
      Mat l2 = project(multiply(tensor_product(one, pe), db));
      Mat r2 = project(multiply(tensor_product(one, ppe), db));
      worst = std::max({worst, (l1 - r1).cwiseAbs().maxCoeff(),
                        (l2 - r2).cwiseAbs().maxCoeff()});
    }
    r.check("counit", worst, "via the counit projection p_eps");
  }
  return r;
}

AlgebraElement HypergroupBundle::element(const Vec& c) const {
  Vec out = Vec::Zero(base.dim());
  for (int i = 0; i < dim_B(); ++i) out += c(i) * basis[i].coeffs;
  return {base.alg, out};
}

Vec HypergroupBundle::coords(const AlgebraElement& a) const {
  Vec out(dim_B());
  for (int i = 0; i < dim_B(); ++i) out(i) = mu_inner(basis[i], a);
  return out;
}

TensorElement HypergroupBundle::coproduct_in_A(const Vec& c) const {
  int dB = dim_B();
  Mat cb = Mat::Zero(dB, dB);
  for (int u = 0; u < dB; ++u) {
    Mat cu = Eigen::Map<const Mat>(coproduct.col(u).data(), dB, dB).transpose();
    cb += c(u) * cu;
  }
  Mat m(base.dim(), dB);
  for (int i = 0; i < dB; ++i) m.col(i) = basis[i].coeffs;
  return {base.alg, m * cb * m.transpose()};
}

HypergroupBundle induced_coproduct(const ConditionalExpectation& e, double tol,
                                   bool allow_failed_hypotheses) {
  Report hyp = check_expectation_hypotheses(e, tol);
  if (!hyp.all_ok() && !allow_failed_hypotheses) {
    std::string bad;
    for (const auto& c : hyp.checks)
      if (c.status == CheckStatus::fail) { bad = c.name; break; }
    throw std::invalid_argument("expectation hypotheses fail at " + bad +
                                " (override for counterexample studies)");
  }

  const KacBundle& b = e.bundle;
  int d = b.dim();
  HypergroupBundle h;
  h.base = b;
  h.p = e.p;
  h.basis = e.range_basis;
  h.provenance = e.provenance;
  int dB = h.dim_B();

  Mat m(d, dB);
  for (int i = 0; i < dB; ++i) m.col(i) = h.basis[i].coeffs;
  Mat w = m.adjoint() * star_gram(b);  // <b_i, m_s>

  h.coproduct.resize(dB * dB, dB);
  h.counit.resize(dB);
  h.haar.resize(dB);
  h.star_map.resize(dB, dB);
  h.coinv.resize(dB, dB);
  double worst = 0.0, delsart_worst = 0.0;
  for (int k = 0; k < dB; ++k) {
    Mat t = delta_matrix(b, h.basis[k].coeffs);
    Mat x = e.p * t * e.p.transpose();
    Mat c = w * x * w.transpose();
    worst = std::max(worst, (x - m * c * m.transpose()).cwiseAbs().maxCoeff());
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j) h.coproduct(i * dB + j, k) = c(i, j);
    if (e.provenance == "delsart") {
      // Delsart identity (P (x) P)Delta(b) = (id (x) P)Delta(b)
      delsart_worst = std::max(
          delsart_worst, (x - t * e.p.transpose()).cwiseAbs().maxCoeff());
    }

    h.counit(k) = b.eps(h.basis[k]);
    h.haar(k) = b.mu(h.basis[k]);
    AlgebraElement st = b.star_op(h.basis[k]);
    h.star_map.col(k) = w * st.coeffs;
    worst = std::max(worst, span_residual(h.basis, st));
    AlgebraElement ka = b.kappa(h.basis[k]);
    h.coinv.col(k) = w * ka.coeffs;
    worst = std::max(worst, span_residual(h.basis, ka));
  }
  h.basis_residual = worst;
  h.delsart_identity_residual = e.provenance == "delsart" ? delsart_worst : -1.0;
  if (worst > std::max(tol, 1e-7) * 100 && !allow_failed_hypotheses)
    throw std::invalid_argument("range basis fails to absorb Delta~, residual " +
                                format_number(worst));
  return h;
}

namespace {

/// Faithful *-representation of the whole bundle algebra from its Wedderburn
/// matrix units: rho(a) = block diagonal of the coordinates of a.
struct BlockRep {
  std::vector<Mat> rho;  // one matrix per monomial basis element
  int dim = 0;
};

BlockRep block_representation(const KacBundle& b, double tol) {
  int d = b.dim();
  std::vector<AlgebraElement> monos;
  for (int k = 0; k < d; ++k) monos.push_back(basis_element(b.alg, k));
  auto wed = wedderburn(monos, tol, 12345, 1e-6, true);

  Mat u(d, d);
  std::vector<std::pair<int, int>> place;  // (block offset, unit column)
  int col = 0, off = 0;
  std::vector<int> offsets;
  for (size_t blk = 0; blk < wed.sizes.size(); ++blk) {
    offsets.push_back(off);
    int n = wed.sizes[blk];
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) u.col(col++) = wed.matrix_units[blk][j * n + k].coeffs;
    off += n;
  }
  Mat uinv = u.inverse();

  BlockRep rep;
  rep.dim = off;
  for (int s = 0; s < d; ++s) {
    Vec c = uinv * Vec::Unit(d, s);
    Mat r = Mat::Zero(off, off);
    int idx = 0;
    for (size_t blk = 0; blk < wed.sizes.size(); ++blk) {
      int n = wed.sizes[blk], o = offsets[blk];
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) r(o + j, o + k) = c(idx++);
    }
    rep.rho.push_back(std::move(r));
  }
  return rep;
}

Mat rep_of_tensor(const BlockRep& rep, const Mat& coeffs) {
  int d = static_cast<int>(coeffs.rows()), n = rep.dim;
  Mat out = Mat::Zero(n * n, n * n);
  for (int s = 0; s < d; ++s) {
    Mat y = Mat::Zero(n, n);
    bool any = false;
    for (int t = 0; t < d; ++t)
      if (std::abs(coeffs(s, t)) > 1e-15) { y += coeffs(s, t) * rep.rho[t]; any = true; }
    if (!any) continue;
    const Mat& x = rep.rho[s];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(x(i, j)) > 1e-15)
          out.block(i * n, j * n, n, n) += x(i, j) * y;
  }
  return out;
}

double psd_residual(const Mat& m) {
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
  return herm + std::max(0.0, -es.eigenvalues().minCoeff());
}

}  // namespace

Report verify_hypergroup(const HypergroupBundle& h, double tol, int cp_dim_limit) {
  const KacBundle& base = h.base;
  int dB = h.dim_B(), d = base.dim();
  Report r{"hypergroup (" + h.provenance + ")", tol, {}, {}};
  r.value("dim_B", static_cast<double>(dB));

  std::vector<Mat> c;  // c[k](i, j)
  for (int k = 0; k < dB; ++k) {
    Mat ck(dB, dB);
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j) ck(i, j) = h.coproduct(i * dB + j, k);
    c.push_back(std::move(ck));
  }
  Vec unit_b = h.coords(unit_element(base.alg));

  // coassociativity
  {
    double worst = 0.0;
    for (int k = 0; k < dB; ++k) {
      for (int i = 0; i < dB; ++i)
        for (int j = 0; j < dB; ++j)
          for (int l = 0; l < dB; ++l) {
            cplx lhs = 0, rhs = 0;
            for (int s = 0; s < dB; ++s) {
              lhs += c[k](s, l) * c[s](i, j);
              rhs += c[k](i, s) * c[s](j, l);
            }
            worst = std::max(worst, std::abs(lhs - rhs));
          }
    }
    r.check("coassociativity", worst);
  }

  // counit
  {
    double worst = 0.0;
    for (int k = 0; k < dB; ++k) {
      Vec left = c[k].transpose() * h.counit.transpose();
      Vec right = c[k] * h.counit.transpose();
      worst = std::max(worst, (left - Vec::Unit(dB, k)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (right - Vec::Unit(dB, k)).cwiseAbs().maxCoeff());
    }
    r.check("counit", worst);
  }

  // coinvolution axioms: co3 Delta~(b*) = Sigma (star (x) star) Delta~(b),
  // co4 star involutive
  {
    double worst = 0.0;
    for (int k = 0; k < dB; ++k) {
      Mat lhs = Mat::Zero(dB, dB);
      for (int u = 0; u < dB; ++u) lhs += h.star_map(u, k) * c[u];
      Mat rhs = (h.star_map * c[k].conjugate() * h.star_map.transpose()).transpose();
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    r.check("co3", worst);
    r.check("co4", (h.star_map * h.star_map.conjugate() - Mat::Identity(dB, dB))
                       .cwiseAbs()
                       .maxCoeff());
  }

  BlockRep rep = block_representation(base, tol);

  // positivity of Delta~ on a generating positive family
  {
    double worst = 0.0;
    std::vector<AlgebraElement> family{unit_element(base.alg)};
    for (int k = 0; k < dB; ++k)
      family.push_back(multiply(adjoint(h.basis[k]), h.basis[k]));
    std::mt19937 rng(9917);
    std::normal_distribution<double> dist;
    for (int t = 0; t < 2; ++t) {
      Vec v(dB);
      for (int i = 0; i < dB; ++i) v(i) = cplx(dist(rng), dist(rng));
      AlgebraElement x = h.element(v);
      family.push_back(multiply(adjoint(x), x));
    }
    for (const auto& a : family) {
      TensorElement da = h.coproduct_in_A(h.coords(a));
      worst = std::max(worst, psd_residual(rep_of_tensor(rep, da.coeffs)));
    }
    r.check("delta_positive", worst);
  }

  // complete positivity via blockwise Choi matrices of Delta~ P
  if (d > cp_dim_limit) {
    r.skip("complete_positivity",
           "dim A = " + std::to_string(d) + " exceeds the Choi limit " +
               std::to_string(cp_dim_limit));
  } else {
    std::vector<AlgebraElement> monos;
    for (int k = 0; k < d; ++k) monos.push_back(basis_element(base.alg, k));
    auto wed = wedderburn(monos, tol, 12345, 1e-6, true);
    double worst = 0.0;
    int n2 = rep.dim * rep.dim;
    for (size_t blk = 0; blk < wed.sizes.size(); ++blk) {
      int n = wed.sizes[blk];
      Mat choi = Mat::Zero(n * n2, n * n2);
      for (int jj = 0; jj < n; ++jj)
        for (int kk = 0; kk < n; ++kk) {
          const AlgebraElement& unit = wed.matrix_units[blk][jj * n + kk];
          Mat x = h.p * delta_matrix(base, unit.coeffs) * h.p.transpose();
          choi.block(jj * n2, kk * n2, n2, n2) = rep_of_tensor(rep, x);
        }
      worst = std::max(worst, psd_residual(choi));
    }
    r.check("complete_positivity", worst);
  }

  // QH1: the positive definite elements span B. A strictly positive definite
  // self-adjoint element is found by maximizing the minimal eigenvalue of
  // the dual Gram G(b)_ij = (xi_i . xi_j^+)(b); its existence makes the
  // positive definite cone full in the star-real slice, whose complex span
  // is B.
  {
    std::vector<Mat> g;  // G over basis directions
    for (int k = 0; k < dB; ++k) g.push_back(Mat(c[k] * h.star_map.adjoint()));
    auto gram = [&](const Vec& x) {
      Mat out = Mat::Zero(dB, dB);
      for (int k = 0; k < dB; ++k) out += x(k) * g[k];
      return out;
    };
    auto symmetrize = [&](const Vec& y) {
      return Vec(0.5 * (y + h.star_map * y.conjugate()));
    };
    auto lam_min = [&](const Vec& x) {
      Mat gm = gram(x);
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gm + gm.adjoint()));
      return es.eigenvalues()(0);
    };
    // deterministic candidate: least squares toward G(b) = identity
    Mat sys(dB * dB, dB);
    for (int k = 0; k < dB; ++k)
      sys.col(k) = Eigen::Map<const Vec>(g[k].data(), dB * dB);
    Vec target = Eigen::Map<const Vec>(Mat(Mat::Identity(dB, dB)).data(), dB * dB);
    Vec lstsq = symmetrize(sys.colPivHouseholderQr().solve(target));

    double best = -1e300;
    for (Vec x : {symmetrize(unit_b), lstsq}) {
      double nx = x.norm();
      if (nx < 1e-12) continue;
      x /= nx;
      double step = 0.5;
      for (int it = 0; it < 200; ++it) {
        Mat gm = gram(x);
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gm + gm.adjoint()));
        double lam = es.eigenvalues()(0);
        best = std::max(best, lam);
        // subgradient averaged over the bottom eigencluster
        double spread = es.eigenvalues()(dB - 1) - lam;
        double cluster = lam + 1e-8 + 1e-6 * std::abs(spread);
        Vec grad = Vec::Zero(dB);
        int members = 0;
        for (int i = 0; i < dB && es.eigenvalues()(i) <= cluster; ++i) {
          Vec v = es.eigenvectors().col(i);
          for (int k = 0; k < dB; ++k) grad(k) += (v.adjoint() * g[k] * v)(0);
          ++members;
        }
        grad /= static_cast<double>(members);
        Vec next = symmetrize(x + step * grad.conjugate());
        double nn = next.norm();
        if (nn < 1e-12) break;
        next /= nn;
        if (lam_min(next) >= lam) x = next;
        else step *= 0.7;
        if (step < 1e-5) break;
      }
    }
    if (best > tol)
      r.pass("positive_definite_span",
             "strictly positive definite element, min eigenvalue " +
                 format_number(best));
    else
      r.fail("positive_definite_span", -best,
             "no strictly positive definite element found");
  }

  // Haar uniqueness: the invariance equations have a one-dimensional
  // solution space, spanned by mu with mu+ = mu
  {
    Mat sys(2 * dB * dB, dB);
    for (int k = 0; k < dB; ++k)
      for (int j = 0; j < dB; ++j) {
        for (int i = 0; i < dB; ++i) {
          sys(k * dB + j, i) = c[k](i, j) - (i == k ? unit_b(j) : cplx(0));
          sys(dB * dB + k * dB + j, i) =
              c[k](j, i) - (i == k ? unit_b(j) : cplx(0));
        }
      }
    Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = std::max(tol, 1e-8) * std::max(1.0, sv(0));
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) < cut) ++null_dim;
    if (null_dim != 1) {
      r.fail("haar_unique", 1.0,
             "invariant functional space has dimension " +
                 std::to_string(null_dim));
    } else {
      RowVec xi = svd.matrixV().col(dB - 1).transpose();
      cplx scale = (xi * unit_b)(0);
      double res = 1.0;
      if (std::abs(scale) > tol) {
        xi /= scale;
        res = (xi - h.haar).cwiseAbs().maxCoeff();
      }
      r.check("haar_unique", res, "normalized solution equals mu");
      // mu+ = mu
      double plus = 0.0;
      for (int k = 0; k < dB; ++k) {
        cplx mu_star = (h.haar * h.star_map.col(k))(0);
        plus = std::max(plus, std::abs(std::conj(mu_star) - h.haar(k)));
      }
      r.check("haar_plus", plus);
    }
  }

  // strong invariance of mu on B
  {
    Mat gm2 = plain_gram(base);
    double worst = 0.0;
    auto pairs = sample_pairs(dB);
    std::vector<TensorElement> deltas;
    for (int k = 0; k < dB; ++k)
      deltas.push_back(h.coproduct_in_A(Vec::Unit(dB, k)));
    for (auto [i, j] : pairs) {
      Vec lhs = (base.coinvolution * deltas[i].coeffs) * (gm2 * h.basis[j].coeffs);
      Vec rhs = deltas[j].coeffs * (gm2.transpose() * h.basis[i].coeffs);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    r.check("strong_invariance", worst,
            static_cast<int>(pairs.size()) < dB * dB ? "sampled" : "");
  }

  // faithfulness of mu on B: the ONB Gram is the identity
  {
    double worst = 0.0;
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j)
        worst = std::max(worst, std::abs(mu_inner(h.basis[i], h.basis[j]) -
                                         (i == j ? cplx(1) : cplx(0))));
    r.check("faithful", worst);
  }

  r.check("basis_closure", h.basis_residual);
  if (h.delsart_identity_residual >= 0)
    r.check("delsart_identity", h.delsart_identity_residual);
  return r;
}

std::optional<SymmetryWitness> symmetry_witness(const HypergroupBundle& h,
                                                double tol) {
  int dB = h.dim_B();
  SymmetryWitness best{-1, 0.0};
  for (int k = 0; k < dB; ++k) {
    Mat ck(dB, dB);
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j) ck(i, j) = h.coproduct(i * dB + j, k);
    double defect = (ck - ck.transpose()).cwiseAbs().maxCoeff();
    if (defect > best.defect) best = {k, defect};
  }
  if (best.defect <= tol) return std::nullopt;
  return best;
}

bool dual_pushforward_check(const HypergroupBundle& h, double tol) {
  const KacBundle& base = h.base;
  int d = base.dim(), dB = h.dim_B();
  Mat m(d, dB);
  for (int i = 0; i < dB; ++i) m.col(i) = h.basis[i].coeffs;
  Mat w = m.adjoint() * star_gram(base);
  Mat wp = w * h.p;  // (xi_i P)(m_s)

  std::vector<Mat> c;
  for (int k = 0; k < dB; ++k) {
    Mat ck(dB, dB);
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j) ck(i, j) = h.coproduct(i * dB + j, k);
    c.push_back(std::move(ck));
  }

  double worst = 0.0;
  for (int s = 0; s < d; ++s) {
    // multiplicativity on delta_s
    Vec x = wp.col(s);  // B coords of P m_s
    Mat lhs = Mat::Zero(dB, dB);
    for (int u = 0; u < dB; ++u) lhs += x(u) * c[u];
    Mat t = delta_matrix(base, Vec::Unit(d, s));
    Mat rhs = wp * t * wp.transpose();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());

    // star compatibility
    AlgebraElement ms = basis_element(base.alg, s);
    AlgebraElement diff = base.star_op(AlgebraElement{base.alg, h.p * ms.coeffs});
    diff = diff - AlgebraElement{base.alg, h.p * base.star_op(ms).coeffs};
    worst = std::max(worst, (w * diff.coeffs).cwiseAbs().maxCoeff());
  }
  return worst <= tol;
}

StructureConstants structure_constants(const HypergroupBundle& h,
                                       const std::vector<AlgebraElement>& basis,
                                       double tol) {
  int dB = h.dim_B();
  if (static_cast<int>(basis.size()) != dB)
    throw std::invalid_argument("structure constants need a full basis of B");
  Mat x(dB, dB);
  for (int k = 0; k < dB; ++k) {
    if (span_residual(h.basis, basis[k]) > std::max(tol, 1e-7) * 10)
      throw std::invalid_argument("basis element " + std::to_string(k) +
                                  " is not in B");
    x.col(k) = h.coords(basis[k]);
  }
  Eigen::FullPivLU<Mat> lu(x);
  if (!lu.isInvertible())
    throw std::invalid_argument("structure constant basis does not span B");
  Mat xinv = lu.inverse();

  std::vector<Mat> c;
  for (int k = 0; k < dB; ++k) {
    Mat ck(dB, dB);
    for (int i = 0; i < dB; ++i)
      for (int j = 0; j < dB; ++j) ck(i, j) = h.coproduct(i * dB + j, k);
    c.push_back(std::move(ck));
  }

  StructureConstants out;
  for (int k = 0; k < dB; ++k) {
    Mat dk = Mat::Zero(dB, dB);
    Vec xk = x.col(k);
    for (int u = 0; u < dB; ++u) dk += xk(u) * c[u];
    Mat ck = xinv * dk * xinv.transpose();
    out.residual = std::max(out.residual,
                            (x * ck * x.transpose() - dk).cwiseAbs().maxCoeff());
    out.c.push_back(std::move(ck));
  }

  // DJS property for a commutative bundle with a minimal idempotent basis
  bool idempotent_basis = true;
  for (int k = 0; k < dB && idempotent_basis; ++k) {
    if ((multiply(basis[k], basis[k]) - basis[k]).norm_inf() > 1e-7 ||
        (adjoint(basis[k]) - basis[k]).norm_inf() > 1e-7)
      idempotent_basis = false;
    for (int l = 0; l < dB && idempotent_basis; ++l) {
      if (l == k) continue;
      if (multiply(basis[k], basis[l]).norm_inf() > 1e-7) idempotent_basis = false;
    }
  }
  if (idempotent_basis) {
    out.djs_checked = true;
    out.djs_nonnegative = true;
    out.djs_min = 0.0;
    for (int w = 0; w < dB; ++w)
      for (int y = 0; y < dB; ++y)
        for (int z = 0; z < dB; ++z) {
          cplx v = out.c[w](y, z);
          if (std::abs(v.imag()) > 1e-9) out.djs_nonnegative = false;
          out.djs_min = std::min(out.djs_min, v.real());
          if (v.real() < -1e-9) out.djs_nonnegative = false;
        }
  }
  return out;
}

}  // namespace qhf
