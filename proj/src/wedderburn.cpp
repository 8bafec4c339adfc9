#include "qhf/wedderburn.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

namespace qhf {

cplx haar_value(const AlgebraElement& a) {
  if (a.alg->pointwise) return a.coeffs.mean();
  return a.coeffs(0);
}

cplx mu_inner(const AlgebraElement& a, const AlgebraElement& b) {
  return haar_value(multiply(adjoint(a), b));
}

std::vector<AlgebraElement> orthonormalize(const std::vector<AlgebraElement>& v,
                                           double tol) {
  std::vector<AlgebraElement> onb;
  for (const auto& x : v) {
    AlgebraElement r = x;
    for (const auto& e : onb) r = r - mu_inner(e, r) * e;
    // second pass for numerical stability
    for (const auto& e : onb) r = r - mu_inner(e, r) * e;
    double n = std::sqrt(std::abs(mu_inner(r, r)));
    if (n > tol) onb.push_back((1.0 / n) * r);
  }
  return onb;
}

Vec span_coords(const std::vector<AlgebraElement>& onb, const AlgebraElement& x) {
  Vec c(onb.size());
  for (size_t i = 0; i < onb.size(); ++i) c(i) = mu_inner(onb[i], x);
  return c;
}

double span_residual(const std::vector<AlgebraElement>& onb, const AlgebraElement& x) {
  AlgebraElement r = x;
  for (const auto& e : onb) r = r - mu_inner(e, r) * e;
  return std::sqrt(std::abs(mu_inner(r, r)));
}

bool WedderburnDecomposition::commutative() const {
  return std::all_of(sizes.begin(), sizes.end(), [](int n) { return n == 1; });
}

namespace {

AlgebraElement from_coords(const std::vector<AlgebraElement>& onb, const Vec& c) {
  AlgebraElement out = zero_element(onb.front().alg);
  for (size_t i = 0; i < onb.size(); ++i) out = out + c(i) * onb[i];
  return out;
}

/// Matrix of left multiplication by a on span(onb) in onb coordinates.
Mat left_matrix(const std::vector<AlgebraElement>& onb, const AlgebraElement& a) {
  int m = static_cast<int>(onb.size());
  Mat out(m, m);
  for (int j = 0; j < m; ++j) out.col(j) = span_coords(onb, multiply(a, onb[j]));
  return out;
}

int subspace_rank(const std::vector<Vec>& vectors, double tol) {
  if (vectors.empty()) return 0;
  Mat m(vectors.front().size(), vectors.size());
  for (size_t i = 0; i < vectors.size(); ++i) m.col(i) = vectors[i];
  Eigen::JacobiSVD<Mat> svd(m);
  double cutoff = tol * std::max(1.0, svd.singularValues()(0));
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff) ++r;
  return r;
}

/// Eigenvalue clusters of a Hermitian matrix, separated by `gap`.
/// Returns (cluster mean, projection in the same basis) pairs.
std::vector<std::pair<double, Mat>> spectral_clusters(const Mat& h, double gap) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto& ev = es.eigenvalues();
  const Mat& v = es.eigenvectors();
  std::vector<std::pair<double, Mat>> out;
  int n = static_cast<int>(ev.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || ev(i) - ev(i - 1) > gap) {
      Mat block = v.middleCols(start, i - start);
      out.emplace_back(ev.segment(start, i - start).mean(), block * block.adjoint());
      start = i;
    }
  }
  return out;
}

struct CornerSplit {
  std::vector<AlgebraElement> diagonal;  // minimal projections e_11..e_nn
  bool ok = false;
};

/// Split a corner z B z isomorphic to M_n into n minimal projections using a
/// generic self-adjoint corner element.
CornerSplit split_corner(const std::vector<AlgebraElement>& onb,
                         const AlgebraElement& z, int n, double tol, double gap,
                         unsigned seed) {
  CornerSplit out;
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  AlgebraElement h = zero_element(z.alg);
  for (const auto& b : onb) {
    cplx c(dist(rng), dist(rng));
    h = h + c * multiply(multiply(z, b), z);
  }
  h = 0.5 * (h + adjoint(h));
  // shift the corner spectrum away from the complement's zero eigenvalue
  double shift = 3.0 * (1.0 + h.norm_inf() * h.dim());
  h = h + shift * z;
  Mat mh = left_matrix(onb, h);
  if ((mh - mh.adjoint()).cwiseAbs().maxCoeff() > 1e-7) return out;
  auto clusters = spectral_clusters(0.5 * (mh + mh.adjoint()), gap);
  Vec unit_coords = span_coords(onb, unit_element(z.alg));
  AlgebraElement total = zero_element(z.alg);
  for (auto& [lambda, proj] : clusters) {
    if (std::abs(lambda) < shift / 2) continue;  // complement of the corner
    AlgebraElement e = from_coords(onb, proj * unit_coords);
    if ((multiply(e, e) - e).norm_inf() > 100 * tol) return out;
    if ((adjoint(e) - e).norm_inf() > 100 * tol) return out;
    // minimality: e B e is one-dimensional
    std::vector<Vec> corner;
    for (const auto& b : onb)
      corner.push_back(span_coords(onb, multiply(multiply(e, b), e)));
    if (subspace_rank(corner, 1e-6) != 1) return out;
    out.diagonal.push_back(e);
    total = total + e;
  }
  if (static_cast<int>(out.diagonal.size()) != n) return out;
  if ((total - z).norm_inf() > 100 * tol) return out;
  out.ok = true;
  return out;
}

std::vector<AlgebraElement> corner_matrix_units(const std::vector<AlgebraElement>& onb,
                                                const AlgebraElement& z, int n,
                                                double tol, double gap,
                                                unsigned seed) {
  CornerSplit split;
  for (unsigned attempt = 0; attempt < 8 && !split.ok; ++attempt)
    split = split_corner(onb, z, n, tol, gap, seed + 1000 * attempt);
  if (!split.ok) throw std::runtime_error("failed to split a matrix block into minimal projections");

  // partial isometries e_1j = (e_11 b e_jj) / sqrt(c), c from w* w = c e_jj
  std::vector<AlgebraElement> first_row(n);
  first_row[0] = split.diagonal[0];
  for (int j = 1; j < n; ++j) {
    bool found = false;
    for (const auto& b : onb) {
      AlgebraElement w = multiply(multiply(split.diagonal[0], b), split.diagonal[j]);
      cplx c = mu_inner(split.diagonal[j], multiply(adjoint(w), w)) /
               mu_inner(split.diagonal[j], split.diagonal[j]);
      if (std::abs(c) < 1e-8) continue;
      first_row[j] = (1.0 / std::sqrt(std::abs(c))) * w;
      found = true;
      break;
    }
    if (!found) throw std::runtime_error("no partial isometry links two minimal projections");
  }
  std::vector<AlgebraElement> units(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      units[j * n + k] = multiply(adjoint(first_row[j]), first_row[k]);
  // relation audit
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if ((adjoint(units[j * n + k]) - units[k * n + j]).norm_inf() > 1e-6)
        throw std::runtime_error("matrix units fail the adjoint relation");
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          AlgebraElement lhs = multiply(units[j * n + k], units[p * n + q]);
          AlgebraElement rhs =
              k == p ? units[j * n + q] : zero_element(z.alg);
          if ((lhs - rhs).norm_inf() > 1e-6)
            throw std::runtime_error("matrix units fail the product relation");
        }
    }
  return units;
}

}  // namespace

WedderburnDecomposition wedderburn(const std::vector<AlgebraElement>& spanning,
                                   double tol, unsigned seed, double gap,
                                   bool with_matrix_units) {
  if (spanning.empty()) throw std::invalid_argument("empty spanning set");
  AlgebraPtr alg = spanning.front().alg;
  auto onb = orthonormalize(spanning, tol);
  int m = static_cast<int>(onb.size());

  if (span_residual(onb, unit_element(alg)) > 100 * tol)
    throw std::invalid_argument("span does not contain the unit");
  for (int i = 0; i < m; ++i) {
    if (span_residual(onb, adjoint(onb[i])) > 100 * tol)
      throw std::invalid_argument("span is not *-closed at basis element " +
                                  std::to_string(i));
    for (int j = 0; j < m; ++j)
      if (span_residual(onb, multiply(onb[i], onb[j])) > 100 * tol)
        throw std::invalid_argument("span is not closed under the product of basis elements " +
                                    std::to_string(i) + " and " + std::to_string(j));
  }

  // center of B: z with z b = b z for all basis b, as nullspace in B coords
  Mat constraints(m * m, m);
  for (int k = 0; k < m; ++k) {
    Mat l = left_matrix(onb, onb[k]);
    Mat r(m, m);
    for (int j = 0; j < m; ++j) r.col(j) = span_coords(onb, multiply(onb[j], onb[k]));
    // row block k: (L_k - R_k) acting on z coords
    constraints.middleRows(k * m, m) = l - r;
  }
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  double cutoff = 1e-7 * std::max(1.0, svd.singularValues().size() ? svd.singularValues()(0) : 1.0);
  std::vector<Vec> center_coords;
  for (int i = 0; i < svd.matrixV().cols(); ++i) {
    double s = i < svd.singularValues().size() ? svd.singularValues()(i) : 0.0;
    if (s <= cutoff) center_coords.push_back(svd.matrixV().col(i));
  }
  int center_dim = static_cast<int>(center_coords.size());
  if (center_dim == 0) throw std::logic_error("unital algebra with empty center");

  Vec unit_coords = span_coords(onb, unit_element(alg));

  for (unsigned attempt = 0; attempt < 8; ++attempt) {
    std::mt19937 rng(seed + attempt);
    std::normal_distribution<double> dist(0.0, 1.0);
    AlgebraElement zrand = zero_element(alg);
    for (const auto& c : center_coords) {
      cplx w(dist(rng), dist(rng));
      zrand = zrand + w * from_coords(onb, c);
    }
    zrand = 0.5 * (zrand + adjoint(zrand));
    Mat mz = left_matrix(onb, zrand);
    if ((mz - mz.adjoint()).cwiseAbs().maxCoeff() > 1e-7) continue;
    auto clusters = spectral_clusters(0.5 * (mz + mz.adjoint()), gap);
    if (static_cast<int>(clusters.size()) != center_dim) continue;

    std::vector<std::pair<int, AlgebraElement>> blocks;
    int total = 0;
    bool good = true;
    for (auto& [lambda, proj] : clusters) {
      AlgebraElement zi = from_coords(onb, proj * unit_coords);
      if ((multiply(zi, zi) - zi).norm_inf() > 100 * tol ||
          (adjoint(zi) - zi).norm_inf() > 100 * tol) {
        good = false;
        break;
      }
      std::vector<Vec> corner;
      for (const auto& b : onb)
        corner.push_back(span_coords(onb, multiply(multiply(zi, b), zi)));
      int rank = subspace_rank(corner, 1e-6);
      int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rank))));
      if (n * n != rank) {
        good = false;
        break;
      }
      blocks.emplace_back(n, zi);
      total += rank;
    }
    if (!good || total != m) continue;

    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    WedderburnDecomposition out;
    out.onb = onb;
    for (auto& [n, zi] : blocks) {
      out.sizes.push_back(n);
      out.central_idempotents.push_back(zi);
    }
    if (with_matrix_units) {
      for (size_t b = 0; b < blocks.size(); ++b) {
        int n = out.sizes[b];
        if (n == 1)
          out.matrix_units.push_back({out.central_idempotents[b]});
        else
          out.matrix_units.push_back(corner_matrix_units(
              onb, out.central_idempotents[b], n, tol, gap, seed + 7919 * (unsigned)b));
      }
    }
    return out;
  }
  throw std::runtime_error("wedderburn decomposition did not stabilize");
}

}  // namespace qhf
