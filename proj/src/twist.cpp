#include "qhf/twist.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

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

/// (Delta (x) id)(t) as a sparse triple, Delta taken from the bundle.
TripleTensor delta_leg1(const KacBundle& b, const TensorElement& t) {
  TripleTensor out{b.alg, {}};
  for (auto [i, j] : nonzeros(t.coeffs)) {
    TensorElement di = b.coproduct_of_basis(i);
    for (auto [p, q] : nonzeros(di.coeffs))
      out.add(p, q, j, t.coeffs(i, j) * di.coeffs(p, q));
  }
  return out;
}

/// (id (x) Delta)(t).
TripleTensor delta_leg2(const KacBundle& b, const TensorElement& t) {
  TripleTensor out{b.alg, {}};
  for (auto [i, j] : nonzeros(t.coeffs)) {
    TensorElement dj = b.coproduct_of_basis(j);
    for (auto [p, q] : nonzeros(dj.coeffs))
      out.add(i, p, q, t.coeffs(i, j) * dj.coeffs(p, q));
  }
  return out;
}

/// (f (x) f)(t) for a linear map f given by its matrix.
TensorElement map_both_legs(const TensorElement& t, const Mat& f) {
  return {t.alg, f * t.coeffs * f.transpose()};
}

std::vector<TensorElement> delta_generators(const KacBundle& bundle) {
  std::vector<TensorElement> out;
  for (int g : bundle.alg->group->generators())
    out.push_back(bundle.coproduct_of_basis(g));
  return out;
}

/// Generators of the center condition: lambda(g) (x) 1 and 1 (x) lambda(g).
std::vector<TensorElement> one_sided_generators(const KacBundle& bundle) {
  std::vector<TensorElement> out;
  AlgebraElement one = unit_element(bundle.alg);
  for (int g : bundle.alg->group->generators()) {
    AlgebraElement lg = basis_element(bundle.alg, g);
    out.push_back(tensor_product(lg, one));
    out.push_back(tensor_product(one, lg));
  }
  return out;
}

}  // namespace

void validate_cocycle_table(const CocycleTable& t, double tol) {
  if (t.omega.rows() != t.omega.cols())
    throw std::invalid_argument("cocycle table must be square");
  for (int i = 0; i < t.omega.rows(); ++i)
    for (int j = 0; j < t.omega.cols(); ++j)
      if (std::abs(std::abs(t.omega(i, j)) - 1.0) > tol)
        throw std::invalid_argument("cocycle table entry off the unit circle at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
}

bool is_counital_table(const CocycleTable& t, double tol) {
  for (int i = 0; i < t.dual_order(); ++i)
    if (std::abs(t.omega(0, i) - cplx(1)) > tol || std::abs(t.omega(i, 0) - cplx(1)) > tol)
      return false;
  return true;
}

CocycleTable cocycle_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int k = j.at("dual_order").get<int>();
  auto entries = j.at("omega");
  if (static_cast<int>(entries.size()) != k * k)
    throw std::invalid_argument("omega must have dual_order^2 entries");
  CocycleTable t;
  t.omega.resize(k, k);
  for (int idx = 0; idx < k * k; ++idx) {
    double re = entries[idx][0].get<double>();
    double im = entries[idx][1].get<double>();
    t.omega(idx / k, idx % k) = cplx(re, im);
  }
  return t;
}

std::string cocycle_to_json(const CocycleTable& t) {
  nlohmann::ordered_json j;
  int k = t.dual_order();
  j["dual_order"] = k;
  auto entries = nlohmann::json::array();
  for (int idx = 0; idx < k * k; ++idx) {
    cplx v = t.omega(idx / k, idx % k);
    entries.push_back({v.real(), v.imag()});
  }
  j["omega"] = entries;
  return j.dump(2);
}

CocycleTable cyclic_i_table(int dual_order, std::array<int, 3> triple) {
  CocycleTable t;
  t.omega = Mat::Constant(dual_order, dual_order, cplx(1));
  for (int k = 0; k < 3; ++k) {
    int x = triple[k], y = triple[(k + 1) % 3];
    if (x <= 0 || y <= 0 || x >= dual_order || y >= dual_order || x == y)
      throw std::invalid_argument("cyclic triple must consist of distinct nontrivial dual indices");
    t.omega(x, y) = cplx(0, 1);
    t.omega(y, x) = cplx(0, -1);
  }
  return t;
}

TensorElement lift_cocycle(const CocycleTable& t, const IdempotentFamily& fam) {
  validate_cocycle_table(t);
  if (t.dual_order() != static_cast<int>(fam.p.size()))
    throw std::invalid_argument("cocycle table size does not match the dual group");
  AlgebraPtr alg = fam.p.front().alg;
  TensorElement out{alg, Mat::Zero(alg->dim(), alg->dim())};
  for (int x = 0; x < t.dual_order(); ++x)
    for (int y = 0; y < t.dual_order(); ++y)
      out = out + t.omega(x, y) * tensor_product(fam.p[x], fam.p[y]);
  return out;
}

const char* to_string(CocycleClass c) {
  switch (c) {
    case CocycleClass::cocycle: return "cocycle";
    case CocycleClass::pseudo_cocycle: return "pseudo_cocycle";
    case CocycleClass::invalid: return "invalid";
  }
  return "?";
}

const char* to_string(CoinvolutivityClass c) {
  switch (c) {
    case CoinvolutivityClass::strong: return "strong";
    case CoinvolutivityClass::coinvolutive: return "coinvolutive";
    case CoinvolutivityClass::pseudo_coinvolutive: return "pseudo_coinvolutive";
    case CoinvolutivityClass::none: return "none";
  }
  return "?";
}

CocycleClass classify_cocycle(const TensorElement& Omega, const KacBundle& bundle,
                              double tol) {
  if (!is_unitary(Omega, tol)) return CocycleClass::invalid;
  TripleTensor left = triple_multiply(embed_with_unit(Omega, 2), delta_leg1(bundle, Omega));
  TripleTensor right = triple_multiply(embed_with_unit(Omega, 0), delta_leg2(bundle, Omega));
  if (triple_sub(left, right).norm_inf() <= tol) return CocycleClass::cocycle;

  TensorElement ostar = adjoint(Omega);
  TripleTensor d2 = triple_multiply(
      delta_leg2(bundle, ostar),
      triple_multiply(embed_with_unit(ostar, 0), left));
  double worst = 0.0;
  for (int g : bundle.alg->group->generators()) {
    TripleTensor ggg{bundle.alg, {}};
    ggg.add(g, g, g, 1.0);
    worst = std::max(worst, triple_commutator_norm(d2, ggg));
  }
  return worst <= tol ? CocycleClass::pseudo_cocycle : CocycleClass::invalid;
}

AlgebraElement gauge_unitary(const TensorElement& Omega, const KacBundle& bundle) {
  AlgebraElement out = zero_element(bundle.alg);
  for (auto [i, j] : nonzeros(Omega.coeffs))
    out = out + Omega.coeffs(i, j) *
                    multiply(basis_element(bundle.alg, i),
                             bundle.kappa(basis_element(bundle.alg, j)));
  return out;
}

TensorElement gauge_transform(const TensorElement& Omega, const AlgebraElement& u,
                              const KacBundle& bundle) {
  AlgebraElement us = adjoint(u);
  return multiply(multiply(tensor_product(us, us), Omega), bundle.coproduct_of(u));
}

CoinvolutivityClass classify_coinvolutivity(const TensorElement& Omega,
                                            const AlgebraElement& u,
                                            const KacBundle& bundle, double tol) {
  TensorElement s = flip(map_both_legs(adjoint(Omega), bundle.coinvolution));
  if ((s - Omega).norm_inf() <= tol) return CoinvolutivityClass::strong;
  TensorElement omega_u = gauge_transform(Omega, u, bundle);
  if ((s - omega_u).norm_inf() <= tol) return CoinvolutivityClass::coinvolutive;
  TensorElement ratio = multiply(omega_u, adjoint(s));
  if (in_commutant(ratio, delta_generators(bundle), tol))
    return CoinvolutivityClass::pseudo_coinvolutive;
  return CoinvolutivityClass::none;
}

KacBundle twist_bundle(const KacBundle& bundle, const TensorElement& Omega,
                       const AlgebraElement& u, double tol) {
  CocycleClass cc = classify_cocycle(Omega, bundle, tol);
  if (cc == CocycleClass::invalid)
    throw std::invalid_argument("refusing to twist: Omega is not a 2-(pseudo)-cocycle");
  CoinvolutivityClass ci = classify_coinvolutivity(Omega, u, bundle, tol);
  if (ci == CoinvolutivityClass::none)
    throw std::invalid_argument("refusing to twist: Omega has no coinvolutivity class");

  KacBundle out = bundle;
  int d = bundle.dim();
  TensorElement ostar = adjoint(Omega);
  for (int k = 0; k < d; ++k) {
    TensorElement col = multiply(multiply(Omega, bundle.coproduct_of_basis(k)), ostar);
    out.coproduct.col(k) = tensor_to_vec(col);
  }
  if (ci != CoinvolutivityClass::strong) {
    AlgebraElement us = adjoint(u);
    for (int k = 0; k < d; ++k) {
      AlgebraElement col =
          multiply(multiply(u, bundle.kappa(basis_element(bundle.alg, k))), us);
      out.coinvolution.col(k) = col.coeffs;
    }
  }
  return out;
}

Mat automorphism_matrix(const AlgebraPtr& alg, const GroupAutomorphism& alpha) {
  int d = alg->dim();
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(alpha.apply(i), i) = 1.0;
  return m;
}

std::vector<int> dual_automorphism(const AbelianSubgroup& dual,
                                   const GroupAutomorphism& alpha) {
  int n = dual.size();
  GroupAutomorphism inv = alpha.inverse_map();
  std::vector<int> out(n);
  for (int x = 0; x < n; ++x) {
    Vec values(n);
    for (int j = 0; j < n; ++j) {
      int pre = inv.apply(dual.elements[j]);
      int pos = dual.position_of(pre);
      if (pos < 0)
        throw std::invalid_argument("automorphism does not preserve the subgroup");
      values(j) = dual.characters(x, pos);
    }
    out[x] = dual.dual_index_of_values(values);
    if (out[x] < 0) throw std::logic_error("dual action left the character table");
  }
  return out;
}

const char* to_string(CertRoute r) {
  switch (r) {
    case CertRoute::direct: return "direct";
    case CertRoute::gauged: return "gauged";
    case CertRoute::cocycle_criterion: return "cocycle_criterion";
    case CertRoute::rejected: return "rejected";
  }
  return "?";
}

namespace {

/// Numerical audit of a candidate automorphism matrix against the twisted
/// bundle; returns the worst residual, or records the first failure.
double audit_gamma(const Mat& gamma, const KacBundle& twisted, double tol,
                   std::string* failure) {
  const AlgebraPtr& alg = twisted.alg;
  int d = twisted.dim();
  double worst = 0.0;
  auto note = [&](const char* name, double res) {
    worst = std::max(worst, res);
    if (res > tol && failure->empty())
      *failure = std::string("audit:") + name;
  };

  auto col = [&](int k) { return AlgebraElement{alg, gamma.col(k)}; };
  double mult = 0.0;
  for (auto [i, j] : sample_pairs(d)) {
    AlgebraElement lhs{alg, gamma * multiply(basis_element(alg, i), basis_element(alg, j)).coeffs};
    mult = std::max(mult, (lhs - multiply(col(i), col(j))).norm_inf());
  }
  note("multiplicative", mult);

  double star = 0.0;
  for (int k = 0; k < d; ++k) {
    AlgebraElement lhs{alg, gamma * adjoint(basis_element(alg, k)).coeffs};
    star = std::max(star, (lhs - adjoint(col(k))).norm_inf());
  }
  note("star_preserving", star);

  note("counit", (twisted.counit * gamma - twisted.counit).cwiseAbs().maxCoeff());
  note("haar", (twisted.haar * gamma - twisted.haar).cwiseAbs().maxCoeff());
  note("kappa", (gamma * twisted.coinvolution - twisted.coinvolution * gamma)
                    .cwiseAbs()
                    .maxCoeff());

  double cop = 0.0;
  for (int k = 0; k < d; ++k) {
    TensorElement lhs = map_both_legs(twisted.coproduct_of_basis(k), gamma);
    TensorElement rhs = vec_to_tensor(alg, twisted.coproduct * gamma.col(k));
    cop = std::max(cop, (lhs - rhs).norm_inf());
  }
  note("coproduct", cop);
  return worst;
}

}  // namespace

AutomorphismCertificate admissible_automorphism(
    const GroupAutomorphism& alpha, const CocycleTable& table,
    const TensorElement& Omega, const AlgebraElement& u, const KacBundle& base,
    const KacBundle& twisted, const IdempotentFamily& fam, double tol) {
  AutomorphismCertificate cert;
  Mat p = automorphism_matrix(base.alg, alpha);
  std::string rejection;

  // direct: Omega* (alpha (x) alpha)(Omega) central in A (x) A
  {
    TensorElement w = multiply(adjoint(Omega), map_both_legs(Omega, p));
    if (in_commutant(w, one_sided_generators(base), tol)) {
      std::string failure;
      double res = audit_gamma(p, twisted, tol, &failure);
      if (failure.empty()) {
        cert.route = CertRoute::direct;
        cert.gamma = p;
        cert.residual = res;
        return cert;
      }
      rejection = "direct route passed but " + failure;
    } else if (rejection.empty()) {
      rejection = "direct: Omega* (a (x) a)(Omega) not central";
    }
  }

  AlgebraElement one = unit_element(base.alg);
  bool u_trivial = (u - one).norm_inf() <= tol;

  // gauged (Omega with a nontrivial gauge unitary only)
  if (!u_trivial) {
    AlgebraElement au{base.alg, p * u.coeffs};
    double c1 = (au - adjoint(u)).norm_inf();
    TensorElement omega_u = gauge_transform(Omega, u, base);
    Mat pinv = automorphism_matrix(base.alg, alpha.inverse_map());
    TensorElement z = multiply(map_both_legs(omega_u, pinv), adjoint(Omega));
    double c2 = commutant_residual(z, delta_generators(base));
    double c3 = std::abs(base.eps(u) - cplx(1));
    if (c1 <= tol && c2 <= tol && c3 <= tol) {
      Mat gamma = left_mult_matrix(u) * right_mult_matrix(adjoint(u)) * p;
      std::string failure;
      double res = audit_gamma(gamma, twisted, tol, &failure);
      if (failure.empty()) {
        cert.route = CertRoute::gauged;
        cert.gamma = gamma;
        cert.residual = res;
        return cert;
      }
      if (rejection.empty()) rejection = "gauged route passed but " + failure;
    } else if (rejection.empty()) {
      if (c1 > tol)
        rejection = "gauged: alpha(u) != u*, residual " + format_number(c1);
      else if (c2 > tol)
        rejection = "gauged: gauge ratio not in the Delta commutant, residual " +
                    format_number(c2);
      else
        rejection = "gauged: eps(u) != 1, residual " + format_number(c3);
    }
  }

  // cocycle criterion on the dual table
  try {
    auto sigma = dual_automorphism(fam.dual, alpha);
    double worst = 0.0;
    int n = table.dual_order();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        worst = std::max(worst, std::abs(table.omega(sigma[x], sigma[y]) -
                                         std::conj(table.omega(x, y))));
    if (worst <= tol) {
      std::string failure;
      double res = audit_gamma(p, twisted, tol, &failure);
      if (failure.empty()) {
        cert.route = CertRoute::cocycle_criterion;
        cert.gamma = p;
        cert.residual = res;
        return cert;
      }
      if (rejection.empty()) rejection = "cocycle criterion passed but " + failure;
    } else if (rejection.empty()) {
      rejection = "cocycle criterion residual " + format_number(worst);
    }
  } catch (const std::exception& e) {
    if (rejection.empty()) rejection = e.what();
  }

  cert.route = CertRoute::rejected;
  cert.detail = rejection;
  return cert;
}

}  // namespace qhf
