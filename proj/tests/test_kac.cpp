#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhf/kac.hpp"

using namespace qhf;

TEST_CASE("group bundle passes the full audit") {
  for (auto g : {quasiquaternion_group(3), dihedral_group(4)}) {
    auto b = group_kac(g);
    auto report = verify_bundle(b, 1e-9);
    INFO(to_text_table(report));
    CHECK(report.all_ok());
    CHECK(report.max_residual() < 1e-12);
    CHECK(cocommutativity_defect(b) < 1e-15);
  }
}

TEST_CASE("function bundle on Z6 passes the full audit") {
  auto b = function_kac(cyclic_group(6));
  auto report = verify_bundle(b, 1e-9);
  INFO(to_text_table(report));
  CHECK(report.all_ok());
  // C(Z6) is cocommutative because Z6 is abelian
  CHECK(cocommutativity_defect(b) < 1e-15);
}

TEST_CASE("group bundle formulas") {
  auto g = quasiquaternion_group(2);
  auto b = group_kac(g);
  auto lg = basis_element(b.alg, 3);
  CHECK((b.coproduct_of(lg) - tensor_product(lg, lg)).norm_inf() < 1e-15);
  CHECK((b.kappa(lg) - basis_element(b.alg, g->inv(3))).norm_inf() < 1e-15);
  CHECK(std::abs(b.eps(lg) - cplx(1)) < 1e-15);
  // mu picks the coefficient of lambda(e)
  Vec f = Vec::Random(8);
  AlgebraElement a{b.alg, f};
  CHECK(std::abs(b.mu(a) - f(0)) < 1e-15);
  // star conjugates coefficients in the group basis
  CHECK((b.star_op(a).coeffs - f.conjugate()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("breaking kappa breaks strong invariance") {
  auto g = quasiquaternion_group(3);  // nonabelian
  auto b = group_kac(g);
  b.coinvolution = Mat::Identity(12, 12);
  auto report = verify_bundle(b, 1e-9);
  auto* si = report.find("strong_invariance");
  REQUIRE(si != nullptr);
  CHECK(si->status == CheckStatus::fail);
  CHECK_FALSE(report.all_ok());
}

TEST_CASE("dual idempotents of Z4 inside Q_n") {
  auto g = quasiquaternion_group(3);
  auto bundle = group_kac(g);
  int b = 6;
  auto dual = abelian_dual(g, g->subgroup_closure({b}));
  auto fam = dual_idempotents(bundle, dual);
  REQUIRE(fam.p.size() == 4);

  // P_e = (1/4)(1 + b + b^2 + b^3)
  AlgebraElement expected = zero_element(bundle.alg);
  int cur = 0;
  for (int k = 0; k < 4; ++k) {
    expected.coeffs(cur) += 0.25;
    cur = g->multiply(cur, b);
  }
  CHECK((fam.p[0] - expected).norm_inf() < 1e-12);

  // orthogonal projections summing to the unit
  AlgebraElement sum = zero_element(bundle.alg);
  for (size_t x = 0; x < fam.p.size(); ++x) {
    CHECK((adjoint(fam.p[x]) - fam.p[x]).norm_inf() < 1e-12);
    CHECK(is_positive(fam.p[x]));
    for (size_t y = 0; y < fam.p.size(); ++y) {
      auto prod = multiply(fam.p[x], fam.p[y]);
      if (x == y)
        CHECK((prod - fam.p[x]).norm_inf() < 1e-12);
      else
        CHECK(prod.norm_inf() < 1e-12);
    }
    sum = sum + fam.p[x];
  }
  CHECK((sum - unit_element(bundle.alg)).norm_inf() < 1e-12);

  // lambda(h) = sum_x <x,h> P_x
  for (int j = 0; j < dual.size(); ++j) {
    AlgebraElement rec = zero_element(bundle.alg);
    for (int x = 0; x < dual.size(); ++x)
      rec = rec + dual.characters(x, j) * fam.p[x];
    CHECK((rec - basis_element(bundle.alg, dual.elements[j])).norm_inf() < 1e-12);
  }

  // Delta(P_x) = sum_y P_y (x) P_{y^{-1} x} and kappa(P_x) = P_{x^{-1}}
  for (int x = 0; x < dual.size(); ++x) {
    TensorElement rhs{bundle.alg, Mat::Zero(12, 12)};
    for (int y = 0; y < dual.size(); ++y)
      rhs = rhs + tensor_product(fam.p[y], fam.p[dual.dual_mul(dual.dual_inv(y), x)]);
    CHECK((bundle.coproduct_of(fam.p[x]) - rhs).norm_inf() < 1e-12);
    CHECK((bundle.kappa(fam.p[x]) - fam.p[dual.dual_inv(x)]).norm_inf() < 1e-12);
  }
}

TEST_CASE("dual idempotents for Z2xZ2 inside D8 satisfy the coproduct identity") {
  auto g = dihedral_group(4);
  auto bundle = group_kac(g);
  int an = 4, b = 8;
  auto dual = abelian_dual(g, {0, an, b, g->multiply(b, an)});
  auto fam = dual_idempotents(bundle, dual);
  for (int x = 0; x < dual.size(); ++x) {
    TensorElement rhs{bundle.alg, Mat::Zero(16, 16)};
    for (int y = 0; y < dual.size(); ++y)
      rhs = rhs + tensor_product(fam.p[y], fam.p[dual.dual_mul(dual.dual_inv(y), x)]);
    CHECK((bundle.coproduct_of(fam.p[x]) - rhs).norm_inf() < 1e-12);
  }
}

TEST_CASE("trivial subgroup gives the unit idempotent") {
  auto g = dihedral_group(2);
  auto bundle = group_kac(g);
  auto dual = abelian_dual(g, {0});
  auto fam = dual_idempotents(bundle, dual);
  REQUIRE(fam.p.size() == 1);
  CHECK((fam.p[0] - unit_element(bundle.alg)).norm_inf() < 1e-15);
}

TEST_CASE("pair sampling policy") {
  CHECK(sample_pairs(4).size() == 16);
  CHECK(sample_pairs(60).size() == 576);
  CHECK(sample_pairs(60) == sample_pairs(60));  // deterministic
}
