#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qhf/algebra.hpp"
#include "qhf/wedderburn.hpp"

using namespace qhf;

namespace {

AlgebraElement random_element(AlgebraPtr alg, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(alg->dim());
  for (int i = 0; i < alg->dim(); ++i) v(i) = cplx(d(rng), d(rng));
  return {alg, v};
}

}  // namespace

TEST_CASE("convolution product follows the group law") {
  auto g = quasiquaternion_group(2);
  auto alg = convolution_algebra(g);
  for (int i = 0; i < g->order; ++i)
    for (int j = 0; j < g->order; ++j) {
      auto p = multiply(basis_element(alg, i), basis_element(alg, j));
      CHECK((p - basis_element(alg, g->multiply(i, j))).norm_inf() < 1e-15);
    }
  auto a = basis_element(alg, 3);
  CHECK((multiply(a, unit_element(alg)) - a).norm_inf() < 1e-15);
  CHECK((adjoint(basis_element(alg, 3)) - basis_element(alg, g->inverse(3))).norm_inf() <
        1e-15);
}

TEST_CASE("adjoint is antilinear and involutive") {
  auto alg = convolution_algebra(dihedral_group(3));
  std::mt19937 rng(7);
  auto a = random_element(alg, rng);
  auto b = random_element(alg, rng);
  CHECK((adjoint(adjoint(a)) - a).norm_inf() < 1e-15);
  CHECK((adjoint(cplx(0, 1) * a) - (cplx(0, -1) * adjoint(a))).norm_inf() < 1e-15);
  CHECK((adjoint(multiply(a, b)) - multiply(adjoint(b), adjoint(a))).norm_inf() < 1e-12);
}

TEST_CASE("regular representation is a faithful *-homomorphism") {
  auto alg = convolution_algebra(quasiquaternion_group(3));
  std::mt19937 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    auto a = random_element(alg, rng);
    auto b = random_element(alg, rng);
    Mat lhs = regular_matrix(multiply(a, b));
    Mat rhs = regular_matrix(a) * regular_matrix(b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((regular_matrix(adjoint(a)) - regular_matrix(a).adjoint()).cwiseAbs().maxCoeff() <
          1e-12);
    // normalized trace recovers the coefficient of lambda(e)
    cplx tr = regular_matrix(a).trace() / double(alg->dim());
    CHECK(std::abs(tr - a.coeffs(0)) < 1e-12);
  }
  CHECK((regular_matrix(unit_element(alg)) - Mat::Identity(12, 12)).cwiseAbs().maxCoeff() <
        1e-15);
}

TEST_CASE("positivity in the regular representation") {
  auto g = dihedral_group(2);
  auto alg = convolution_algebra(g);
  int b = 4;  // order 2
  REQUIRE(g->multiply(b, b) == 0);
  CHECK_FALSE(is_positive(basis_element(alg, b) - unit_element(alg)));
  auto a = basis_element(alg, 1);
  auto x = 2.0 * unit_element(alg) + a + adjoint(a);
  CHECK(is_positive(x));
  // c* c is always positive
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_element(alg, rng);
    CHECK(is_positive(multiply(adjoint(c), c)));
  }
}

TEST_CASE("tensor product algebra") {
  auto alg = convolution_algebra(quasiquaternion_group(2));
  std::mt19937 rng(5);
  auto a = random_element(alg, rng), b = random_element(alg, rng);
  auto c = random_element(alg, rng), d = random_element(alg, rng);
  auto lhs = multiply(tensor_product(a, b), tensor_product(c, d));
  auto rhs = tensor_product(multiply(a, c), multiply(b, d));
  CHECK((lhs - rhs).norm_inf() < 1e-9);
  CHECK((flip(tensor_product(a, b)) - tensor_product(b, a)).norm_inf() < 1e-15);
  CHECK((adjoint(tensor_product(a, b)) - tensor_product(adjoint(a), adjoint(b))).norm_inf() <
        1e-12);
  // regular representation of the tensor square is multiplicative
  auto t1 = tensor_product(a, b), t2 = tensor_product(c, d);
  CHECK((regular_matrix(multiply(t1, t2)) - regular_matrix(t1) * regular_matrix(t2))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  CHECK(is_unitary(unit_tensor(alg)));
  CHECK(is_positive(multiply(adjoint(t1), t1)));
}

TEST_CASE("commutant membership") {
  auto g = quasiquaternion_group(3);
  auto alg = convolution_algebra(g);
  int a = 1, b = 6;
  std::vector<TensorElement> delta_gens;
  for (int gen : {a, b})
    delta_gens.push_back(tensor_product(basis_element(alg, gen), basis_element(alg, gen)));
  CHECK(in_commutant(unit_tensor(alg), delta_gens));
  // Delta(lambda(a)) does not commute with Delta(lambda(b)) since ab != ba
  CHECK_FALSE(in_commutant(delta_gens[0], {delta_gens[1]}));
}

TEST_CASE("triple tensors") {
  auto alg = convolution_algebra(quasiquaternion_group(2));
  auto x = basis_element(alg, 1);
  auto y = basis_element(alg, 4);
  auto t = tensor_product(x, y);
  auto a = embed_with_unit(t, 0);   // 1 (x) x (x) y
  auto bt = embed_with_unit(t, 2);  // x (x) y (x) 1
  // (1 (x) x (x) y)(x (x) y (x) 1) = x (x) xy (x) y
  auto prod = triple_multiply(a, bt);
  TripleTensor expect{alg, {}};
  expect.add(1, alg->group->mul(1, 4), 4, 1.0);
  CHECK(triple_sub(prod, expect).norm_inf() < 1e-15);
  CHECK(triple_commutator_norm(a, a) < 1e-15);
  auto adj = triple_adjoint(a);
  TripleTensor expect2{alg, {}};
  expect2.add(0, alg->group->inv(1), alg->group->inv(4), 1.0);
  CHECK(triple_sub(adj, expect2).norm_inf() < 1e-15);
}

TEST_CASE("pointwise function algebra") {
  auto alg = function_algebra(cyclic_group(6));
  auto d1 = basis_element(alg, 1), d2 = basis_element(alg, 2);
  CHECK((multiply(d1, d1) - d1).norm_inf() < 1e-15);
  CHECK(multiply(d1, d2).norm_inf() < 1e-15);
  CHECK((adjoint(d1) - d1).norm_inf() < 1e-15);
  CHECK((multiply(unit_element(alg), d2) - d2).norm_inf() < 1e-15);
  CHECK(is_positive(d1));
  CHECK(std::abs(haar_value(unit_element(alg)) - cplx(1)) < 1e-15);
  CHECK(std::abs(haar_value(d1) - cplx(1.0 / 6)) < 1e-15);
}

TEST_CASE("mu inner product matches coefficients") {
  auto alg = convolution_algebra(dihedral_group(3));
  std::mt19937 rng(17);
  auto a = random_element(alg, rng), b = random_element(alg, rng);
  cplx direct = a.coeffs.dot(b.coeffs);
  CHECK(std::abs(mu_inner(a, b) - direct) < 1e-12);
}

TEST_CASE("wedderburn of abelian group algebras") {
  auto alg = convolution_algebra(cyclic_group(5));
  std::vector<AlgebraElement> basis;
  for (int i = 0; i < 5; ++i) basis.push_back(basis_element(alg, i));
  auto w = wedderburn(basis);
  CHECK(w.sizes == std::vector<int>{1, 1, 1, 1, 1});
  CHECK(w.commutative());
  AlgebraElement sum = zero_element(alg);
  for (auto& z : w.central_idempotents) sum = sum + z;
  CHECK((sum - unit_element(alg)).norm_inf() < 1e-9);
}

TEST_CASE("wedderburn of C(Q2)") {
  auto alg = convolution_algebra(quasiquaternion_group(2));
  std::vector<AlgebraElement> basis;
  for (int i = 0; i < 8; ++i) basis.push_back(basis_element(alg, i));
  auto w = wedderburn(basis, 1e-9, 12345, 1e-6, true);
  CHECK(w.sizes == std::vector<int>{1, 1, 1, 1, 2});
  CHECK_FALSE(w.commutative());
  // central idempotents are orthogonal projections
  for (size_t i = 0; i < w.central_idempotents.size(); ++i)
    for (size_t j = 0; j < w.central_idempotents.size(); ++j) {
      auto p = multiply(w.central_idempotents[i], w.central_idempotents[j]);
      if (i == j)
        CHECK((p - w.central_idempotents[i]).norm_inf() < 1e-8);
      else
        CHECK(p.norm_inf() < 1e-8);
    }
  // matrix units of the 2x2 block behave like e_jk
  const auto& u = w.matrix_units.back();
  REQUIRE(u.size() == 4);
  CHECK((multiply(u[0], u[1]) - u[1]).norm_inf() < 1e-8);
  CHECK((multiply(u[1], u[3]) - u[1]).norm_inf() < 1e-8);
  CHECK(multiply(u[0], u[3]).norm_inf() < 1e-8);
  CHECK((adjoint(u[1]) - u[2]).norm_inf() < 1e-8);
}

TEST_CASE("wedderburn of the full symmetric group algebra") {
  auto alg = convolution_algebra(symmetric_group(4));
  std::vector<AlgebraElement> basis;
  for (int i = 0; i < 24; ++i) basis.push_back(basis_element(alg, i));
  auto w = wedderburn(basis);
  CHECK(w.sizes == std::vector<int>{1, 1, 2, 3, 3});
}

TEST_CASE("wedderburn rejects non-algebras") {
  auto alg = convolution_algebra(quasiquaternion_group(2));
  // span{1, lambda(a)} is not closed: a^2 escapes
  std::vector<AlgebraElement> bad{unit_element(alg), basis_element(alg, 1)};
  CHECK_THROWS(wedderburn(bad));
}

TEST_CASE("wedderburn determinism") {
  auto alg = convolution_algebra(quasiquaternion_group(3));
  std::vector<AlgebraElement> basis;
  for (int i = 0; i < 12; ++i) basis.push_back(basis_element(alg, i));
  auto w1 = wedderburn(basis);
  auto w2 = wedderburn(basis);
  CHECK(w1.sizes == w2.sizes);
  for (size_t i = 0; i < w1.central_idempotents.size(); ++i)
    CHECK((w1.central_idempotents[i] - w2.central_idempotents[i]).norm_inf() < 1e-14);
}
