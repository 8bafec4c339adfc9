#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qhf/group.hpp"

using namespace qhf;

TEST_CASE("cyclic groups") {
  auto z1 = cyclic_group(1);
  CHECK(z1->order == 1);
  auto z6 = cyclic_group(6);
  CHECK(z6->order == 6);
  CHECK(z6->multiply(4, 5) == 3);
  CHECK(z6->inverse(2) == 4);
  CHECK(z6->element_order(1) == 6);
  CHECK(z6->element_order(3) == 2);
}

TEST_CASE("quasiquaternion relations") {
  // a at index 1, b at index 2n
  for (int n : {2, 3, 4}) {
    auto g = quasiquaternion_group(n);
    REQUIRE(g->order == 4 * n);
    int a = 1, b = 2 * n;
    // b^2 = a^n
    int b2 = g->multiply(b, b);
    int an = 0;
    for (int k = 0; k < n; ++k) an = g->multiply(an, a);
    CHECK(b2 == an);
    // b a b^{-1} = a^{-1}
    int bab = g->multiply(g->multiply(b, a), g->inverse(b));
    CHECK(bab == g->inverse(a));
    CHECK(g->element_order(a) == 2 * n);
    CHECK(g->element_order(b) == 4);
  }
}

TEST_CASE("dihedral relations") {
  for (int n : {2, 3, 4, 6}) {
    auto g = dihedral_group(n);
    REQUIRE(g->order == 4 * n);
    int a = 1, b = 2 * n;
    CHECK(g->multiply(b, b) == 0);
    int bab = g->multiply(g->multiply(b, a), g->inverse(b));
    CHECK(bab == g->inverse(a));
    CHECK(g->element_order(a) == 2 * n);
  }
}

TEST_CASE("symmetric and alternating groups") {
  auto s4 = symmetric_group(4);
  CHECK(s4->order == 24);
  auto a4 = alternating_group(4);
  CHECK(a4->order == 12);
  auto a5 = alternating_group(5);
  CHECK(a5->order == 60);
  // transposition (12) squares to identity
  int t = permutation_index(*s4, {1, 0, 2, 3});
  CHECK(s4->multiply(t, t) == 0);
  CHECK(s4->element_order(t) == 2);
  // 4-cycle (2341) in one-line notation: 1->2, 2->3, 3->4, 4->1
  int c = permutation_index(*s4, {1, 2, 3, 0});
  CHECK(s4->element_order(c) == 4);
}

TEST_CASE("zm2 semidirect product") {
  auto g = zm2_semidirect_group(3);
  CHECK(g->order == 18);
  // s has order 2, s (a,b) s = (b,a)
  int s = 9;
  CHECK(g->multiply(s, s) == 0);
  int ab = 1 * 3 + 2;  // (1,2)
  int conj = g->multiply(g->multiply(s, ab), s);
  CHECK(conj == 2 * 3 + 1);  // (2,1)
}

TEST_CASE("family dispatch and parameter validation") {
  CHECK(build_family("quasiquaternion", 2)->order == 8);
  CHECK(build_family("zm2_semidirect", 3)->order == 18);
  CHECK(build_family("cyclic", 1)->order == 1);
  CHECK_THROWS(build_family("quasiquaternion", 1));
  CHECK_THROWS(build_family("dihedral", 1));
  CHECK_THROWS(build_family("symmetric", 3));
  CHECK_THROWS(build_family("zm2_semidirect", 2));
  CHECK_THROWS(build_family("nosuch", 5));
}

TEST_CASE("json round trip") {
  auto g = dihedral_group(2);
  auto text = group_to_json(*g);
  auto g2 = group_from_json(text);
  CHECK(g2->order == g->order);
  CHECK(g2->mul == g->mul);
  CHECK(g2->labels == g->labels);
  CHECK_THROWS(group_from_json("{\"order\": 2, \"mul\": [[0,1],[1,1]]}"));
}

TEST_CASE("subgroup closure") {
  auto q3 = quasiquaternion_group(3);
  int b = 6;
  auto h = q3->subgroup_closure({b});
  CHECK(h.size() == 4);  // e, b, b^2=a^3, b^3
  CHECK(q3->is_abelian_subset(h));
  auto all = q3->subgroup_closure({1, b});
  CHECK(all.size() == 12);
  CHECK_FALSE(q3->is_abelian_subset(all));
}

TEST_CASE("character table of Z4 inside Q_n") {
  auto q3 = quasiquaternion_group(3);
  int b = 6;
  auto h = q3->subgroup_closure({b});
  auto dual = abelian_dual(q3, h);
  REQUIRE(dual.size() == 4);
  // orthogonality: sum_h <x,h> conj(<y,h>) = |H| delta_{xy}
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      cplx s = dual.characters.row(x).dot(dual.characters.row(y));
      CHECK(std::abs(s - (x == y ? cplx(4) : cplx(0))) < 1e-12);
    }
  // values are 4th roots of unity and the trivial character comes first
  CHECK((dual.characters.row(0) - RowVec::Ones(4)).cwiseAbs().maxCoeff() < 1e-12);
  for (int x = 0; x < 4; ++x)
    for (int j = 0; j < 4; ++j) {
      cplx v = dual.characters(x, j);
      CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
      CHECK(std::abs(std::pow(v, 4) - cplx(1)) < 1e-12);
    }
  // dual group is Z4: some character has order 4
  bool found = false;
  for (int x = 0; x < 4; ++x) {
    int o = 1, c = x;
    while (c != 0) {
      c = dual.dual_mul(c, x);
      ++o;
    }
    if (o == 4) found = true;
  }
  CHECK(found);
}

TEST_CASE("character table of Z2xZ2 inside dihedral") {
  auto d4 = dihedral_group(4);  // 2n = 8
  int an = 4, b = 8;
  std::vector<int> h{0, an, b, d4->multiply(b, an)};
  auto dual = abelian_dual(d4, h);
  REQUIRE(dual.size() == 4);
  for (int x = 0; x < 4; ++x)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(std::abs(dual.characters(x, j).real()) - 1.0) < 1e-12);
  // every nontrivial character has order 2
  for (int x = 1; x < 4; ++x) CHECK(dual.dual_mul(x, x) == 0);
}

TEST_CASE("character table of Z3^2") {
  auto g = zm2_semidirect_group(3);
  std::vector<int> h;
  for (int i = 0; i < 9; ++i) h.push_back(i);
  auto dual = abelian_dual(g, h);
  REQUIRE(dual.size() == 9);
  for (int x = 0; x < 9; ++x)
    for (int y = 0; y < 9; ++y) {
      cplx s = dual.characters.row(x).dot(dual.characters.row(y));
      CHECK(std::abs(s - (x == y ? cplx(9) : cplx(0))) < 1e-10);
    }
}

TEST_CASE("abelian_dual rejects bad subsets") {
  auto q3 = quasiquaternion_group(3);
  CHECK_THROWS(abelian_dual(q3, {0, 1}));            // not closed
  auto all = q3->subgroup_closure({1, 6});
  CHECK_THROWS(abelian_dual(q3, all));               // not abelian
}

TEST_CASE("automorphism from generator images") {
  auto q3 = quasiquaternion_group(3);
  int a = 1, b = 6;
  int b3 = q3->multiply(q3->multiply(b, b), b);
  auto alpha = automorphism(q3, {{a, a}, {b, b3}});
  CHECK(alpha.order() == 2);
  CHECK(alpha.apply(b) == b3);
  CHECK(alpha.apply(a) == a);
  auto id = identity_automorphism(q3);
  CHECK(id.order() == 1);
  CHECK(alpha.compose(alpha).map == id.map);
  CHECK(alpha.inverse_map().map == alpha.map);
  // a -> b is not a homomorphism image assignment for Q3
  CHECK_THROWS(automorphism(q3, {{a, b}}));
}

TEST_CASE("dihedral power automorphism") {
  auto d4 = dihedral_group(4);  // order 16, a of order 8
  int a = 1, b = 8;
  int a3 = 3;
  auto gamma = automorphism(d4, {{a, a3}, {b, b}});
  CHECK(gamma.order() == 2);
}

TEST_CASE("conjugation automorphisms and orbits") {
  auto s4 = symmetric_group(4);
  int t = permutation_index(*s4, {1, 0, 2, 3});
  auto gamma = conjugation_automorphism(s4, t);
  CHECK(gamma.order() == 2);
  auto part = orbit_partition(s4, {gamma});
  CHECK(part.blocks.size() == 14);
  part.validate(24);

  auto q3 = quasiquaternion_group(3);
  auto id = identity_automorphism(q3);
  auto singletons = orbit_partition(q3, {id});
  CHECK(singletons.blocks.size() == 12);
}

TEST_CASE("orbit count invariant under generating set") {
  auto s4 = symmetric_group(4);
  int t = permutation_index(*s4, {1, 0, 2, 3});
  auto gamma = conjugation_automorphism(s4, t);
  auto p1 = orbit_partition(s4, {gamma});
  auto p2 = orbit_partition(s4, {gamma, gamma.compose(gamma), gamma});
  CHECK(p1.blocks.size() == p2.blocks.size());
}

TEST_CASE("quotient group") {
  auto q2 = quasiquaternion_group(2);  // order 8
  // center {e, a^2}
  std::vector<int> n{0, 2};
  auto q = quotient_group(q2, n);
  CHECK(q.quotient->order == 4);
  // Q2/Z = Z2 x Z2: every nontrivial element has order 2
  for (int i = 1; i < 4; ++i) CHECK(q.quotient->element_order(i) == 2);
  CHECK(q.projection(0) == 0);
  CHECK(q.projection(2) == 0);
  CHECK_THROWS(quotient_group(q2, {0, 1}));  // {e,a} not a subgroup
}
