#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhf/hypergroup.hpp"

using namespace qhf;

namespace {

struct QnScenario {
  GroupPtr g;
  KacBundle bundle;
  IdempotentFamily fam;
  CocycleTable table;
  TensorElement Omega;
  AlgebraElement u;
  int b;
  int bh;
};

QnScenario qn_scenario(int n) {
  QnScenario s;
  s.g = quasiquaternion_group(n);
  s.bundle = group_kac(s.g);
  s.b = 2 * n;
  auto dual = abelian_dual(s.g, s.g->subgroup_closure({s.b}));
  s.fam = dual_idempotents(s.bundle, dual);
  int pos = dual.position_of(s.b);
  s.bh = -1;
  for (int x = 0; x < dual.size(); ++x)
    if (std::abs(dual.characters(x, pos) - cplx(0, 1)) < 1e-9) s.bh = x;
  REQUIRE(s.bh >= 0);
  s.table = cyclic_i_table(4, {s.bh, dual.dual_mul(s.bh, s.bh), dual.dual_inv(s.bh)});
  s.Omega = lift_cocycle(s.table, s.fam);
  s.u = gauge_unitary(s.Omega, s.bundle);
  return s;
}

/// Delsart bundle on the twisted Q_n through the certified a -> a, b -> b^3.
HypergroupBundle qn_delsart(const QnScenario& s, const KacBundle& tw) {
  int b3 = s.g->multiply(s.g->multiply(s.b, s.b), s.b);
  auto alpha = automorphism(s.g, {{1, 1}, {s.b, b3}});
  auto cert = admissible_automorphism(alpha, s.table, s.Omega, s.u, s.bundle, tw,
                                      s.fam);
  REQUIRE(cert.route != CertRoute::rejected);
  auto e = delsart_expectation(tw, {cert});
  return induced_coproduct(e);
}

std::vector<Vec> uniform_weights(const Partition& part, int d) {
  std::vector<Vec> w;
  for (const auto& block : part.blocks) {
    Vec q = Vec::Zero(d);
    for (int x : block) q(x) = 1.0 / static_cast<double>(block.size());
    w.push_back(q);
  }
  return w;
}

}  // namespace

TEST_CASE("counit projection oracles") {
  auto g = cyclic_group(6);
  auto conv = group_kac(g);
  auto p = counit_projection(conv);
  Vec expected = Vec::Constant(6, cplx(1.0 / 6.0));
  CHECK((p.coeffs - expected).cwiseAbs().maxCoeff() < 1e-9);

  auto fn = function_kac(g);
  auto q = counit_projection(fn);
  CHECK((q - basis_element(fn.alg, 0)).norm_inf() < 1e-9);
}

TEST_CASE("trivial Delsart group keeps the whole bundle") {
  auto s = qn_scenario(2);
  AutomorphismCertificate id_cert;
  id_cert.route = CertRoute::direct;
  id_cert.gamma = Mat::Identity(8, 8);
  auto e = delsart_expectation(s.bundle, {id_cert});
  CHECK(e.dim_B() == 8);
  CHECK((e.p - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);

  auto h = induced_coproduct(e);
  auto report = verify_hypergroup(h);
  INFO(to_text_table(report));
  CHECK(report.all_ok());
  CHECK_FALSE(symmetry_witness(h));
  CHECK(dual_pushforward_check(h));
}

TEST_CASE("rejected certificates are refused") {
  auto s = qn_scenario(2);
  AutomorphismCertificate bad;
  bad.detail = "rejected upstream";
  CHECK_THROWS_AS(delsart_expectation(s.bundle, {bad}), std::invalid_argument);
}

TEST_CASE("quotient double coset expectation on Q_8") {
  auto g = quasiquaternion_group(2);
  auto bundle = group_kac(g);
  auto sub = g->subgroup_closure({4});  // N = <b>, normal of index 2
  auto quot = quotient_group(g, sub);
  auto bundle2 = group_kac(quot.quotient);
  Mat pi = quotient_epimorphism(bundle, bundle2, quot.projection);
  auto e = double_coset_expectation(bundle, bundle2, pi);

  // oracle: P(lambda_g) = [g in N] lambda_g
  Mat oracle = Mat::Zero(8, 8);
  for (int n : sub) oracle(n, n) = 1.0;
  CHECK((e.p - oracle).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(e.dim_B() == 4);

  auto report = check_expectation_hypotheses(e);
  INFO(to_text_table(report));
  CHECK(report.all_ok());
  // eps P != eps here, so the counit condition goes through p_eps
  REQUIRE(report.find("counit"));
  CHECK(report.find("counit")->note == "via the counit projection p_eps");

  auto h = induced_coproduct(e);
  auto audit = verify_hypergroup(h);
  INFO(to_text_table(audit));
  CHECK(audit.all_ok());
  CHECK_FALSE(symmetry_witness(h));  // B = C<b> is cocommutative
  CHECK(dual_pushforward_check(h));

  // a corrupted epimorphism is rejected with the intertwining residual
  Mat broken = pi;
  broken.col(1).swap(broken.col(4));
  CHECK_THROWS_AS(double_coset_expectation(bundle, bundle2, broken),
                  std::invalid_argument);
}

TEST_CASE("Z_6 orbital expectation from inversion orbits") {
  auto g = cyclic_group(6);
  auto bundle = function_kac(g);
  auto inv = automorphism(g, {{1, 5}});
  auto part = orbit_partition(g, {inv});
  CHECK(part.blocks.size() == 4);  // {0} {1,5} {2,4} {3}

  auto e = orbital_expectation(bundle, part, uniform_weights(part, 6));
  auto report = check_expectation_hypotheses(e);
  INFO(to_text_table(report));
  CHECK(report.all_ok());

  auto h = induced_coproduct(e);
  CHECK(h.dim_B() == 4);
  auto audit = verify_hypergroup(h);
  INFO(to_text_table(audit));
  CHECK(audit.all_ok());
  CHECK(dual_pushforward_check(h));

  // structure constants over the block indicators: a DJS hypergroup
  std::vector<AlgebraElement> idem;
  for (const auto& block : part.blocks) {
    Vec v = Vec::Zero(6);
    for (int x : block) v(x) = 1.0;
    idem.emplace_back(bundle.alg, v);
  }
  auto sc = structure_constants(h, idem);
  CHECK(sc.residual < 1e-9);
  CHECK(sc.djs_checked);
  CHECK(sc.djs_nonnegative);
}

TEST_CASE("Z_6 with blocks {0}{1,2}{3}{4,5}: kernel fails, Delta~ survives") {
  auto g = cyclic_group(6);
  auto bundle = function_kac(g);
  Partition part{{{0}, {1, 2}, {3}, {4, 5}}};

  auto e = orbital_expectation(bundle, part, uniform_weights(part, 6));
  auto report = check_expectation_hypotheses(e);
  INFO(to_text_table(report));
  REQUIRE(report.find("condition1_kernel_coideal"));
  CHECK(report.find("condition1_kernel_coideal")->status == CheckStatus::fail);
  CHECK(report.find("counit")->status == CheckStatus::pass);
  CHECK(report.find("condition2_kappa")->status == CheckStatus::pass);

  CHECK_THROWS_AS(induced_coproduct(e), std::invalid_argument);
  auto h = induced_coproduct(e, 1e-9, true);
  auto audit = verify_hypergroup(h);
  INFO(to_text_table(audit));
  // the induced coproduct is still coassociative and counital
  CHECK(audit.find("coassociativity")->status == CheckStatus::pass);
  CHECK(audit.find("counit")->status == CheckStatus::pass);
  // but the dual pushforward is no longer multiplicative
  CHECK_FALSE(dual_pushforward_check(h));

  std::vector<AlgebraElement> idem;
  for (const auto& block : part.blocks) {
    Vec v = Vec::Zero(6);
    for (int x : block) v(x) = 1.0;
    idem.emplace_back(bundle.alg, v);
  }
  auto sc = structure_constants(h, idem);
  CHECK(sc.residual < 1e-9);
  CHECK(sc.djs_checked);
  CHECK(sc.djs_nonnegative);
}

TEST_CASE("orbital guardrails") {
  auto g = cyclic_group(6);
  auto fn = function_kac(g);
  Partition good{{{0}, {1, 2}, {3}, {4, 5}}};

  // commutativity required
  auto conv = group_kac(quasiquaternion_group(2));
  Partition q8{{{0}, {1, 2, 3, 4, 5, 6, 7}}};
  CHECK_THROWS_AS(orbital_expectation(conv, q8, uniform_weights(q8, 8)),
                  std::invalid_argument);
  // the identity must sit alone
  Partition merged{{{0, 3}, {1, 2}, {4, 5}}};
  CHECK_THROWS_AS(orbital_expectation(fn, merged, uniform_weights(merged, 6)),
                  std::invalid_argument);
  // star-stability: {1,2} inverts onto {4,5}, which is not a block here
  Partition unstable{{{0}, {1, 2}, {3, 4}, {5}}};
  CHECK_THROWS_AS(orbital_expectation(fn, unstable, uniform_weights(unstable, 6)),
                  std::invalid_argument);
  // weights must be probability vectors on their block
  auto bad = uniform_weights(good, 6);
  bad[1](1) = 2.0;
  CHECK_THROWS_AS(orbital_expectation(fn, good, bad), std::invalid_argument);
}

TEST_CASE("Delsart on the twisted Q_3: nine-dimensional noncommutative B") {
  auto s = qn_scenario(3);
  auto tw = twist_bundle(s.bundle, s.Omega, s.u);
  auto h = qn_delsart(s, tw);

  CHECK(h.dim_B() == 9);
  CHECK(h.delsart_identity_residual >= 0);
  CHECK(h.delsart_identity_residual < 1e-9);

  auto audit = verify_hypergroup(h);
  INFO(to_text_table(audit));
  CHECK(audit.all_ok());

  auto witness = symmetry_witness(h);
  REQUIRE(witness);
  CHECK(witness->defect > 1e-6);

  auto wed = wedderburn(h.basis);
  CHECK(wed.sizes == std::vector<int>{1, 1, 1, 1, 1, 2});

  auto sc = structure_constants(h, h.basis);
  CHECK(sc.residual < 1e-9);
}

TEST_CASE("Delsart on the twisted Q_2: symmetric commutative B") {
  auto s = qn_scenario(2);
  auto tw = twist_bundle(s.bundle, s.Omega, s.u);
  auto h = qn_delsart(s, tw);

  CHECK(h.dim_B() == 6);
  auto audit = verify_hypergroup(h);
  INFO(to_text_table(audit));
  CHECK(audit.all_ok());
  // the n = 2 twist is cocommutative, so the induced coproduct is symmetric
  CHECK_FALSE(symmetry_witness(h));
  CHECK(wedderburn(h.basis).commutative());
}
