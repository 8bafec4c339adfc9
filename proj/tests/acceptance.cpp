// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <iostream>
#include <vector>

#include "qhf/scenario.hpp"

using namespace qhf;

namespace {

std::vector<std::pair<std::string, Report>> g_runs;

struct Gate {
  bool ok = true;
  std::vector<std::string> problems;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      problems.push_back(what);
    }
  }
};

std::string val(const Report& r, const std::string& key) {
  for (const auto& [k, v] : r.values)
    if (k == key) return v;
  return "";
}

bool passed(const Report& r, const std::string& name) {
  const CheckResult* c = r.find(name);
  return c && c->status == CheckStatus::pass;
}

const Report& run(Gate& gate, const std::string& tag, const std::string& name,
                  std::map<std::string, int> params, double* elapsed = nullptr) {
  auto t0 = std::chrono::steady_clock::now();
  ScenarioRun out = run_scenario(name, std::move(params));
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  if (elapsed) *elapsed = dt;
  g_runs.emplace_back(tag, std::move(out.report));
  const Report& r = g_runs.back().second;
  if (!r.all_ok()) {
    gate.ok = false;
    gate.problems.push_back(tag + ": report has failing checks");
    for (const auto& c : r.checks)
      if (c.status == CheckStatus::fail)
        gate.problems.push_back("  " + c.name + " residual " +
                                format_number(c.residual) +
                                (c.note.empty() ? "" : " (" + c.note + ")"));
  }
  return r;
}

Gate criterion1() {
  Gate g;
  for (int n = 2; n <= 6; ++n) {
    std::string tag = "quasiquaternion n=" + std::to_string(n);
    double dt = 0;
    const Report& r = run(g, tag, "quasiquaternion", {{"n", n}}, &dt);
    g.require(val(r, "cocycle_class") == "pseudo_cocycle", tag + ": class");
    g.require(val(r, "coinvolutivity") == "pseudo_coinvolutive",
              tag + ": coinvolutivity");
    g.require(val(r, "certification_route") == "gauged", tag + ": route");
    g.require(passed(r, "gauge_square"), tag + ": u^2 = lambda(b^2)");
    g.require(val(r, "dim_B") == std::to_string(3 * n), tag + ": dim B = 3n");
    g.require(passed(r, "block_structure"), tag + ": block multiset");
    // n = 2 is the registered exception: the twist stays cocommutative and
    // the induced coproduct is symmetric
    if (n == 2) {
      g.require(passed(r, "twist_cocommutative"), tag + ": cocommutative twist");
      g.require(val(r, "symmetric") == "true", tag + ": symmetric at n = 2");
    } else {
      g.require(passed(r, "twist_noncocommutative"), tag + ": non-cocommutative");
      g.require(val(r, "symmetric") == "false", tag + ": witness expected");
      g.require(passed(r, "witness"), tag + ": witness at P(lambda(ab))");
    }
    g.require(dt <= 10.0, tag + ": runtime " + format_number(dt) + "s > 10s");
  }
  return g;
}

Gate criterion2() {
  Gate g;
  const Report& r = run(g, "kac_paljutkin", "kac_paljutkin", {});
  g.require(val(r, "dim_B") == "6", "dim B = 6");
  g.require(val(r, "commutative") == "true", "commutative B");
  // the registry expects a symmetric induced coproduct here; the machine
  // confirms it (the printed table makes the n = 2 twist cocommutative)
  g.require(val(r, "symmetric") == "true", "symmetric induced coproduct");
  return g;
}

Gate criterion3() {
  Gate g;
  ScenarioRun out = run_scenario("quasiquaternion", {{"n", 3}});
  g.require(out.report.all_ok(), "Q_3 pipeline has failing checks");
  g.require(out.hyper.has_value(), "Q_3 produced no hypergroup");
  if (!out.hyper) return g;
  Report diff = compare_b3_table(*out.hyper);
  for (const auto& c : diff.checks)
    g.require(c.status == CheckStatus::pass,
              "table " + c.name + " residual " + format_number(c.residual) +
                  (c.note.empty() ? "" : " (" + c.note + ")"));
  for (const char* name : {"hypergroup.coassociativity", "hypergroup.counit",
                           "hypergroup.complete_positivity",
                           "hypergroup.haar_unique",
                           "hypergroup.strong_invariance"})
    g.require(passed(out.report, name), std::string("machine check ") + name);
  g_runs.emplace_back("quasiquaternion n=3 (table)", std::move(out.report));
  return g;
}

Gate criterion4() {
  Gate g;
  for (auto [n, p] : {std::pair{6, 7}, {8, 3}, {9, 8}}) {
    bool threw = false;
    try {
      run_scenario("dihedral", {{"n", n}, {"p", p}});
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    g.require(threw, "dihedral (" + std::to_string(n) + "," + std::to_string(p) +
                         ") must be rejected");
  }
  for (auto [n, p, dim] : {std::tuple{4, 3, 10}, {6, 5, 16}}) {
    std::string tag =
        "dihedral (" + std::to_string(n) + "," + std::to_string(p) + ")";
    const Report& r = run(g, tag, "dihedral", {{"n", n}, {"p", p}});
    g.require(val(r, "cocycle_class") == "cocycle", tag + ": strict cocycle");
    g.require(val(r, "coinvolutivity") == "strong", tag + ": strong coinvolutive");
    int N = 2 * n, cnt = 0;
    for (int x = 0; x < N; ++x)
      if ((x * (p - 1)) % N == 0) ++cnt;
    g.require(dim == N + cnt, tag + ": oracle dim bookkeeping");
    g.require(val(r, "dim_B") == std::to_string(N + cnt), tag + ": dim B = 2n + r");
    // p = n - 1 averages the asymmetry out (registered deviation)
    g.require(val(r, "symmetric") == "true", tag + ": symmetric at p = n - 1");
    if (n == 4)
      g.require(val(r, "blocks") == "{1,1,1,1,1,1,2}",
                tag + ": blocks {1,1,1,1,1,1,2}");
  }
  // generic admissible p carries the witness
  const Report& w = run(g, "dihedral (12,5)", "dihedral", {{"n", 12}, {"p", 5}});
  g.require(val(w, "dim_B") == "28", "dihedral (12,5): dim B = 28");
  g.require(val(w, "symmetric") == "false", "dihedral (12,5): non-symmetric");
  g.require(passed(w, "witness"), "dihedral (12,5): witness at P(lambda(a))");
  return g;
}

Gate criterion5() {
  Gate g;
  double dt = 0;
  const Report& r = run(g, "symmetric n=4", "symmetric", {{"n", 4}}, &dt);
  g.require(val(r, "dim_B") == "14", "dim B = 14");
  g.require(val(r, "commutative") == "false", "noncommutative B");
  g.require(val(r, "blocks").find('2') != std::string::npos,
            "a Wedderburn block of size > 1");
  g.require(val(r, "witness_element") == "P(lambda((2 3 4 1)))",
            "witness element (2341)");
  g.require(passed(r, "witness"), "witness asymmetry");
  g.require(dt <= 30.0, "runtime " + format_number(dt) + "s > 30s");
  return g;
}

Gate criterion6() {
  Gate g;
  const Report& r4 = run(g, "alternating n=4", "alternating", {{"n", 4}});
  g.require(val(r4, "dim_B") == "7", "n=4: dim B = 7");
  g.require(val(r4, "certification_route") == "cocycle_criterion",
            "n=4: cocycle criterion route");
  // n = 5 is the registered machine refutation: conjugation by (12) is only
  // a co-anti-automorphism, the averaged construction fails condition 1 and
  // coassociativity, and the claimed dim-33 hypergroup does not exist
  double dt = 0;
  const Report& r5 = run(g, "alternating n=5", "alternating", {{"n", 5}}, &dt);
  g.require(val(r5, "dim_B") == "33", "n=5: fixed-point dimension 33");
  g.require(passed(r5, "certification_rejected"), "n=5: certificate rejected");
  g.require(passed(r5, "conjugate_table_relation"),
            "n=5: printed table relation holds");
  g.require(passed(r5, "gamma_coanti"), "n=5: co-anti identity");
  g.require(passed(r5, "condition1_fails"), "n=5: kernel condition fails");
  g.require(passed(r5, "coassociativity_fails"), "n=5: coassociativity fails");
  g.require(passed(r5, "no_witness"), "n=5: no asymmetry at P(lambda((345)))");
  g.require(dt <= 120.0, "n=5 runtime " + format_number(dt) + "s > 120s");
  return g;
}

Gate criterion7() {
  Gate g;
  const Report& r3 = run(g, "zm2 (3,2)", "zm2", {{"m", 3}, {"r", 2}});
  g.require(val(r3, "dim_B") == "10", "(3,2): dim B = 10");
  g.require(passed(r3, "table_counital"), "(3,2): counital table");
  g.require(val(r3, "cocycle_class") == "cocycle", "(3,2): strict cocycle");
  g.require(val(r3, "symmetric") == "false", "(3,2): non-symmetric");
  g.require(passed(r3, "witness"), "(3,2): witness at P(lambda(as))");
  const Report& r5 = run(g, "zm2 (5,4)", "zm2", {{"m", 5}, {"r", 4}});
  g.require(val(r5, "dim_B") == "26", "(5,4): dim B = 26");
  g.require(val(r5, "symmetric") == "false", "(5,4): non-symmetric");
  return g;
}

Gate criterion8() {
  Gate g;
  const Report& r = run(g, "z6_orbital", "z6_orbital", {});
  g.require(passed(r, "condition1_fails"), "condition 1 fails");
  g.require(passed(r, "kernel_witness"), "kernel witness delta_1 - delta_2");
  g.require(passed(r, "coassociativity"), "induced coproduct coassociative");
  g.require(passed(r, "counit"), "counit survives");
  g.require(passed(r, "djs_nonnegative"), "nonnegative structure constants");
  g.require(passed(r, "neutral_element"), "neutral element");
  g.require(passed(r, "dual_pushforward_fails"), "dual pushforward breaks");
  return g;
}

Gate criterion9() {
  Gate g;
  const Report& r = run(g, "trivial_twist", "trivial_twist", {{"n", 2}});
  for (const char* name : {"omega_identity", "coproduct_unchanged",
                           "coinvolution_unchanged", "expectation_identity",
                           "bundle_reproduced"})
    g.require(passed(r, name), std::string("trivial control: ") + name);
  run(g, "z6_delsart", "z6_delsart", {});
  int audited = 0, choi = 0;
  for (const auto& [tag, rep] : g_runs) {
    if (rep.find("hypergroup.haar_unique")) {
      ++audited;
      g.require(passed(rep, "hypergroup.haar_unique"), tag + ": Haar unique");
      g.require(passed(rep, "hypergroup.haar_plus"), tag + ": mu+ = mu");
    }
    const CheckResult* cp = rep.find("hypergroup.complete_positivity");
    if (cp && cp->status == CheckStatus::pass) ++choi;
    if (cp && cp->status == CheckStatus::fail)
      g.require(false, tag + ": Choi matrix not PSD");
  }
  g.require(audited >= 12, "expected the audit to cover every hypergroup run");
  g.require(choi >= 6, "expected Choi PSD checks on all runs with dim A <= 24");
  return g;
}

Gate criterion10() {
  Gate g;
  // strict-cocycle context: D_8 = dihedral(4), H = {e, a^4, b, ba^4}
  auto grp = dihedral_group(4);
  auto bundle = group_kac(grp);
  auto dual = abelian_dual(grp, grp->subgroup_closure({4, 8}));
  auto fam = dual_idempotents(bundle, dual);
  CocycleTable table = cyclic_i_table(dual.size(), {1, 2, 3});
  TensorElement Omega = lift_cocycle(table, fam);
  AlgebraElement u = gauge_unitary(Omega, bundle);
  g.require(classify_cocycle(Omega, bundle) != CocycleClass::invalid,
            "baseline table must classify");

  CocycleTable off_circle = table;
  off_circle.omega(1, 2) = 2.0;
  bool threw = false;
  try {
    validate_cocycle_table(off_circle);
  } catch (const std::exception&) {
    threw = true;
  }
  g.require(threw, "off-circle entry must fail validation");
  threw = false;
  try {
    lift_cocycle(off_circle, fam);
  } catch (const std::exception&) {
    threw = true;
  }
  g.require(threw, "lift must refuse an off-circle table");
  TensorElement bad{bundle.alg, Mat(2.0 * Omega.coeffs)};  // not unitary
  g.require(classify_cocycle(bad, bundle) == CocycleClass::invalid,
            "non-unitary Omega must classify invalid");
  threw = false;
  try {
    twist_bundle(bundle, bad, gauge_unitary(bad, bundle));
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  g.require(threw, "twist_bundle must refuse a non-unitary Omega");

  CocycleTable broken = table;
  broken.omega(1, 2) *= std::polar(1.0, 0.7);  // unit modulus, relation broken
  validate_cocycle_table(broken);
  TensorElement skew = lift_cocycle(broken, fam);
  g.require(classify_cocycle(skew, bundle) == CocycleClass::invalid,
            "broken cocycle relation must classify invalid");
  threw = false;
  try {
    twist_bundle(bundle, skew, gauge_unitary(skew, bundle));
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  g.require(threw, "twist_bundle must refuse a broken relation");

  KacBundle tw = twist_bundle(bundle, Omega, u);
  AutomorphismCertificate rejected;
  rejected.route = CertRoute::rejected;
  rejected.gamma = Mat::Identity(bundle.dim(), bundle.dim());
  rejected.detail = "deliberately uncertified";
  threw = false;
  try {
    delsart_expectation(tw, {rejected});
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  g.require(threw, "delsart_expectation must refuse a rejected certificate");
  return g;
}

const char* kSummaries[] = {
    "quasiquaternion family n = 2..6: classes, gauge, dims, blocks, witnesses",
    "Kac-Paljutkin control: commutative dim-6 B, symmetric induced coproduct",
    "B_3 table reproduced in the f-basis; machine axioms authoritative",
    "dihedral family: validation, strict cocycle, dims, blocks, (12,5) witness",
    "symmetric group n = 4: dim 14, noncommutative, witness at (2341)",
    "alternating: n = 4 certified dim 7; n = 5 construction machine-refuted",
    "Z_m^2 x| Z_2: (3,2) dim 10 with witness at P(lambda(as)); (5,4) dim 26",
    "Z_6 orbital counterexample: condition 1 fails, convolution survives",
    "controls: trivial twist, Haar uniqueness, Choi PSD across all runs",
    "falsification: invalid tables and uncertified maps are refused",
};

}  // namespace

int main() {
  Gate (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8,
                          criterion9, criterion10};
  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    Gate g;
    try {
      g = criteria[i]();
    } catch (const std::exception& e) {
      g.ok = false;
      g.problems.push_back(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << (i + 1) << ": " << (g.ok ? "PASS" : "FAIL")
              << " - " << kSummaries[i] << "\n";
    for (const auto& p : g.problems) std::cout << "    " << p << "\n";
    if (!g.ok) ++failures;
  }
  return failures;
}
