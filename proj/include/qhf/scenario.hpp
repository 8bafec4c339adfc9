#pragma once

#include <map>

#include "qhf/hypergroup.hpp"

namespace qhf {

/// A registered construction: group family, twisting data, expectation, and
/// the expected outcomes it is checked against.
struct ScenarioSpec {
  std::string name;
  std::string description;
  std::map<std::string, int> params;  // defaults
};

std::vector<ScenarioSpec> list_scenarios();

/// Full pipeline output of one scenario run; report carries every check.
struct ScenarioRun {
  Report report;
  std::optional<KacBundle> twisted;
  std::optional<HypergroupBundle> hyper;
};

/// Runs build -> lift -> classify -> twist -> audit -> certify -> expectation
/// -> induced coproduct -> hypergroup audit and compares the outcome against
/// the registered expectations. Throws std::invalid_argument on unknown
/// scenarios or invalid parameters.
ScenarioRun run_scenario(const std::string& name,
                         std::map<std::string, int> params = {},
                         double tol = 1e-9, int cp_dim_limit = 24);

/// Asymmetry of the induced coproduct at one element of B:
/// || Delta~(b) - Sigma Delta~(b) || in B coordinates.
double asymmetry_at(const HypergroupBundle& h, const AlgebraElement& b);

/// Compares the computed B_3 coproduct (quasiquaternion n = 3) against the
/// transcribed reference table in the f-basis. The f-basis is resolved from
/// its P-image definitions over the ambient matrix units; the finitely many
/// block-respecting relabelings, phases and normalization scales are searched
/// and the chosen alignment is recorded. One check per table row; mismatching
/// terms are itemized in the notes.
Report compare_b3_table(const HypergroupBundle& h, double tol = 1e-9);

/// Text rendering of Delta~ over the orthonormal basis of B, one line per
/// basis element.
std::string coproduct_table_text(const HypergroupBundle& h, double tol = 1e-9);

/// Text rendering of the nine B_3 rows in the aligned f-basis.
std::string b3_table_text(const HypergroupBundle& h, double tol = 1e-9);

}  // namespace qhf
