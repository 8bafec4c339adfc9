#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qhf/scenario.hpp"

namespace {

int report_exit(const qhf::Report& r) { return r.all_ok() ? 0 : 1; }

std::map<std::string, int> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, int> out;
  for (const auto& kv : raw) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected k=v, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stoi(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--param", "non-integer value in '" + kv + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite quantum hypergroup construction and verification"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list registered scenarios");

  std::string name;
  std::vector<std::string> raw_params;
  double tol = 1e-9;
  int cp_limit = 24;
  std::string json_path;
  auto* run_cmd = app.add_subcommand("run", "run one scenario end to end");
  run_cmd->add_option("scenario", name, "registered scenario name")->required();
  run_cmd->add_option("--param", raw_params, "override a parameter, k=v");
  run_cmd->add_option("--tol", tol, "check tolerance");
  run_cmd->add_option("--cp-limit", cp_limit,
                      "largest dim A for the complete-positivity check");
  run_cmd->add_option("--json", json_path, "also write the report as JSON");

  std::string table_name;
  std::string basis = "computed";
  auto* table_cmd =
      app.add_subcommand("table", "print the induced coproduct of a scenario");
  table_cmd->add_option("scenario", table_name, "registered scenario name")
      ->required();
  table_cmd->add_option("--basis", basis, "computed | f (f: the reference basis"
                        " of the nine-dimensional quasiquaternion hypergroup)")
      ->check(CLI::IsMember({"computed", "f"}));

  std::string group_path;
  auto* verify_cmd =
      app.add_subcommand("verify-group", "validate a group table from JSON");
  verify_cmd->add_option("path", group_path, "group definition JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& s : qhf::list_scenarios()) {
        std::cout << s.name;
        if (!s.params.empty()) {
          std::cout << " (";
          bool first = true;
          for (const auto& [k, v] : s.params) {
            std::cout << (first ? "" : ", ") << k << "=" << v;
            first = false;
          }
          std::cout << ")";
        }
        std::cout << "\n    " << s.description << "\n";
      }
      return 0;
    }

    if (run_cmd->parsed()) {
      auto run = qhf::run_scenario(name, parse_params(raw_params), tol, cp_limit);
      std::cout << qhf::to_text_table(run.report);
      if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) {
          std::cerr << "cannot open " << json_path << " for writing\n";
          return 2;
        }
        out << qhf::to_json(run.report) << "\n";
      }
      return report_exit(run.report);
    }

    if (table_cmd->parsed()) {
      auto run = qhf::run_scenario(table_name, {}, tol, cp_limit);
      if (!run.hyper) {
        std::cerr << "scenario produced no hypergroup\n";
        return 2;
      }
      if (basis == "computed") {
        std::cout << qhf::coproduct_table_text(*run.hyper);
        return report_exit(run.report);
      }
      auto diff = qhf::compare_b3_table(*run.hyper);
      std::cout << qhf::b3_table_text(*run.hyper) << "\n"
                << qhf::to_text_table(diff);
      return diff.all_ok() && run.report.all_ok() ? 0 : 1;
    }

    // verify-group
    std::ifstream in(group_path);
    if (!in) {
      std::cerr << "cannot read " << group_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto g = qhf::group_from_json(buf.str());
    std::cout << "order " << g->order << ": group axioms hold\n";
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
