#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhf/scenario.hpp"

namespace py = pybind11;
using namespace qhf;

namespace {

py::dict report_to_dict(const Report& r) {
  py::dict out;
  out["title"] = r.title;
  out["tol"] = r.tol;
  out["all_ok"] = r.all_ok();
  py::dict values;
  for (const auto& [k, v] : r.values) values[py::str(k)] = v;
  out["values"] = values;
  py::list checks;
  for (const auto& c : r.checks) {
    py::dict d;
    d["name"] = c.name;
    d["status"] = c.status == CheckStatus::pass
                      ? "pass"
                      : c.status == CheckStatus::fail ? "fail" : "skipped";
    d["residual"] = c.residual;
    d["note"] = c.note;
    checks.append(d);
  }
  out["checks"] = checks;
  return out;
}

}  // namespace

PYBIND11_MODULE(_qhf, m) {
  m.doc() = "finite quantum hypergroup construction and verification";

  m.def("list_scenarios", [] {
    py::list out;
    for (const auto& s : list_scenarios()) {
      py::dict d;
      d["name"] = s.name;
      d["description"] = s.description;
      d["params"] = s.params;
      out.append(d);
    }
    return out;
  });

  m.def(
      "run_scenario",
      [](const std::string& name, const std::map<std::string, int>& params,
         double tol, int cp_dim_limit) {
        auto run = run_scenario(name, params, tol, cp_dim_limit);
        py::dict out;
        out["report"] = report_to_dict(run.report);
        out["report_text"] = to_text_table(run.report);
        out["report_json"] = to_json(run.report);
        if (run.hyper) {
          out["dim_B"] = run.hyper->dim_B();
          out["coproduct_table"] = coproduct_table_text(*run.hyper);
        }
        return out;
      },
      py::arg("name"), py::arg("params") = std::map<std::string, int>{},
      py::arg("tol") = 1e-9, py::arg("cp_dim_limit") = 24);

  m.def(
      "compare_b3_table",
      [](double tol) {
        auto run = run_scenario("quasiquaternion", {{"n", 3}}, tol, 24);
        auto diff = compare_b3_table(*run.hyper, tol);
        py::dict out;
        out["report"] = report_to_dict(diff);
        out["table_text"] = b3_table_text(*run.hyper, tol);
        return out;
      },
      py::arg("tol") = 1e-9);

  m.def("verify_group_json", [](const std::string& text) {
    auto g = group_from_json(text);  // throws on invalid tables
    return g->order;
  });
}
