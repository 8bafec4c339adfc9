#include "qhf/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qhf {

namespace {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

}  // namespace

void Report::check(const std::string& name, double residual, const std::string& note) {
  check_at(name, residual, tol, note);
}

void Report::check_at(const std::string& name, double residual, double tolerance,
                      const std::string& note) {
  checks.push_back({name, residual <= tolerance ? CheckStatus::pass : CheckStatus::fail,
                    residual, note});
}

void Report::pass(const std::string& name, const std::string& note) {
  checks.push_back({name, CheckStatus::pass, 0.0, note});
}

void Report::fail(const std::string& name, double residual, const std::string& note) {
  checks.push_back({name, CheckStatus::fail, residual, note});
}

void Report::skip(const std::string& name, const std::string& note) {
  checks.push_back({name, CheckStatus::skipped, 0.0, note});
}

void Report::value(const std::string& key, const std::string& v) {
  values.emplace_back(key, v);
}

void Report::value(const std::string& key, double v) { value(key, format_number(v)); }

void Report::value(const std::string& key, int v) { value(key, std::to_string(v)); }

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(std::move(c));
  }
  for (auto& [k, v] : other.values) values.emplace_back(prefix + k, v);
}

const CheckResult* Report::find(const std::string& name) const {
  for (auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool Report::all_ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

double Report::max_residual() const {
  double m = 0.0;
  for (auto& c : checks)
    if (c.status != CheckStatus::skipped) m = std::max(m, c.residual);
  return m;
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(v);
    return os.str();
  }
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["title"] = r.title;
  j["tol"] = format_number(r.tol);
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  for (auto& [k, v] : r.values) vals[k] = v;
  j["values"] = vals;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = status_name(c.status);
    e["residual"] = format_number(c.residual);
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["all_ok"] = r.all_ok();
  return j.dump(2);
}

std::string to_text_table(const Report& r) {
  std::ostringstream os;
  os << "== " << r.title << " (tol " << format_number(r.tol) << ") ==\n";
  for (auto& [k, v] : r.values) os << "  " << k << " = " << v << "\n";
  size_t width = 4;
  for (auto& c : r.checks) width = std::max(width, c.name.size());
  for (auto& c : r.checks) {
    os << "  " << c.name << std::string(width - c.name.size() + 2, ' ')
       << status_name(c.status) << "  residual " << format_number(c.residual);
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  os << (r.all_ok() ? "  ALL OK\n" : "  FAILURES PRESENT\n");
  return os.str();
}

}  // namespace qhf
