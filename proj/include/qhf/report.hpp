#pragma once

#include <map>
#include <string>
#include <vector>

namespace qhf {

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double residual = 0.0;
  std::string note;
};

struct Report {
  std::string title;
  double tol = 1e-9;
  std::vector<CheckResult> checks;
  /// Computed values (dims, block multisets, witnesses, ...), already
  /// formatted; insertion order preserved for serialization.
  std::vector<std::pair<std::string, std::string>> values;

  void check(const std::string& name, double residual, const std::string& note = "");
  void check_at(const std::string& name, double residual, double tolerance,
                const std::string& note = "");
  void pass(const std::string& name, const std::string& note = "");
  void fail(const std::string& name, double residual, const std::string& note = "");
  void skip(const std::string& name, const std::string& note);
  void value(const std::string& key, const std::string& v);
  void value(const std::string& key, double v);
  void value(const std::string& key, int v);
  void merge(const Report& other, const std::string& prefix = "");

  const CheckResult* find(const std::string& name) const;
  bool all_ok() const;  // no failing checks (skips allowed)
  double max_residual() const;
};

/// 12 significant digits, locale-independent; integral values print without
/// an exponent.
std::string format_number(double v);

std::string to_json(const Report& r);
std::string to_text_table(const Report& r);

}  // namespace qhf
