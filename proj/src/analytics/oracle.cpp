#include "ewsn/analytics/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace ewsn::analytics {

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::relative: return "relative";
    case CheckKind::absolute: return "absolute";
    case CheckKind::at_most: return "at_most";
    case CheckKind::at_least: return "at_least";
    case CheckKind::info: return "info";
    case CheckKind::skipped: return "skipped";
  }
  return "?";
}

OracleCheck& OracleReport::push(OracleCheck c) {
  checks_.push_back(std::move(c));
  return checks_.back();
}

OracleCheck& OracleReport::relative(std::string name, double predicted, double measured, double tol,
                                    double eps_abs) {
  const bool ok = std::isfinite(measured) &&
                  std::fabs(measured - predicted) <= tol * std::max(std::fabs(predicted), eps_abs);
  return push({std::move(name), predicted, measured, tol, ok, CheckKind::relative, {}});
}

OracleCheck& OracleReport::absolute(std::string name, double predicted, double measured, double tol) {
  const bool ok = std::isfinite(measured) && std::fabs(measured - predicted) <= tol;
  return push({std::move(name), predicted, measured, tol, ok, CheckKind::absolute, {}});
}

OracleCheck& OracleReport::at_most(std::string name, double bound, double measured) {
  return push({std::move(name), bound, measured, 0.0, measured <= bound, CheckKind::at_most, {}});
}

OracleCheck& OracleReport::at_least(std::string name, double bound, double measured) {
  return push({std::move(name), bound, measured, 0.0, measured >= bound, CheckKind::at_least, {}});
}

OracleCheck& OracleReport::require(std::string name, bool ok, std::string note) {
  return push({std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0, ok, CheckKind::absolute, std::move(note)});
}

OracleCheck& OracleReport::info(std::string name, double predicted, double measured, std::string note) {
  return push({std::move(name), predicted, measured, 0.0, true, CheckKind::info, std::move(note)});
}

OracleCheck& OracleReport::skip(std::string name, std::string why) {
  return push({std::move(name), 0.0, 0.0, 0.0, false, CheckKind::skipped, std::move(why)});
}

void OracleReport::merge(const OracleReport& other, const std::string& prefix) {
  for (auto c : other.checks_) {
    if (!prefix.empty()) c.name = prefix + c.name;
    checks_.push_back(std::move(c));
  }
}

bool OracleReport::all_pass() const { return failures().empty(); }

bool OracleReport::any_skipped() const {
  return std::any_of(checks_.begin(), checks_.end(),
                     [](const OracleCheck& c) { return c.kind == CheckKind::skipped; });
}

std::vector<const OracleCheck*> OracleReport::failures() const {
  std::vector<const OracleCheck*> out;
  for (const auto& c : checks_)
    if (c.kind != CheckKind::info && c.kind != CheckKind::skipped && !c.pass) out.push_back(&c);
  return out;
}

}  // namespace ewsn::analytics
