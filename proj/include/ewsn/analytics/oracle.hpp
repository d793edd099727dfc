#pragma once

#include <string>
#include <vector>

namespace ewsn::analytics {

enum class CheckKind {
  relative,   // |m - p| <= tol * max(|p|, eps_abs)
  absolute,   // |m - p| <= tol
  at_most,    // m <= p
  at_least,   // m >= p
  info,       // printed, never fails
  skipped,    // input missing; advisory
};

std::string to_string(CheckKind k);

struct OracleCheck {
  std::string name;
  double predicted = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  CheckKind kind = CheckKind::relative;
  std::string note;
};

class OracleReport {
 public:
  static constexpr double kEpsAbs = 1e-9;

  OracleCheck& relative(std::string name, double predicted, double measured, double tol,
                        double eps_abs = kEpsAbs);
  OracleCheck& absolute(std::string name, double predicted, double measured, double tol);
  OracleCheck& at_most(std::string name, double bound, double measured);
  OracleCheck& at_least(std::string name, double bound, double measured);
  // A pass/fail fact that has no natural predicted value (monotonicity, equality).
  OracleCheck& require(std::string name, bool ok, std::string note = {});
  OracleCheck& info(std::string name, double predicted, double measured, std::string note = {});
  OracleCheck& skip(std::string name, std::string why);

  void merge(const OracleReport& other, const std::string& prefix = {});

  const std::vector<OracleCheck>& checks() const { return checks_; }
  bool empty() const { return checks_.empty(); }
  // info and skipped entries do not count
  bool all_pass() const;
  bool any_skipped() const;
  std::vector<const OracleCheck*> failures() const;

 private:
  OracleCheck& push(OracleCheck c);
  std::vector<OracleCheck> checks_;
};

}  // namespace ewsn::analytics
