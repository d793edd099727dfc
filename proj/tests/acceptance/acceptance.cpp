// Runs the numbered acceptance experiments and prints one PASS/FAIL line per
// criterion, followed by the individual checks. Exit status is nonzero if any
// selected criterion fails.
//
//   acceptance [--only N]... [--seed S] [--quiet]

#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ewsn/analytics/csv.hpp"
#include "ewsn/harness/experiments.hpp"

using namespace ewsn;

namespace {

std::string describe(const analytics::OracleCheck& c) {
  using analytics::CheckKind;
  using analytics::csv_real;
  switch (c.kind) {
    case CheckKind::relative:
      return fmt::format("measured {} vs {} (tol {:.0f}%)", csv_real(c.measured), csv_real(c.predicted),
                         c.tolerance * 100);
    case CheckKind::absolute:
      if (c.tolerance == 0 && c.predicted == 1.0) return c.note;
      return fmt::format("measured {} vs {} (+/- {})", csv_real(c.measured), csv_real(c.predicted),
                         csv_real(c.tolerance));
    case CheckKind::at_most:
      return fmt::format("measured {} <= {}", csv_real(c.measured), csv_real(c.predicted));
    case CheckKind::at_least:
      return fmt::format("measured {} >= {}", csv_real(c.measured), csv_real(c.predicted));
    case CheckKind::info:
      return fmt::format("{} (reference {}){}", csv_real(c.measured), csv_real(c.predicted),
                         c.note.empty() ? "" : "; " + c.note);
    case CheckKind::skipped:
      return "skipped: " + c.note;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance experiments"};
  std::vector<int> only;
  std::uint64_t seed = 1;
  bool quiet = false;
  app.add_option("--only", only, "criterion number(s) to run")->check(CLI::Range(1, harness::kCriteria));
  app.add_option("--seed", seed, "master seed");
  app.add_flag("--quiet", quiet, "criterion lines only");
  CLI11_PARSE(app, argc, argv);

  if (only.empty())
    for (int i = 1; i <= harness::kCriteria; ++i) only.push_back(i);

  int failed = 0;
  for (int id : only) {
    const auto o = harness::run_criterion(id, {seed});
    std::cout << fmt::format("criterion {:>2}: {} - {} [{:.1f}s]\n", id, o.pass() ? "PASS" : "FAIL", o.title, o.wall_s);
    if (!quiet)
      for (const auto& c : o.report.checks()) {
        const char* tag = c.kind == analytics::CheckKind::info      ? "info"
                          : c.kind == analytics::CheckKind::skipped ? "skip"
                          : c.pass                                  ? " ok "
                                                                    : "FAIL";
        const auto d = describe(c);
        std::cout << fmt::format("    [{}] {}{}\n", tag, c.name, d.empty() ? "" : ": " + d);
      }
    std::cout.flush();
    if (!o.pass()) ++failed;
  }
  return failed ? 1 : 0;
}
