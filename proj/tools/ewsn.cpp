// ewsn: run, sweep and validate simulation scenarios.
//
// exit codes: 0 ok, 2 bad configuration or arguments, 3 runtime failure,
// 4 validation failure

#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ewsn/analytics/csv.hpp"
#include "ewsn/harness/experiments.hpp"
#include "ewsn/harness/runner.hpp"
#include "ewsn/harness/scenario.hpp"

namespace fs = std::filesystem;
using namespace ewsn;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kRuntime = 3;
constexpr int kValidation = 4;

void print_summary(const std::string& label, const analytics::RunSummary& s) {
  const auto& m = s.metrics;
  std::string line = fmt::format("{}: {} nodes, mean duty cycle {:.4f}", label, m.nodes.size(), m.mean_duty_cycle());
  if (m.mass_successes() > 0) line += fmt::format(", exchanges/s {:.3f}", m.global_exchange_rate());
  if (auto dr = m.delivery_ratio()) line += fmt::format(", delivery ratio {:.3f}", *dr);
  if (s.latency_s) line += fmt::format(", median latency {:.3f} s", s.latency_s->p50);
  const auto fails = s.report.failures().size();
  line += fails ? fmt::format(", {} oracle check(s) off", fails) : ", oracle checks ok";
  std::cout << line << "\n";
}

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed, bool force) {
  auto s = harness::parse_scenario_file(config);
  if (seed) s.seed = *seed;
  const auto r = harness::run_scenario(s, out, force);
  print_summary(s.name, r.summary);
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& out, int jobs, bool force) {
  const auto points = harness::parse_sweep_file(config);
  if (fs::exists(out) && !force && !fs::is_empty(out))
    throw ConfigError("output directory '" + out + "' is not empty (use --force to overwrite)");
  fs::create_directories(out);

  std::vector<std::string> status(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto& p = points[i];
      try {
        const auto r = harness::run_scenario(p.scenario, fs::path(out) / p.label, true);
        status[i] = "ok";
        std::lock_guard lock(io);
        print_summary(p.label, r.summary);
      } catch (const std::exception& e) {
        status[i] = std::string("error: ") + e.what();
        std::lock_guard lock(io);
        std::cerr << p.label << ": " << e.what() << "\n";
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < n; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string index = "point,label,seed,status,dir,overrides\n";
  bool failed = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::string ov;
    for (const auto& [k, v] : points[i].overrides) ov += (ov.empty() ? "" : ";") + k + "=" + v;
    index += fmt::format("{},{},{},{},{},{}\n", i, analytics::csv_text(points[i].label), points[i].scenario.seed,
                         analytics::csv_text(status[i]), analytics::csv_text(points[i].label),
                         analytics::csv_text(ov));
    failed = failed || status[i] != "ok";
  }
  harness::write_outputs({{"index.csv", index}}, out);
  return failed ? kRuntime : kOk;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, const std::string& report) {
  const auto outcomes = harness::run_suite(suite, {seed});
  bool ok = true;
  analytics::OracleReport all;
  for (const auto& o : outcomes) {
    const auto label = o.id ? fmt::format("criterion {:>2}", o.id) : std::string("check");
    std::cout << fmt::format("{} {} ({}) [{:.1f}s]\n", o.pass() ? "PASS" : "FAIL", label, o.title, o.wall_s);
    for (const auto* c : o.report.failures())
      std::cout << fmt::format("    failed: {} (predicted {}, measured {})\n", c->name,
                               analytics::csv_real(c->predicted), analytics::csv_real(c->measured));
    ok = ok && o.pass();
    all.merge(o.report, o.title + ": ");
  }
  if (!report.empty()) {
    std::ostringstream os;
    analytics::write_oracle_csv(os, all);
    const fs::path p(report);
    harness::write_outputs({{p.filename().string(), os.str()}}, p.has_parent_path() ? p.parent_path() : fs::path("."));
  }
  return ok ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven simulator for duty-cycled wireless sensor network protocols"};
  app.require_subcommand(1);

  std::string config, out, suite, report;
  std::uint64_t seed = 1;
  bool force = false;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "run one scenario and write its CSV logs");
  run->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_flag("--force", force, "write into a non-empty output directory");

  auto* sweep = app.add_subcommand("sweep", "run every point of a sweep file");
  sweep->add_option("--config", config, "sweep file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "output directory (one subdirectory per point)")->required();
  sweep->add_option("--jobs", jobs, "points run in parallel")->check(CLI::Range(1, 256));
  sweep->add_flag("--force", force, "write into a non-empty output directory");

  auto* validate = app.add_subcommand("validate", "run a validation suite; exit 4 on any failed check");
  validate->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(harness::suite_names()));
  validate->add_option("--seed", seed, "master seed");
  validate->add_option("--report", report, "also write the oracle report CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, out, *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt, force);
    if (*sweep) return cmd_sweep(config, out, jobs, force);
    if (*validate) return cmd_validate(suite, seed, report);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
