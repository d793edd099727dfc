#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ewsn/analytics/oracle.hpp"

namespace ewsn::harness {

// The numbered validation experiments. Each one builds its own networks,
// runs them and returns an oracle report; `ewsn validate` and the acceptance
// binary both call into here.

inline constexpr int kCriteria = 14;

struct ExperimentOptions {
  std::uint64_t seed = 1;
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  analytics::OracleReport report;
  double wall_s = 0.0;
  bool pass() const { return report.all_pass(); }
};

std::string criterion_title(int id);
CriterionOutcome run_criterion(int id, const ExperimentOptions& opt = {});

// validate suites: sofa-model, estreme-model, staffetta-model, mobility, gossip-mass
const std::vector<std::string>& suite_names();
// Throws ConfigError for an unknown suite. estreme-model also carries a
// model-agreement check of the MAC's collision rate (id 0).
std::vector<CriterionOutcome> run_suite(const std::string& suite, const ExperimentOptions& opt = {});

}  // namespace ewsn::harness
