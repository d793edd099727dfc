#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "ewsn/analytics/summary.hpp"
#include "ewsn/harness/scenario.hpp"
#include "ewsn/radio/topology.hpp"

namespace ewsn::harness {

// Output file name -> contents. Ordered, so writing is deterministic too.
using OutputFiles = std::map<std::string, std::string>;

struct RunResult {
  analytics::RunSummary summary;
  OutputFiles files;
};

radio::Topology build_topology(const Scenario& s);

// Run without touching the filesystem (other than reading declared inputs).
RunResult execute_scenario(const Scenario& s);

// execute_scenario, then write every file into out_dir. A non-empty out_dir
// is refused unless force is set. Throws ConfigError on refusal and
// std::runtime_error on I/O failure.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir, bool force = false);

void write_outputs(const OutputFiles& files, const std::filesystem::path& out_dir);

}  // namespace ewsn::harness
