#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "ewsn/analytics/oracle.hpp"
#include "ewsn/analytics/run_metrics.hpp"
#include "ewsn/analytics/summary.hpp"

namespace ewsn::analytics {

// Fixed-format numbers so that identical runs give identical bytes.
std::string csv_real(double v);
std::string csv_real(const std::optional<double>& v);  // empty cell when undefined
std::string csv_text(const std::string& s);            // quotes when needed

// One header line and one data row. Column order is part of the interface.
void write_summary_csv(std::ostream& os, const RunSummary& s);
// One row per node.
void write_nodes_csv(std::ostream& os, const RunMetrics& m);
// name,kind,predicted,measured,tolerance,pass,note
void write_oracle_csv(std::ostream& os, const OracleReport& r);

}  // namespace ewsn::analytics
