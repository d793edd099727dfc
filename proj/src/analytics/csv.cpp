#include "ewsn/analytics/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ewsn::analytics {

std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.9g}", v);
}

std::string csv_real(const std::optional<double>& v) { return v ? csv_real(*v) : std::string{}; }

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {
std::string pct_cells(const std::optional<Percentiles>& p) {
  if (!p) return ",,,,";
  return fmt::format("{},{},{},{},{}", csv_real(p->min), csv_real(p->p25), csv_real(p->p50),
                     csv_real(p->p75), csv_real(p->max));
}
}  // namespace

void write_summary_csv(std::ostream& os, const RunSummary& s) {
  const auto& m = s.metrics;
  os << "measured_s,nodes,events,mean_duty_cycle,"
        "dc_min,dc_p25,dc_p50,dc_p75,dc_max,"
        "global_exchange_rate,mean_exchange_rate,mass_successes,disagreements,mass_delivery_ratio,"
        "generated,delivered,dropped,in_queue_at_end,lost,duplicates,delivery_ratio,"
        "latency_min_s,latency_p25_s,latency_p50_s,latency_p75_s,latency_max_s,"
        "hops_min,hops_p25,hops_p50,hops_p75,hops_max,oracle_pass\n";
  os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    csv_real(m.measured().seconds()), m.nodes.size(), m.dispatched,
                    csv_real(m.mean_duty_cycle()), pct_cells(s.duty_cycle),
                    csv_real(m.global_exchange_rate()), csv_real(m.mean_exchange_rate()),
                    m.mass_successes(), m.disagreements(), csv_real(m.mass_delivery_ratio()),
                    m.generated, m.delivered, m.dropped, m.in_queue_at_end, m.lost, m.duplicates,
                    csv_real(m.delivery_ratio()), pct_cells(s.latency_s), pct_cells(s.hops),
                    s.report.all_pass() ? 1 : 0);
}

void write_nodes_csv(std::ostream& os, const RunMetrics& m) {
  os << "node,radio_on_us,duty_cycle,wakeups,skipped_wakeups,strobes,initiator_successes,"
        "responder_successes,negative_agreements,disagreements,aborted,generated,forwarded,dropped,"
        "always_on\n";
  for (NodeId i = 0; i < m.nodes.size(); ++i) {
    const auto& n = m.nodes[i];
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", i, n.radio_on.us(),
                      csv_real(m.duty_cycle(i)), n.wakeups, n.skipped_wakeups, n.strobes,
                      n.initiator_successes, n.responder_successes, n.negative_agreements,
                      n.disagreements, n.aborted, n.generated, n.forwarded, n.dropped,
                      n.always_on ? 1 : 0);
  }
}

void write_oracle_csv(std::ostream& os, const OracleReport& r) {
  os << "name,kind,predicted,measured,tolerance,pass,note\n";
  for (const auto& c : r.checks()) {
    const char* pass = c.kind == CheckKind::skipped ? "skipped" : (c.pass ? "1" : "0");
    os << fmt::format("{},{},{},{},{},{},{}\n", csv_text(c.name), to_string(c.kind),
                      csv_real(c.predicted), csv_real(c.measured), csv_real(c.tolerance), pass,
                      csv_text(c.note));
  }
}

}  // namespace ewsn::analytics
