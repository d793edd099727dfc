#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ewsn::staffetta {

enum class MetricKind { edc, qb, rw, direct };

std::string to_string(MetricKind k);
MetricKind metric_from_string(const std::string& s);  // throws ConfigError

// Responder side: does forwarding to us make progress? EDC and QB need a
// strict improvement (EDC by more than `margin` seconds); RW always accepts;
// DIRECT needs a strictly higher wake-up frequency. Two EDC nodes that have
// no estimate yet (+inf) accept each other, so a cold network random-walks
// until the sink's neighbours have measured something.
bool accept_forwarder(MetricKind kind, double beacon_metric, double own_metric, double margin = 0.0);

// P_j = omega_j / sum(omega). nullopt when there is no forwarder.
std::optional<std::vector<double>> forwarding_probability(const std::vector<double>& omegas);

// omega_h = (DC_max (n+1))^(h-1) omega_1
double gradient_model_frequency(int hops, int forwarders, double dc_max, double omega1);

}  // namespace ewsn::staffetta
