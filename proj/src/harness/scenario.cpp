#include "ewsn/harness/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace ewsn::harness {

namespace fs = std::filesystem;

double Scenario::effective_listen_ms() const {
  if (mac.listen_ms) return *mac.listen_ms;
  return protocol == ProtocolKind::collection ? 4.0 : 10.0;
}

std::size_t Scenario::node_count() const {
  switch (topology.kind) {
    case TopologyKind::chain:
      return 1 + static_cast<std::size_t>(std::max(0, topology.layers)) * std::max(0, topology.width);
    default:
      return static_cast<std::size_t>(std::max(0, topology.nodes));
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& v) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end || !std::isfinite(out)) throw ConfigError("'" + v + "' is not a number");
  return out;
}

long long to_int(const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) throw ConfigError("'" + v + "' is not an integer");
  return out;
}

std::string real(double v) { return fmt::format("{}", v); }

// [lo, hi] unless the open flags say otherwise
double ranged(const std::string& v, double lo, double hi, bool lo_open = false, bool hi_open = false) {
  const double x = to_real(v);
  const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  if (!ok)
    throw ConfigError(fmt::format("value {} out of range {}{}, {}{}", v, lo_open ? '(' : '[', real(lo),
                                  real(hi), hi_open ? ')' : ']'));
  return x;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double positive(const std::string& v) { return ranged(v, 0, kInf, true, true); }
double non_negative(const std::string& v) { return ranged(v, 0, kInf, false, true); }
double probability(const std::string& v) { return ranged(v, 0, 1, false, true); }

int int_at_least(const std::string& v, long long lo) {
  const auto x = to_int(v);
  if (x < lo || x > 1000000) throw ConfigError(fmt::format("value {} out of range [{}, 1000000]", v, lo));
  return static_cast<int>(x);
}

template <typename E>
E choose(const std::string& v, std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [n, e] : options) {
    if (v == n) return e;
    names += names.empty() ? n : std::string("|") + n;
  }
  throw ConfigError("'" + v + "' is not one of " + names);
}

template <typename E>
std::string name_of(E e, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [n, x] : options)
    if (x == e) return n;
  return "?";
}

const std::initializer_list<std::pair<const char*, TopologyKind>> kTopo = {
    {"clique", TopologyKind::clique},
    {"geometric", TopologyKind::geometric},
    {"trace", TopologyKind::trace},
    {"chain", TopologyKind::chain}};
const std::initializer_list<std::pair<const char*, radio::MobilityKind>> kMob = {
    {"stationary", radio::MobilityKind::stationary},
    {"random_waypoint", radio::MobilityKind::random_waypoint},
    {"trace", radio::MobilityKind::trace}};
const std::initializer_list<std::pair<const char*, ProtocolKind>> kProto = {
    {"sofa", ProtocolKind::sofa},
    {"lpl-unicast", ProtocolKind::lpl_unicast},
    {"collection", ProtocolKind::collection}};
const std::initializer_list<std::pair<const char*, staffetta::PolicyKind>> kPolicy = {
    {"staffetta", staffetta::PolicyKind::staffetta}, {"fixed", staffetta::PolicyKind::fixed}};
const std::initializer_list<std::pair<const char*, bool>> kContention = {{"sleep", false},
                                                                        {"retransmit", true}};
const std::initializer_list<std::pair<const char*, bool>> kPlacement = {{"uniform", false},
                                                                       {"waypoint_steady_state", true}};
const std::initializer_list<std::pair<const char*, bool>> kEstimator = {{"off", false},
                                                                       {"estreme", true}};

std::string resolve(const std::string& v, const fs::path& base) {
  fs::path p(v);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal().string();
}

std::vector<std::uint32_t> node_list(const std::string& v) {
  std::vector<std::uint32_t> out;
  std::string tok;
  std::istringstream in(v);
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) throw ConfigError("empty entry in node list '" + v + "'");
    const auto x = to_int(tok);
    if (x < 0) throw ConfigError("negative node id " + tok);
    out.push_back(static_cast<std::uint32_t>(x));
  }
  if (out.empty()) throw ConfigError("node list is empty");
  return out;
}

std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(Scenario&, const std::string&, const fs::path&)> set;
  std::function<std::optional<std::string>(const Scenario&)> get;
};

using Get = std::optional<std::string>;

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      // [scenario]
      {"scenario", "name",
       [](Scenario& s, const std::string& v, const fs::path&) {
         if (v.empty()) throw ConfigError("name must not be empty");
         s.name = v;
       },
       [](const Scenario& s) -> Get { return s.name; }},
      {"scenario", "seed",
       [](Scenario& s, const std::string& v, const fs::path&) {
         const auto x = to_int(v);
         if (x < 0) throw ConfigError("seed must be >= 0");
         s.seed = static_cast<std::uint64_t>(x);
       },
       [](const Scenario& s) -> Get { return std::to_string(s.seed); }},
      {"scenario", "duration_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.duration_s = positive(v); },
       [](const Scenario& s) -> Get { return real(s.duration_s); }},
      {"scenario", "warmup_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.warmup_s = non_negative(v); },
       [](const Scenario& s) -> Get { return real(s.warmup_s); }},
      // [topology]
      {"topology", "kind",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.kind = choose(v, kTopo); },
       [](const Scenario& s) -> Get { return name_of(s.topology.kind, kTopo); }},
      {"topology", "nodes",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.nodes = int_at_least(v, 2); },
       [](const Scenario& s) -> Get {
         return s.topology.nodes ? Get(std::to_string(s.topology.nodes)) : std::nullopt;
       }},
      {"topology", "arena_m",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.arena_m = positive(v); },
       [](const Scenario& s) -> Get { return s.topology.arena_m > 0 ? Get(real(s.topology.arena_m)) : std::nullopt; }},
      {"topology", "range_m",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.range_m = positive(v); },
       [](const Scenario& s) -> Get { return s.topology.range_m > 0 ? Get(real(s.topology.range_m)) : std::nullopt; }},
      {"topology", "file",
       [](Scenario& s, const std::string& v, const fs::path& b) { s.topology.file = resolve(v, b); },
       [](const Scenario& s) -> Get { return s.topology.file.empty() ? std::nullopt : Get(s.topology.file); }},
      {"topology", "layers",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.layers = int_at_least(v, 1); },
       [](const Scenario& s) -> Get {
         return s.topology.layers ? Get(std::to_string(s.topology.layers)) : std::nullopt;
       }},
      {"topology", "width",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.width = int_at_least(v, 1); },
       [](const Scenario& s) -> Get {
         return s.topology.width ? Get(std::to_string(s.topology.width)) : std::nullopt;
       }},
      {"topology", "placement",
       [](Scenario& s, const std::string& v, const fs::path&) { s.topology.waypoint_placement = choose(v, kPlacement); },
       [](const Scenario& s) -> Get {
         return s.topology.kind == TopologyKind::geometric ? Get(name_of(s.topology.waypoint_placement, kPlacement))
                                                           : std::nullopt;
       }},
      // [mobility]
      {"mobility", "kind",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mobility.kind = choose(v, kMob); },
       [](const Scenario& s) -> Get { return name_of(s.mobility.kind, kMob); }},
      {"mobility", "speed_mps",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mobility.speed_mps = ranged(v, 0, 100); },
       [](const Scenario& s) -> Get { return real(s.mobility.speed_mps); }},
      {"mobility", "pause_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mobility.pause_s = non_negative(v); },
       [](const Scenario& s) -> Get { return real(s.mobility.pause_s); }},
      {"mobility", "trace_file",
       [](Scenario& s, const std::string& v, const fs::path& b) { s.mobility.trace_file = resolve(v, b); },
       [](const Scenario& s) -> Get {
         return s.mobility.trace_file.empty() ? std::nullopt : Get(s.mobility.trace_file);
       }},
      {"mobility", "update_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mobility.update_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mobility.update_ms); }},
      // [protocol]
      {"protocol", "kind",
       [](Scenario& s, const std::string& v, const fs::path&) { s.protocol = choose(v, kProto); },
       [](const Scenario& s) -> Get { return name_of(s.protocol, kProto); }},
      // [mac]
      {"mac", "W_s", [](Scenario& s, const std::string& v, const fs::path&) { s.mac.W_s = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.W_s); }},
      {"mac", "T_s", [](Scenario& s, const std::string& v, const fs::path&) { s.mac.T_s = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.T_s); }},
      {"mac", "listen_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.listen_ms = positive(v); },
       [](const Scenario& s) -> Get { return s.mac.listen_ms ? Get(real(*s.mac.listen_ms)) : std::nullopt; }},
      {"mac", "t_b_ms", [](Scenario& s, const std::string& v, const fs::path&) { s.mac.t_b_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.t_b_ms); }},
      {"mac", "beacon_air_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.beacon_air_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.beacon_air_ms); }},
      {"mac", "ack_air_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.ack_air_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.ack_air_ms); }},
      {"mac", "data_air_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.data_air_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.data_air_ms); }},
      {"mac", "select_air_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.select_air_ms = positive(v); },
       [](const Scenario& s) -> Get { return real(s.mac.select_air_ms); }},
      {"mac", "ack_contention",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.retransmit = choose(v, kContention); },
       [](const Scenario& s) -> Get { return name_of(s.mac.retransmit, kContention); }},
      {"mac", "retransmit_p",
       [](Scenario& s, const std::string& v, const fs::path&) { s.mac.retransmit_p = ranged(v, 0, 1, true); },
       [](const Scenario& s) -> Get { return real(s.mac.retransmit_p); }},
      // [estimator]
      {"estimator", "kind",
       [](Scenario& s, const std::string& v, const fs::path&) { s.estimator.enabled = choose(v, kEstimator); },
       [](const Scenario& s) -> Get { return name_of(s.estimator.enabled, kEstimator); }},
      {"estimator", "w",
       [](Scenario& s, const std::string& v, const fs::path&) { s.estimator.w = int_at_least(v, 2); },
       [](const Scenario& s) -> Get { return std::to_string(s.estimator.w); }},
      {"estimator", "alpha",
       [](Scenario& s, const std::string& v, const fs::path&) { s.estimator.alpha = ranged(v, 0, 1, true); },
       [](const Scenario& s) -> Get { return real(s.estimator.alpha); }},
      // [collection]
      {"collection", "metric",
       [](Scenario& s, const std::string& v, const fs::path&) {
         s.collection.metric = staffetta::metric_from_string(v);
       },
       [](const Scenario& s) -> Get { return staffetta::to_string(s.collection.metric); }},
      {"collection", "policy",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.policy = choose(v, kPolicy); },
       [](const Scenario& s) -> Get { return name_of(s.collection.policy, kPolicy); }},
      {"collection", "fixed_hz",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.fixed_hz = ranged(v, 0, 1000, true); },
       [](const Scenario& s) -> Get { return real(s.collection.fixed_hz); }},
      {"collection", "dc_max",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.dc_max = ranged(v, 0, 1, true); },
       [](const Scenario& s) -> Get { return real(s.collection.dc_max); }},
      {"collection", "omega_min",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.omega_min = positive(v); },
       [](const Scenario& s) -> Get { return real(s.collection.omega_min); }},
      {"collection", "sinks",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.sinks = node_list(v); },
       [](const Scenario& s) -> Get { return join(s.collection.sinks); }},
      {"collection", "sink_period_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.sink_period_s = non_negative(v); },
       [](const Scenario& s) -> Get { return real(s.collection.sink_period_s); }},
      {"collection", "gen_period_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.gen_period_s = non_negative(v); },
       [](const Scenario& s) -> Get { return real(s.collection.gen_period_s); }},
      {"collection", "traffic_until_s",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.traffic_until_s = non_negative(v); },
       [](const Scenario& s) -> Get { return real(s.collection.traffic_until_s); }},
      {"collection", "queue_capacity",
       [](Scenario& s, const std::string& v, const fs::path&) { s.collection.queue_capacity = int_at_least(v, 1); },
       [](const Scenario& s) -> Get { return std::to_string(s.collection.queue_capacity); }},
      // [faults]
      {"faults", "link_loss",
       [](Scenario& s, const std::string& v, const fs::path&) { s.faults.link_loss = probability(v); },
       [](const Scenario& s) -> Get { return real(s.faults.link_loss); }},
      {"faults", "final_ack_loss",
       [](Scenario& s, const std::string& v, const fs::path&) { s.faults.final_ack_loss = probability(v); },
       [](const Scenario& s) -> Get { return real(s.faults.final_ack_loss); }},
      {"faults", "data_loss",
       [](Scenario& s, const std::string& v, const fs::path&) { s.faults.data_loss = probability(v); },
       [](const Scenario& s) -> Get { return real(s.faults.data_loss); }},
      {"faults", "select_loss",
       [](Scenario& s, const std::string& v, const fs::path&) { s.faults.select_loss = probability(v); },
       [](const Scenario& s) -> Get { return real(s.faults.select_loss); }},
      {"faults", "delay_epsilon_ms",
       [](Scenario& s, const std::string& v, const fs::path&) { s.faults.delay_epsilon_ms = ranged(v, 0, 1000); },
       [](const Scenario& s) -> Get { return real(s.faults.delay_epsilon_ms); }},
  };
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

bool known_section(const std::string& s) {
  for (const auto& f : fields())
    if (s == f.section) return true;
  return false;
}

struct Line {
  int number = 0;
  std::string section;
  std::string key;
  std::string value;
  int block = 0;  // which [point] section, when sweeping
};

// Tokenize; `point` sections are allowed only when sweeping.
std::vector<Line> tokenize(std::istream& in, const std::string& src, bool sweep) {
  std::vector<Line> out;
  std::string raw, section;
  int number = 0;
  std::set<std::string> seen;
  int points = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto cut = raw.find_first_of("#;");
    std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw ScenarioError(fmt::format("{}:{}: {}", src, number, msg));
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "point" && sweep) {
        ++points;
      } else if (!known_section(section)) {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    Line l{number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), points};
    if (section.empty()) fail("key '" + l.key + "' outside any section");
    if (l.key.empty()) fail("missing key before '='");
    const std::string id = (section == "point" ? "point" + std::to_string(points) : section) + "." + l.key;
    if (!seen.insert(id).second) fail("duplicate key '" + l.key + "' in [" + section + "]");
    out.push_back(std::move(l));
  }
  return out;
}

void set_key(Scenario& s, const std::string& section, const std::string& key, const std::string& value,
             const std::string& where, const fs::path& base) {
  const Field* f = find_field(section, key);
  if (!f) throw ScenarioError(fmt::format("{}: unknown key '{}' in [{}]", where, key, section));
  try {
    f->set(s, value, base);
  } catch (const ScenarioError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ScenarioError(fmt::format("{}: {}.{}: {}", where, section, key, e.what()));
  }
}

void require_keys(const std::vector<Line>& lines, const std::string& src) {
  auto has = [&](const char* sec, const char* key) {
    for (const auto& l : lines)
      if (l.section == sec && l.key == key) return true;
    return false;
  };
  for (auto [sec, key] : {std::pair{"scenario", "name"}, {"scenario", "duration_s"}, {"topology", "kind"}})
    if (!has(sec, key)) throw ScenarioError(fmt::format("{}: missing required key '{}' in [{}]", src, key, sec));
}

}  // namespace

void apply_override(Scenario& s, const std::string& dotted_key, const std::string& value,
                    const std::string& where, const fs::path& base_dir) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ScenarioError(fmt::format("{}: override key '{}' must be section.key", where, dotted_key));
  set_key(s, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value, where, base_dir);
}

void validate_scenario(const Scenario& s, const std::string& src) {
  auto fail = [&](const std::string& msg) { throw ScenarioError(src + ": " + msg); };
  const auto& t = s.topology;
  switch (t.kind) {
    case TopologyKind::clique:
      if (t.nodes < 2) fail("clique topology needs topology.nodes >= 2");
      break;
    case TopologyKind::geometric:
      if (t.nodes < 2 || t.arena_m <= 0 || t.range_m <= 0)
        fail("geometric topology needs topology.nodes, topology.arena_m and topology.range_m");
      break;
    case TopologyKind::trace:
      if (t.file.empty() || t.nodes < 2 || t.arena_m <= 0 || t.range_m <= 0)
        fail("trace topology needs topology.file, topology.nodes, topology.arena_m and topology.range_m");
      if (!fs::exists(t.file)) fail("topology file '" + t.file + "' does not exist");
      break;
    case TopologyKind::chain:
      if (t.layers < 1 || t.width < 1) fail("chain topology needs topology.layers and topology.width");
      break;
  }
  if (t.waypoint_placement && t.kind != TopologyKind::geometric)
    fail("topology.placement applies to geometric topologies only");
  if (s.warmup_s >= s.duration_s) fail("warmup_s must be shorter than duration_s");
  const bool placed = t.kind == TopologyKind::geometric || t.kind == TopologyKind::trace;
  if (s.mobility.kind != radio::MobilityKind::stationary && !placed)
    fail("mobility needs a geometric or trace topology");
  if (s.mobility.kind == radio::MobilityKind::trace) {
    if (s.mobility.trace_file.empty()) fail("trace mobility needs mobility.trace_file");
    if (!fs::exists(s.mobility.trace_file)) fail("trace file '" + s.mobility.trace_file + "' does not exist");
  }
  if (s.mac.T_s < s.mac.W_s) fail("mac.T_s must be >= mac.W_s");
  if (s.effective_listen_ms() >= s.mac.W_s * 1e3) fail("mac.listen_ms must be shorter than mac.W_s");
  if (s.mac.t_b_ms <= s.mac.beacon_air_ms) fail("mac.t_b_ms must exceed mac.beacon_air_ms");
  if (s.estimator.enabled && s.protocol == ProtocolKind::collection)
    fail("the estimator runs on the sofa or lpl-unicast protocol only");
  if (s.protocol == ProtocolKind::collection) {
    const auto n = s.node_count();
    for (auto sink : s.collection.sinks)
      if (sink >= n) fail(fmt::format("sink {} is not a node (nodes: {})", sink, n));
    if (s.collection.policy == staffetta::PolicyKind::staffetta &&
        s.collection.omega_min * 1e-3 * s.effective_listen_ms() > s.collection.dc_max)
      fail("collection.omega_min is too high for collection.dc_max");
    if (s.collection.traffic_until_s > s.duration_s) fail("collection.traffic_until_s exceeds duration_s");
  }
}

Scenario parse_scenario(std::istream& in, const std::string& src, const fs::path& base_dir) {
  const auto lines = tokenize(in, src, false);
  require_keys(lines, src);
  Scenario s;
  for (const auto& l : lines) set_key(s, l.section, l.key, l.value, fmt::format("{}:{}", src, l.number), base_dir);
  validate_scenario(s, src);
  return s;
}

Scenario parse_scenario_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open");
  return parse_scenario(in, path.string(), path.parent_path());
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto v = f.get(s);
    if (!v) continue;
    if (section != f.section) {
      out += (out.empty() ? "" : "\n") + fmt::format("[{}]\n", f.section);
      section = f.section;
    }
    out += fmt::format("{} = {}\n", f.key, *v);
  }
  return out;
}

std::vector<SweepPoint> parse_sweep(std::istream& in, const std::string& src, const fs::path& base_dir) {
  const auto lines = tokenize(in, src, true);
  std::vector<Line> base;
  std::map<int, std::vector<Line>> blocks;
  for (const auto& l : lines) {
    if (l.section == "point")
      blocks[l.block].push_back(l);
    else
      base.push_back(l);
  }
  std::vector<std::vector<Line>> points;
  for (auto& [k, v] : blocks) points.push_back(std::move(v));
  require_keys(base, src);
  Scenario root;
  for (const auto& l : base) set_key(root, l.section, l.key, l.value, fmt::format("{}:{}", src, l.number), base_dir);

  std::vector<SweepPoint> out;
  if (points.empty()) {
    validate_scenario(root, src);
    out.push_back({"point-000", {}, root});
    return out;
  }
  for (const auto& pl : points) {
    SweepPoint p;
    p.scenario = root;
    for (const auto& l : pl) {
      const auto where = fmt::format("{}:{}", src, l.number);
      if (l.key == "label") {
        p.label = l.value;
        continue;
      }
      apply_override(p.scenario, l.key, l.value, where, base_dir);
      p.overrides.emplace_back(l.key, l.value);
    }
    if (p.label.empty()) p.label = fmt::format("point-{:03}", out.size());
    for (const auto& o : out)
      if (o.label == p.label) throw ScenarioError(fmt::format("{}: duplicate point label '{}'", src, p.label));
    validate_scenario(p.scenario, fmt::format("{} [{}]", src, p.label));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SweepPoint> parse_sweep_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open");
  return parse_sweep(in, path.string(), path.parent_path());
}

}  // namespace ewsn::harness
