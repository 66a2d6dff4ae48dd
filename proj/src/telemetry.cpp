#include "qroute/telemetry.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qroute {

namespace {

using nlohmann::json;

std::string pair_str(NodeId a, NodeId b) {
  return std::to_string(a) + "-" + std::to_string(b);
}

}  // namespace

void validate_link_telemetry(const LinkTelemetry& tel) {
  if (!(tel.load >= 0.0) || !(tel.load < 1.0))
    throw std::domain_error("telemetry: load must be in [0,1), got " + std::to_string(tel.load));
  if (!(tel.ber >= 0.0) || !(tel.ber <= 1.0))
    throw std::domain_error("telemetry: ber must be in [0,1], got " + std::to_string(tel.ber));
}

void RewardModel::validate() const {
  if (!(propagation_us_per_km >= 0.0))
    throw std::invalid_argument("reward model: propagation coefficient must be non-negative");
  if (!(service_time_us > 0.0))
    throw std::invalid_argument("reward model: service time must be positive");
  if (fallthrough_penalty_us < 0.0)
    throw std::invalid_argument("reward model: fall-through penalty must be non-negative");
  for (size_t i = 0; i < ber_tiers.size(); ++i) {
    if (ber_tiers[i].penalty_us < 0.0)
      throw std::invalid_argument("reward model: tier penalties must be non-negative");
    if (i > 0 && !(ber_tiers[i].threshold < ber_tiers[i - 1].threshold))
      throw std::invalid_argument("reward model: tier thresholds must be strictly decreasing");
  }
}

Scalar ber_penalty(const RewardModel& model, Scalar ber) {
  if (!(ber >= 0.0) || !(ber <= 1.0))
    throw std::domain_error("ber_penalty: ber must be in [0,1], got " + std::to_string(ber));
  for (size_t i = 0; i < model.ber_tiers.size(); ++i) {
    const BerTier& tier = model.ber_tiers[i];
    // Highest tier matches its threshold inclusively; lower tiers strictly,
    // so a ber sitting exactly on a lower threshold falls through.
    if (i == 0 ? ber >= tier.threshold : ber > tier.threshold) return tier.penalty_us;
  }
  return model.fallthrough_penalty_us;
}

Scalar queuing_penalty(const RewardModel& model, Scalar load) {
  if (!(load >= 0.0) || !(load < 1.0))
    throw std::domain_error("queuing_penalty: load must be in [0,1), got " + std::to_string(load));
  return model.service_time_us / (1.0 - load);
}

Scalar link_penalty(const RewardModel& model, Scalar distance_km, const LinkTelemetry& tel) {
  if (distance_km < 0.0)
    throw std::domain_error("link_penalty: negative distance " + std::to_string(distance_km));
  return model.propagation_us_per_km * distance_km + queuing_penalty(model, tel.load) +
         ber_penalty(model, tel.ber);
}

TelemetrySnapshot::TelemetrySnapshot(const Topology& topology, std::vector<LinkTelemetry> per_link,
                                     double timestamp)
    : per_link_(std::move(per_link)), timestamp_(timestamp) {
  if (static_cast<int>(per_link_.size()) != topology.link_count())
    throw std::runtime_error("telemetry: expected one entry per link (" +
                             std::to_string(topology.link_count()) + "), got " +
                             std::to_string(per_link_.size()));
  for (const LinkTelemetry& tel : per_link_) validate_link_telemetry(tel);
}

TelemetrySnapshot load_telemetry(const Topology& topology, const std::string& json_text,
                                 double timestamp) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error("telemetry: invalid JSON");
  if (!doc.is_object() || !doc.contains("telemetry") || !doc["telemetry"].is_array())
    throw std::runtime_error("telemetry: missing \"telemetry\" array");

  std::vector<LinkTelemetry> per_link(static_cast<size_t>(topology.link_count()));
  std::vector<char> covered(per_link.size(), 0);
  const json& arr = doc["telemetry"];
  for (size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    const std::string where = "telemetry[" + std::to_string(i) + "]";
    if (!e.is_object()) throw std::runtime_error(where + ": expected an object");
    for (const char* key : {"a", "b", "load", "ber"})
      if (!e.contains(key) || !e[key].is_number())
        throw std::runtime_error(where + ": missing or non-numeric field \"" + key + "\"");
    NodeId a = e["a"].get<NodeId>();
    NodeId b = e["b"].get<NodeId>();
    int li = topology.find_link(a, b);
    if (li < 0) throw std::runtime_error(where + ": unknown link " + pair_str(a, b));
    if (covered[static_cast<size_t>(li)])
      throw std::runtime_error(where + ": duplicate entry for link " + pair_str(a, b));
    covered[static_cast<size_t>(li)] = 1;
    per_link[static_cast<size_t>(li)] = {e["load"].get<Scalar>(), e["ber"].get<Scalar>()};
  }
  for (size_t li = 0; li < covered.size(); ++li) {
    if (!covered[li]) {
      const Link& l = topology.links()[li];
      throw std::runtime_error("telemetry: missing entry for link " + pair_str(l.a, l.b));
    }
  }
  return TelemetrySnapshot(topology, std::move(per_link), timestamp);
}

TelemetrySnapshot load_telemetry_file(const Topology& topology, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("telemetry: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_telemetry(topology, buf.str());
}

TelemetrySnapshot apply_event(const Topology& topology, const TelemetrySnapshot& snap,
                              const TelemetryEvent& ev) {
  int li = topology.find_link(ev.a, ev.b);
  if (li < 0) throw std::invalid_argument("event: unknown link " + pair_str(ev.a, ev.b));
  std::vector<LinkTelemetry> per_link;
  per_link.reserve(static_cast<size_t>(snap.size()));
  for (int i = 0; i < snap.size(); ++i) per_link.push_back(snap.at(i));
  LinkTelemetry& tel = per_link[static_cast<size_t>(li)];
  if (ev.field == TelemetryField::load)
    tel.load = ev.value;
  else
    tel.ber = ev.value;
  validate_link_telemetry(tel);  // throws before any snapshot is built
  return TelemetrySnapshot(topology, std::move(per_link), ev.time);
}

std::vector<TelemetryEvent> parse_event_stream(std::istream& in) {
  std::vector<TelemetryEvent> events;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "events:" + std::to_string(lineno);
    json e = json::parse(line, nullptr, false);
    if (e.is_discarded()) throw std::runtime_error(where + ": invalid JSON");
    for (const char* key : {"t", "a", "b", "value"})
      if (!e.contains(key) || !e[key].is_number())
        throw std::runtime_error(where + ": missing or non-numeric field \"" + key + "\"");
    if (!e.contains("field") || !e["field"].is_string())
      throw std::runtime_error(where + ": missing string field \"field\"");
    TelemetryEvent ev;
    ev.time = e["t"].get<double>();
    ev.a = e["a"].get<NodeId>();
    ev.b = e["b"].get<NodeId>();
    ev.value = e["value"].get<Scalar>();
    std::string field = e["field"].get<std::string>();
    if (field == "load")
      ev.field = TelemetryField::load;
    else if (field == "ber")
      ev.field = TelemetryField::ber;
    else
      throw std::runtime_error(where + ": field must be \"load\" or \"ber\", got \"" + field + "\"");
    events.push_back(ev);
  }
  return events;
}

std::vector<TelemetryEvent> load_event_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("events: cannot open " + path);
  return parse_event_stream(in);
}

Scalar RewardMatrix::at(int state_index, int action_index) const {
  Scalar v = r(state_index, action_index);
  if (std::isnan(v))
    throw std::invalid_argument("reward matrix: no adjacency at (" + std::to_string(state_index) +
                                "," + std::to_string(action_index) + ")");
  return v;
}

RewardMatrix build_reward_matrix(const Topology& topology, const TelemetrySnapshot& snap,
                                 const RewardModel& model) {
  model.validate();
  if (snap.size() != topology.link_count())
    throw std::runtime_error("reward matrix: snapshot covers " + std::to_string(snap.size()) +
                             " links, topology has " + std::to_string(topology.link_count()));
  const int n = topology.size();
  RewardMatrix rm;
  rm.r = Matrix::Constant(n, n, std::numeric_limits<Scalar>::quiet_NaN());
  for (int li = 0; li < topology.link_count(); ++li) {
    const Link& l = topology.links()[static_cast<size_t>(li)];
    Scalar reward = -link_penalty(model, l.distance_km, snap.at(li));
    int ia = topology.index_of(l.a);
    int ib = topology.index_of(l.b);
    rm.r(ia, ib) = reward;
    rm.r(ib, ia) = reward;
  }
  return rm;
}

}  // namespace qroute
