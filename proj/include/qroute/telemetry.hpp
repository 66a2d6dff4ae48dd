#pragma once

#include "qroute/topology.hpp"
#include "qroute/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qroute {

// Dynamic per-link state. load is the M/M/1 utilization rho in [0,1) (the
// queuing term diverges at 1, so 1 is rejected, never capped); ber is the
// pre-FEC bit error rate in [0,1].
struct LinkTelemetry {
  Scalar load = 0.0;
  Scalar ber = 0.0;
};

void validate_link_telemetry(const LinkTelemetry& tel);

// One BER penalty tier. Tiers are ordered by strictly decreasing threshold;
// the first (highest) tier matches inclusively (ber >= threshold), later
// tiers strictly (ber > threshold), so a ber exactly at a lower threshold
// falls through to the next tier or to the fall-through penalty.
struct BerTier {
  Scalar threshold = 0.0;
  Scalar penalty_us = 0.0;
};

// The latency penalty model. Defaults: 5 us/km propagation, 1 us service
// time, and BER tiers (>= 1e-4 -> 1000 us, > 1e-5 -> 50 us, else 0 us).
struct RewardModel {
  Scalar propagation_us_per_km = 5.0;
  Scalar service_time_us = 1.0;
  std::vector<BerTier> ber_tiers = {{1e-4, 1000.0}, {1e-5, 50.0}};
  Scalar fallthrough_penalty_us = 0.0;

  void validate() const;
};

Scalar ber_penalty(const RewardModel& model, Scalar ber);
Scalar queuing_penalty(const RewardModel& model, Scalar load);
Scalar link_penalty(const RewardModel& model, Scalar distance_km, const LinkTelemetry& tel);

// Immutable per-link telemetry aligned with Topology::links() order.
// Construction validates domain and coverage: one entry per link, exactly.
class TelemetrySnapshot {
 public:
  TelemetrySnapshot(const Topology& topology, std::vector<LinkTelemetry> per_link,
                    double timestamp = 0.0);

  const LinkTelemetry& at(int link_index) const {
    return per_link_.at(static_cast<size_t>(link_index));
  }
  int size() const { return static_cast<int>(per_link_.size()); }
  double timestamp() const { return timestamp_; }

 private:
  std::vector<LinkTelemetry> per_link_;
  double timestamp_ = 0.0;
};

// Parse a telemetry document against a topology:
//   { "telemetry": [ { "a": 1, "b": 2, "load": 0.1, "ber": 1e-6 }, ... ] }
// Every topology link must appear exactly once.
TelemetrySnapshot load_telemetry(const Topology& topology, const std::string& json_text,
                                 double timestamp = 0.0);
TelemetrySnapshot load_telemetry_file(const Topology& topology, const std::string& path);

// A single-field change to a single link's telemetry, replayable from an
// event stream (one JSON record per line):
//   { "t": 12.5, "a": 3, "b": 4, "field": "ber", "value": 1e-4 }
enum class TelemetryField { load, ber };

struct TelemetryEvent {
  double time = 0.0;
  NodeId a = 0;
  NodeId b = 0;
  TelemetryField field = TelemetryField::load;
  Scalar value = 0.0;
};

// New snapshot differing from snap only in the named field of the named
// link, with the timestamp advanced to ev.time. Unknown links and
// out-of-domain values throw; snap is never modified.
TelemetrySnapshot apply_event(const Topology& topology, const TelemetrySnapshot& snap,
                              const TelemetryEvent& ev);

std::vector<TelemetryEvent> parse_event_stream(std::istream& in);
std::vector<TelemetryEvent> load_event_stream_file(const std::string& path);

// R(s,a) over directed adjacencies, stored dense by node index with NaN at
// non-adjacent pairs. Entries are -link_penalty in us, so always strictly
// negative and symmetric per link.
struct RewardMatrix {
  Matrix r;

  Scalar at(int state_index, int action_index) const;
  int size() const { return static_cast<int>(r.rows()); }
};

RewardMatrix build_reward_matrix(const Topology& topology, const TelemetrySnapshot& snap,
                                 const RewardModel& model);

}  // namespace qroute
