#pragma once

// Shared test scaffolding: the 8-node fixture as embedded documents, and a
// deterministic random-graph generator for the property sweeps. Random draws
// go through our own helpers (not std distributions) so every platform
// replays the same graphs.

#include "qroute/telemetry.hpp"
#include "qroute/topology.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

inline const char* net8_topology_json() {
  return R"({
    "nodes": [1, 2, 3, 4, 5, 6, 7, 8],
    "links": [
      {"a": 1, "b": 2, "distance_km": 7.8},
      {"a": 1, "b": 4, "distance_km": 2.8},
      {"a": 2, "b": 3, "distance_km": 5.8},
      {"a": 2, "b": 5, "distance_km": 1.8},
      {"a": 3, "b": 4, "distance_km": 5.8},
      {"a": 4, "b": 8, "distance_km": 3.0},
      {"a": 5, "b": 6, "distance_km": 5.8},
      {"a": 6, "b": 7, "distance_km": 5.8},
      {"a": 7, "b": 8, "distance_km": 9.8}
    ]
  })";
}

inline const char* net8_telemetry_json() {
  return R"({
    "telemetry": [
      {"a": 1, "b": 2, "load": 0.0, "ber": 1e-6},
      {"a": 1, "b": 4, "load": 0.0, "ber": 1e-6},
      {"a": 2, "b": 3, "load": 0.0, "ber": 1e-6},
      {"a": 2, "b": 5, "load": 0.0, "ber": 1e-6},
      {"a": 3, "b": 4, "load": 0.0, "ber": 1e-6},
      {"a": 4, "b": 8, "load": 0.0, "ber": 1e-6},
      {"a": 5, "b": 6, "load": 0.0, "ber": 1e-6},
      {"a": 6, "b": 7, "load": 0.0, "ber": 1e-6},
      {"a": 7, "b": 8, "load": 0.0, "ber": 1e-6}
    ]
  })";
}

inline const char* net8_events_jsonl() {
  return "{\"t\": 1.0, \"a\": 3, \"b\": 4, \"field\": \"ber\", \"value\": 1e-4}\n"
         "{\"t\": 2.0, \"a\": 7, \"b\": 8, \"field\": \"ber\", \"value\": 1e-4}\n";
}

inline qroute::Topology make_net8() { return qroute::load_topology(net8_topology_json()); }

inline qroute::TelemetrySnapshot net8_nominal(const qroute::Topology& t) {
  return qroute::load_telemetry(t, net8_telemetry_json());
}

// ---- deterministic random draws ----

inline double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uint_in(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline double ureal_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * u01(rng);
}

struct RandomCase {
  qroute::Topology topology;
  std::vector<qroute::LinkTelemetry> telemetry;  // aligned to topology.links()
};

// Connected graph on 1..n: a random spanning tree plus extra edges, random
// distances, loads in [0, 0.9], and BER drawn across all three penalty tiers.
inline RandomCase random_case(std::mt19937_64& rng, int min_nodes = 8, int max_nodes = 30) {
  int n = uint_in(rng, min_nodes, max_nodes);
  std::vector<qroute::NodeId> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back(i);

  std::set<std::pair<int, int>> edges;
  for (int v = 2; v <= n; ++v) {
    int u = uint_in(rng, 1, v - 1);  // spanning tree: connectivity guaranteed
    edges.insert({u, v});
  }
  int extra = uint_in(rng, n / 2, n);
  for (int k = 0; k < extra; ++k) {
    int u = uint_in(rng, 1, n);
    int v = uint_in(rng, 1, n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges.insert({u, v});
  }

  std::vector<qroute::Link> links;
  std::vector<qroute::LinkTelemetry> tel;
  for (auto [a, b] : edges) {
    links.push_back({a, b, ureal_in(rng, 0.2, 20.0), 10e9});
    qroute::LinkTelemetry lt;
    lt.load = ureal_in(rng, 0.0, 0.9);
    switch (uint_in(rng, 0, 3)) {  // clean twice as likely as each bad tier
      case 0: lt.ber = 2e-4; break;    // top tier, 1000 us
      case 1: lt.ber = 3e-5; break;    // middle tier, 50 us
      default: lt.ber = 1e-7; break;   // below every threshold
    }
    tel.push_back(lt);
  }
  return {qroute::Topology(std::move(nodes), std::move(links)), std::move(tel)};
}

}  // namespace testsupport
