#pragma once

#include "qroute/route.hpp"
#include "qroute/telemetry.hpp"
#include "qroute/topology.hpp"
#include "qroute/types.hpp"

#include <vector>

namespace qroute {

// Directed adjacency weights weight(s,a) = link_penalty(s,a) in us, dense by
// node index with +inf at non-adjacent pairs. Weights are strictly positive
// by construction (service time > 0), so Dijkstra's precondition holds.
// Holds a non-owning pointer to the topology it was built from.
struct WeightedView {
  const Topology* topology = nullptr;
  Matrix w;

  Scalar weight(int state_index, int action_index) const {
    return w(state_index, action_index);
  }
};

WeightedView make_weighted_view(const Topology& topology, const TelemetrySnapshot& snap,
                                const RewardModel& model);

// Same view with every weight multiplied by c > 0. Argmin paths are
// invariant under this scaling; costs are not.
WeightedView scale_weights(const WeightedView& view, Scalar c);

// Exact minimum-penalty path. Ties are broken toward the lexicographically
// smallest node-id sequence, which makes the output unique and diffable.
// total_reward is minus the path penalty sum, accumulated src -> dst.
Route shortest_path(const WeightedView& view, NodeId src, NodeId dst);

// All-pairs table via one Dijkstra per source.
RouteTable solve_all_shortest(const WeightedView& view, double snapshot_time = 0.0);

// Per-pair comparison of a learned table against the exact optimum.
struct VerificationReport {
  struct Entry {
    NodeId src = 0;
    NodeId dst = 0;
    Scalar learned_cost = 0.0;  // -total_reward; +inf when the route is not ok
    Scalar optimal_cost = 0.0;
  };

  std::vector<Entry> failures;     // learned cost > optimal cost
  std::vector<Entry> benign_ties;  // equal cost, different path
  int pairs_checked = 0;

  bool ok() const { return failures.empty(); }
};

VerificationReport verify_policy(const RouteTable& table, const WeightedView& view);

}  // namespace qroute
