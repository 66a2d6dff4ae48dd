#pragma once

#include "qroute/oracle.hpp"
#include "qroute/qlearning.hpp"
#include "qroute/route.hpp"
#include "qroute/telemetry.hpp"
#include "qroute/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qroute {

enum class SolverKind { qlearning, oracle };

std::string to_string(SolverKind s);

struct PolicyDiffEntry {
  NodeId src = 0;
  NodeId dst = 0;
  Route before;
  Route after;
};

// Exactly the pairs whose path sequence (or status) changed between two
// tables over the same topology.
struct PolicyDiff {
  double time = 0.0;  // snapshot time of the newer table
  std::vector<PolicyDiffEntry> entries;  // sorted by (src, dst)
  int changed = 0;
  int unchanged = 0;
  int newly_unreachable = 0;  // ok before, not ok after

  bool empty() const { return entries.empty(); }
};

PolicyDiff diff_route_tables(const RouteTable& before, const RouteTable& after);

struct ReplayResult {
  std::vector<PolicyDiff> diffs;  // one per re-solve (per batch)
  std::size_t events_applied = 0;
  bool aborted = false;
  std::string error;
};

// Closed-loop controller: holds the current snapshot and policy, consumes
// telemetry events one at a time, re-solves with the configured solver, and
// reports policy diffs. Single-writer: events apply strictly sequentially.
// The published RouteTable is always consistent with the current snapshot
// and tagged with its timestamp.
class Engine {
 public:
  Engine(Topology topology, TelemetrySnapshot snapshot, RewardModel model, SolverKind solver,
         Hyperparams hp, bool warm_start = false);

  const Topology& topology() const { return topology_; }
  const TelemetrySnapshot& snapshot() const { return snapshot_; }
  const RouteTable& route_table() const { return table_; }
  const std::vector<TelemetryEvent>& event_log() const { return log_; }
  SolverKind solver() const { return solver_; }

  // Apply one event: update the snapshot, rebuild rewards, re-solve, and
  // diff against the previous table. Event times must be non-decreasing.
  // On any validation error the engine state is left untouched.
  PolicyDiff step(const TelemetryEvent& ev);

  // Fold step over a time-ordered stream. batch_window > 0 coalesces events
  // within [t0, t0 + window) of each batch's first event into one re-solve.
  // The first invalid event aborts with the partial results flagged.
  ReplayResult replay(const std::vector<TelemetryEvent>& events, double batch_window = 0.0);

 private:
  RouteTable solve_for(const TelemetrySnapshot& snap);
  PolicyDiff apply_batch(const std::vector<TelemetryEvent>& batch);

  Topology topology_;
  TelemetrySnapshot snapshot_;
  RewardModel model_;
  SolverKind solver_;
  Hyperparams hp_;
  bool warm_start_ = false;
  RouteTable table_;
  std::vector<QTable> warm_tables_;  // last per-destination tables, when warm-starting
  std::vector<TelemetryEvent> log_;
};

// Apply ev, then the inverse event restoring the field's prior value, and
// report whether the route table returned to the original. Exact for the
// oracle solver and for seeded q-learning (both are pure functions of the
// snapshot). The engine is left in the reverted state.
bool revert_check(Engine& engine, const TelemetryEvent& ev);

}  // namespace qroute
