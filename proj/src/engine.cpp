#include "qroute/engine.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qroute {

std::string to_string(SolverKind s) {
  return s == SolverKind::qlearning ? "q" : "oracle";
}

PolicyDiff diff_route_tables(const RouteTable& before, const RouteTable& after) {
  if (before.nodes != after.nodes)
    throw std::invalid_argument("diff: tables cover different node sets");
  if (before.routes.size() != after.routes.size())
    throw std::invalid_argument("diff: tables cover different pair sets");

  PolicyDiff diff;
  diff.time = after.snapshot_time;
  for (const auto& [pair, now] : after.routes) {
    auto it = before.routes.find(pair);
    if (it == before.routes.end())
      throw std::invalid_argument("diff: tables cover different pair sets");
    const Route& was = it->second;
    // A change is a different node sequence or status; cost drift along an
    // unchanged path does not re-route anything.
    if (was.status == now.status && was.path == now.path) {
      ++diff.unchanged;
      continue;
    }
    ++diff.changed;
    if (was.status == RouteStatus::ok && now.status != RouteStatus::ok) ++diff.newly_unreachable;
    diff.entries.push_back({pair.first, pair.second, was, now});  // map order: sorted by (src, dst)
  }
  return diff;
}

Engine::Engine(Topology topology, TelemetrySnapshot snapshot, RewardModel model,
               SolverKind solver, Hyperparams hp, bool warm_start)
    : topology_(std::move(topology)),
      snapshot_(std::move(snapshot)),
      model_(std::move(model)),
      solver_(solver),
      hp_(hp),
      warm_start_(warm_start) {
  model_.validate();
  if (snapshot_.size() != topology_.link_count())
    throw std::invalid_argument("engine: snapshot does not cover the topology's links");
  if (solver_ == SolverKind::qlearning) hp_.validate();
  table_ = solve_for(snapshot_);
}

RouteTable Engine::solve_for(const TelemetrySnapshot& snap) {
  if (solver_ == SolverKind::oracle)
    return solve_all_shortest(make_weighted_view(topology_, snap, model_), snap.timestamp());

  RewardMatrix rewards = build_reward_matrix(topology_, snap, model_);
  const std::vector<QTable>* seed =
      warm_start_ && !warm_tables_.empty() ? &warm_tables_ : nullptr;
  SolveOutput out = solve_all_trained(topology_, rewards, hp_, snap.timestamp(), seed);
  if (warm_start_) {
    warm_tables_.clear();
    warm_tables_.reserve(out.per_destination.size());
    for (TrainResult& res : out.per_destination) warm_tables_.push_back(std::move(res.table));
  }
  return std::move(out.table);
}

PolicyDiff Engine::step(const TelemetryEvent& ev) {
  if (ev.time < snapshot_.timestamp())
    throw std::invalid_argument("engine: event at t=" + std::to_string(ev.time) +
                                " precedes the snapshot at t=" +
                                std::to_string(snapshot_.timestamp()));
  TelemetrySnapshot next = apply_event(topology_, snapshot_, ev);  // throws before any mutation
  RouteTable solved = solve_for(next);
  PolicyDiff diff = diff_route_tables(table_, solved);
  snapshot_ = std::move(next);
  table_ = std::move(solved);
  log_.push_back(ev);
  return diff;
}

PolicyDiff Engine::apply_batch(const std::vector<TelemetryEvent>& batch) {
  TelemetrySnapshot next = snapshot_;
  for (const TelemetryEvent& ev : batch) {
    if (ev.time < next.timestamp())
      throw std::invalid_argument("engine: event at t=" + std::to_string(ev.time) +
                                  " precedes the snapshot at t=" +
                                  std::to_string(next.timestamp()));
    next = apply_event(topology_, next, ev);
  }
  RouteTable solved = solve_for(next);
  PolicyDiff diff = diff_route_tables(table_, solved);
  snapshot_ = std::move(next);
  table_ = std::move(solved);
  log_.insert(log_.end(), batch.begin(), batch.end());
  return diff;
}

ReplayResult Engine::replay(const std::vector<TelemetryEvent>& events, double batch_window) {
  if (batch_window < 0.0)
    throw std::invalid_argument("engine: batch window must be >= 0");

  ReplayResult result;
  size_t i = 0;
  while (i < events.size()) {
    size_t j = i + 1;
    if (batch_window > 0.0) {
      double cutoff = events[i].time + batch_window;
      while (j < events.size() && events[j].time < cutoff) ++j;
    }
    std::vector<TelemetryEvent> batch(events.begin() + static_cast<std::ptrdiff_t>(i),
                                      events.begin() + static_cast<std::ptrdiff_t>(j));
    try {
      result.diffs.push_back(apply_batch(batch));
    } catch (const std::exception& e) {
      // Nothing from the failing batch was committed; stop here.
      result.aborted = true;
      result.error = e.what();
      return result;
    }
    result.events_applied += batch.size();
    i = j;
  }
  return result;
}

bool revert_check(Engine& engine, const TelemetryEvent& ev) {
  int link = engine.topology().find_link(ev.a, ev.b);
  if (link < 0)
    throw std::invalid_argument("revert_check: " + std::to_string(ev.a) + "-" +
                                std::to_string(ev.b) + " is not a link");
  const LinkTelemetry& prior = engine.snapshot().at(link);
  TelemetryEvent inverse = ev;
  inverse.value = ev.field == TelemetryField::load ? prior.load : prior.ber;

  RouteTable original = engine.route_table();
  engine.step(ev);
  engine.step(inverse);
  return same_routes(original, engine.route_table());
}

}  // namespace qroute
