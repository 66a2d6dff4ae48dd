#include "qroute/engine.hpp"

#include "support.hpp"

#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <vector>

using namespace qroute;

namespace {

TelemetryEvent ber_event(double t, NodeId a, NodeId b, Scalar value) {
  return {t, a, b, TelemetryField::ber, value};
}

Engine oracle_engine() {
  Topology t = testsupport::make_net8();
  TelemetrySnapshot snap = testsupport::net8_nominal(t);
  return Engine(std::move(t), std::move(snap), RewardModel{}, SolverKind::oracle, Hyperparams{});
}

std::vector<NodeId> path_of(const RouteTable& table, NodeId src, NodeId dst) {
  const Route* r = table.find(src, dst);
  REQUIRE(r != nullptr);
  return r->path;
}

}  // namespace

TEST_CASE("diffing tables counts path and status changes only") {
  RouteTable before;
  before.nodes = {1, 2};
  before.snapshot_time = 1.0;
  before.routes[{1, 2}] = Route{{1, 2}, -5.0, RouteStatus::ok};
  before.routes[{2, 1}] = Route{{2, 1}, -5.0, RouteStatus::ok};

  RouteTable after = before;
  after.snapshot_time = 7.5;
  after.routes[{1, 2}].total_reward = -6.0;  // cost drift on the same path is not a change
  after.routes[{2, 1}] = Route{{}, 0.0, RouteStatus::unreachable};

  PolicyDiff diff = diff_route_tables(before, after);
  CHECK(diff.time == 7.5);
  CHECK(diff.changed == 1);
  CHECK(diff.unchanged == 1);
  CHECK(diff.newly_unreachable == 1);
  REQUIRE(diff.entries.size() == 1);
  CHECK(diff.entries[0].src == 2);
  CHECK(diff.entries[0].dst == 1);
  CHECK(diff.entries[0].before.status == RouteStatus::ok);
  CHECK(diff.entries[0].after.status == RouteStatus::unreachable);

  PolicyDiff same = diff_route_tables(before, before);
  CHECK(same.empty());
  CHECK(same.unchanged == 2);

  RouteTable other_nodes = before;
  other_nodes.nodes = {1, 3};
  CHECK_THROWS_AS(diff_route_tables(before, other_nodes), std::invalid_argument);

  RouteTable missing_pair = before;
  missing_pair.routes.erase({2, 1});
  CHECK_THROWS_AS(diff_route_tables(before, missing_pair), std::invalid_argument);
}

TEST_CASE("engine construction validates its inputs") {
  Topology t = testsupport::make_net8();
  TelemetrySnapshot snap = testsupport::net8_nominal(t);

  Engine e(t, snap, RewardModel{}, SolverKind::oracle, Hyperparams{});
  CHECK(e.route_table().routes.size() == 56);
  CHECK(e.route_table().snapshot_time == snap.timestamp());
  CHECK(e.event_log().empty());
  CHECK(to_string(e.solver()) == "oracle");

  // Hyperparameters are only consulted by the q-learning solver.
  Hyperparams bad;
  bad.alpha = 0.0;
  CHECK_NOTHROW(Engine(t, snap, RewardModel{}, SolverKind::oracle, bad));
  CHECK_THROWS_AS(Engine(t, snap, RewardModel{}, SolverKind::qlearning, bad),
                  std::invalid_argument);

  Topology two({1, 2}, {{1, 2, 0.8, 10e9}});
  TelemetrySnapshot short_snap(two, {{0.0, 1e-6}});
  CHECK_THROWS_AS(Engine(t, short_snap, RewardModel{}, SolverKind::oracle, Hyperparams{}),
                  std::invalid_argument);
}

TEST_CASE("a no-op event re-solves to an empty diff") {
  Engine e = oracle_engine();
  PolicyDiff diff = e.step(ber_event(1.0, 1, 2, 1e-6));  // writes the value already present

  CHECK(diff.empty());
  CHECK(diff.changed == 0);
  CHECK(diff.unchanged == 56);
  CHECK(diff.time == 1.0);
  CHECK(e.snapshot().timestamp() == 1.0);
  CHECK(e.route_table().snapshot_time == 1.0);
  CHECK(e.event_log().size() == 1);
}

TEST_CASE("degrading one link reroutes exactly the pairs that crossed it") {
  Engine e = oracle_engine();

  PolicyDiff first = e.step(ber_event(1.0, 3, 4, 1e-4));
  CHECK(first.changed == 8);
  CHECK(first.unchanged == 48);
  CHECK(first.newly_unreachable == 0);
  std::vector<std::pair<NodeId, NodeId>> expect1 = {{1, 3}, {3, 1}, {3, 4}, {3, 7},
                                                    {3, 8}, {4, 3}, {7, 3}, {8, 3}};
  REQUIRE(first.entries.size() == expect1.size());
  for (size_t i = 0; i < expect1.size(); ++i) {
    CHECK(first.entries[i].src == expect1[i].first);
    CHECK(first.entries[i].dst == expect1[i].second);
  }
  CHECK(path_of(e.route_table(), 3, 4) == std::vector<NodeId>{3, 2, 1, 4});
  CHECK(path_of(e.route_table(), 1, 3) == std::vector<NodeId>{1, 2, 3});
  CHECK(path_of(e.route_table(), 7, 8) == std::vector<NodeId>{7, 8});  // untouched so far

  PolicyDiff second = e.step(ber_event(2.0, 7, 8, 1e-4));
  CHECK(second.changed == 8);
  std::vector<std::pair<NodeId, NodeId>> expect2 = {{1, 7}, {4, 7}, {6, 8}, {7, 1},
                                                    {7, 4}, {7, 8}, {8, 6}, {8, 7}};
  REQUIRE(second.entries.size() == expect2.size());
  for (size_t i = 0; i < expect2.size(); ++i) {
    CHECK(second.entries[i].src == expect2[i].first);
    CHECK(second.entries[i].dst == expect2[i].second);
  }
  CHECK(path_of(e.route_table(), 7, 8) == std::vector<NodeId>{7, 6, 5, 2, 1, 4, 8});
  CHECK(path_of(e.route_table(), 1, 7) == std::vector<NodeId>{1, 2, 5, 6, 7});
  CHECK(e.event_log().size() == 2);
}

TEST_CASE("invalid events leave the engine untouched") {
  Engine e = oracle_engine();
  RouteTable before = e.route_table();
  e.step(ber_event(1.0, 1, 2, 1e-6));

  CHECK_THROWS_AS(e.step(ber_event(0.5, 1, 2, 1e-6)), std::invalid_argument);  // time regressed
  CHECK_THROWS_AS(e.step(ber_event(2.0, 1, 7, 1e-6)), std::invalid_argument);  // not a link
  CHECK_THROWS_AS(e.step({2.0, 1, 2, TelemetryField::load, 1.0}), std::domain_error);

  CHECK(e.snapshot().timestamp() == 1.0);
  CHECK(e.event_log().size() == 1);
  CHECK(same_routes(e.route_table(), before));
}

TEST_CASE("replay without batching emits one diff per event") {
  std::istringstream in(testsupport::net8_events_jsonl());
  std::vector<TelemetryEvent> events = parse_event_stream(in);
  REQUIRE(events.size() == 2);

  Engine e = oracle_engine();
  ReplayResult res = e.replay(events);
  CHECK_FALSE(res.aborted);
  CHECK(res.error.empty());
  CHECK(res.events_applied == 2);
  REQUIRE(res.diffs.size() == 2);
  CHECK(res.diffs[0].time == 1.0);
  CHECK(res.diffs[1].time == 2.0);
  CHECK(e.snapshot().timestamp() == 2.0);

  Engine empty_run = oracle_engine();
  ReplayResult none = empty_run.replay({});
  CHECK(none.diffs.empty());
  CHECK(none.events_applied == 0);
  CHECK_FALSE(none.aborted);
}

TEST_CASE("batch windows coalesce re-solves without changing the endpoint") {
  std::istringstream in(testsupport::net8_events_jsonl());
  std::vector<TelemetryEvent> events = parse_event_stream(in);

  Engine tight = oracle_engine();
  ReplayResult split = tight.replay(events, 1.0);  // t=2 falls outside [1, 2)
  CHECK(split.diffs.size() == 2);

  Engine wide = oracle_engine();
  ReplayResult merged = wide.replay(events, 1.5);  // both inside [1, 2.5)
  CHECK(merged.diffs.size() == 1);
  CHECK(merged.events_applied == 2);
  CHECK(merged.diffs[0].changed == 16);

  CHECK(same_routes(tight.route_table(), wide.route_table()));
}

TEST_CASE("replay aborts on the first invalid event and keeps earlier progress") {
  Engine e = oracle_engine();
  std::vector<TelemetryEvent> events = {ber_event(1.0, 3, 4, 1e-4), ber_event(2.0, 1, 7, 1e-4),
                                        ber_event(3.0, 7, 8, 1e-4)};
  ReplayResult res = e.replay(events);
  CHECK(res.aborted);
  CHECK_FALSE(res.error.empty());
  CHECK(res.events_applied == 1);
  CHECK(res.diffs.size() == 1);
  CHECK(e.snapshot().timestamp() == 1.0);
  CHECK(e.event_log().size() == 1);
}

TEST_CASE("independent degradations commute") {
  Engine ab = oracle_engine();
  ab.step(ber_event(1.0, 3, 4, 1e-4));
  ab.step(ber_event(2.0, 7, 8, 1e-4));

  Engine ba = oracle_engine();
  ba.step(ber_event(1.0, 7, 8, 1e-4));
  ba.step(ber_event(2.0, 3, 4, 1e-4));

  CHECK(same_routes(ab.route_table(), ba.route_table()));
}

TEST_CASE("revert checks round-trip the policy") {
  Engine e = oracle_engine();
  RouteTable initial = e.route_table();

  CHECK(revert_check(e, ber_event(1.0, 3, 4, 1e-4)));
  CHECK(revert_check(e, {2.0, 1, 2, TelemetryField::load, 0.5}));
  CHECK(revert_check(e, ber_event(3.0, 1, 2, 1e-6)));  // no-op event
  CHECK(same_routes(e.route_table(), initial));
  CHECK(e.snapshot().timestamp() == 3.0);  // reverts advance time, not state
}

TEST_CASE("the learned solver drives the same closed loop") {
  Topology t = testsupport::make_net8();
  TelemetrySnapshot snap = testsupport::net8_nominal(t);
  Engine e(t, snap, RewardModel{}, SolverKind::qlearning, Hyperparams{});
  CHECK(to_string(e.solver()) == "q");
  CHECK(e.route_table().routes.size() == 56);
  CHECK(e.route_table().fully_converged());

  PolicyDiff diff = e.step(ber_event(1.0, 3, 4, 1e-4));
  CHECK(diff.changed == 8);
  CHECK(path_of(e.route_table(), 3, 4) == std::vector<NodeId>{3, 2, 1, 4});

  Engine fresh(t, snap, RewardModel{}, SolverKind::qlearning, Hyperparams{});
  CHECK(revert_check(fresh, ber_event(1.0, 3, 4, 1e-4)));
}

TEST_CASE("warm starts keep the policy optimal across events") {
  Topology t = testsupport::make_net8();
  TelemetrySnapshot snap = testsupport::net8_nominal(t);
  Engine e(t, snap, RewardModel{}, SolverKind::qlearning, Hyperparams{}, true);

  e.step(ber_event(1.0, 3, 4, 1e-4));
  TelemetrySnapshot degraded = e.snapshot();
  WeightedView v = make_weighted_view(t, degraded, RewardModel{});
  VerificationReport report = verify_policy(e.route_table(), v);
  CHECK(report.failures.empty());
}
