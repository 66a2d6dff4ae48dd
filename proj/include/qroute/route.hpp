#pragma once

#include "qroute/types.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qroute {

enum class RouteStatus {
  ok,              // path runs src..dst without repeats
  unreachable,     // no path exists in the topology
  no_convergence,  // greedy extraction looped or exceeded its length budget
};

std::string to_string(RouteStatus s);
RouteStatus route_status_from_string(const std::string& s);

struct Route {
  std::vector<NodeId> path;     // src..dst when status == ok, else empty
  Scalar total_reward = 0.0;    // sum of R(s,a) along path: minus the penalty sum
  RouteStatus status = RouteStatus::ok;
};

bool same_route(const Route& x, const Route& y);

// "1-4-8-7"
std::string render_path(const std::vector<NodeId>& path);

// The extracted policy: one Route per ordered (src, dst) pair, src != dst.
// snapshot_time tags the telemetry instant the table was computed from.
struct RouteTable {
  std::vector<NodeId> nodes;  // ascending; identifies the topology
  double snapshot_time = 0.0;
  std::map<std::pair<NodeId, NodeId>, Route> routes;

  const Route* find(NodeId src, NodeId dst) const;
  bool fully_converged() const;  // every route has status ok
};

// Route-by-route equality, ignoring snapshot_time.
bool same_routes(const RouteTable& x, const RouteTable& y);

}  // namespace qroute
