#include "qroute/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qroute {

namespace {

constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

// Single-source Dijkstra over strictly positive weights. Because weights are
// positive, every equal-cost predecessor of a node settles before the node
// itself pops, so comparing candidate paths at relax time yields the
// lexicographically smallest optimal node sequence per destination.
struct SingleSource {
  std::vector<Scalar> dist;
  std::vector<std::vector<NodeId>> path;  // by dense index; empty = unreachable
};

SingleSource dijkstra(const WeightedView& view, int src_index) {
  const Topology& t = *view.topology;
  const int n = t.size();
  SingleSource out;
  out.dist.assign(static_cast<size_t>(n), kInf);
  out.path.assign(static_cast<size_t>(n), {});
  out.dist[static_cast<size_t>(src_index)] = 0.0;
  out.path[static_cast<size_t>(src_index)] = {t.node_at(src_index)};

  using Item = std::pair<Scalar, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src_index});
  std::vector<char> settled(static_cast<size_t>(n), 0);

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (settled[static_cast<size_t>(u)]) continue;
    settled[static_cast<size_t>(u)] = 1;
    for (int v : t.neighbor_indices(u)) {
      Scalar nd = d + view.w(u, v);
      Scalar& dv = out.dist[static_cast<size_t>(v)];
      if (nd < dv) {
        dv = nd;
        out.path[static_cast<size_t>(v)] = out.path[static_cast<size_t>(u)];
        out.path[static_cast<size_t>(v)].push_back(t.node_at(v));
        pq.push({nd, v});
      } else if (nd == dv) {
        std::vector<NodeId> cand = out.path[static_cast<size_t>(u)];
        cand.push_back(t.node_at(v));
        if (std::lexicographical_compare(cand.begin(), cand.end(),
                                         out.path[static_cast<size_t>(v)].begin(),
                                         out.path[static_cast<size_t>(v)].end()))
          out.path[static_cast<size_t>(v)] = std::move(cand);
      }
    }
  }
  return out;
}

Route route_from(const SingleSource& ss, int dst_index) {
  Route r;
  if (ss.path[static_cast<size_t>(dst_index)].empty()) {
    r.status = RouteStatus::unreachable;
    return r;
  }
  r.path = ss.path[static_cast<size_t>(dst_index)];
  r.total_reward = -ss.dist[static_cast<size_t>(dst_index)];
  if (r.total_reward == 0.0) r.total_reward = 0.0;  // normalize -0
  return r;
}

}  // namespace

WeightedView make_weighted_view(const Topology& topology, const TelemetrySnapshot& snap,
                                const RewardModel& model) {
  RewardMatrix rm = build_reward_matrix(topology, snap, model);
  WeightedView view;
  view.topology = &topology;
  view.w = Matrix::Constant(topology.size(), topology.size(), kInf);
  for (const Link& l : topology.links()) {
    int ia = topology.index_of(l.a);
    int ib = topology.index_of(l.b);
    view.w(ia, ib) = -rm.r(ia, ib);
    view.w(ib, ia) = -rm.r(ib, ia);
  }
  return view;
}

WeightedView scale_weights(const WeightedView& view, Scalar c) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_weights: factor must be positive");
  WeightedView out;
  out.topology = view.topology;
  out.w = view.w * c;
  return out;
}

Route shortest_path(const WeightedView& view, NodeId src, NodeId dst) {
  const Topology& t = *view.topology;
  int si = t.index_of(src);
  int di = t.index_of(dst);
  if (si == di) return Route{{src}, 0.0, RouteStatus::ok};
  return route_from(dijkstra(view, si), di);
}

RouteTable solve_all_shortest(const WeightedView& view, double snapshot_time) {
  const Topology& t = *view.topology;
  RouteTable table;
  table.nodes = t.nodes();
  table.snapshot_time = snapshot_time;
  for (int si = 0; si < t.size(); ++si) {
    SingleSource ss = dijkstra(view, si);
    for (int di = 0; di < t.size(); ++di) {
      if (si == di) continue;
      table.routes[{t.node_at(si), t.node_at(di)}] = route_from(ss, di);
    }
  }
  return table;
}

VerificationReport verify_policy(const RouteTable& table, const WeightedView& view) {
  const Topology& t = *view.topology;
  if (table.nodes != t.nodes())
    throw std::invalid_argument("verify_policy: route table and view cover different topologies");

  VerificationReport report;
  std::vector<std::optional<SingleSource>> per_source(static_cast<size_t>(t.size()));
  for (const auto& [pair, route] : table.routes) {
    auto [src, dst] = pair;
    int si = t.index_of(src);
    int di = t.index_of(dst);
    if (!per_source[static_cast<size_t>(si)]) per_source[static_cast<size_t>(si)] = dijkstra(view, si);
    const SingleSource& ss = *per_source[static_cast<size_t>(si)];

    Scalar optimal = ss.dist[static_cast<size_t>(di)];
    Scalar learned = route.status == RouteStatus::ok ? -route.total_reward : kInf;
    ++report.pairs_checked;

    VerificationReport::Entry entry{src, dst, learned, optimal};
    if (route.status != RouteStatus::ok) {
      if (!std::isinf(optimal)) report.failures.push_back(entry);  // claims unreachable, isn't
      continue;
    }
    if (learned > optimal) {
      report.failures.push_back(entry);
    } else if (learned == optimal && route.path != ss.path[static_cast<size_t>(di)]) {
      report.benign_ties.push_back(entry);
    }
  }
  return report;
}

}  // namespace qroute
