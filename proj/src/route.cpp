#include "qroute/route.hpp"

#include <stdexcept>

namespace qroute {

std::string to_string(RouteStatus s) {
  switch (s) {
    case RouteStatus::ok: return "ok";
    case RouteStatus::unreachable: return "unreachable";
    case RouteStatus::no_convergence: return "no_convergence";
  }
  return "unknown";
}

RouteStatus route_status_from_string(const std::string& s) {
  if (s == "ok") return RouteStatus::ok;
  if (s == "unreachable") return RouteStatus::unreachable;
  if (s == "no_convergence") return RouteStatus::no_convergence;
  throw std::runtime_error("route table: unknown status \"" + s + "\"");
}

bool same_route(const Route& x, const Route& y) {
  return x.status == y.status && x.path == y.path && x.total_reward == y.total_reward;
}

std::string render_path(const std::vector<NodeId>& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '-';
    out += std::to_string(path[i]);
  }
  return out;
}

const Route* RouteTable::find(NodeId src, NodeId dst) const {
  auto it = routes.find({src, dst});
  return it == routes.end() ? nullptr : &it->second;
}

bool RouteTable::fully_converged() const {
  for (const auto& [pair, route] : routes)
    if (route.status != RouteStatus::ok) return false;
  return true;
}

bool same_routes(const RouteTable& x, const RouteTable& y) {
  if (x.nodes != y.nodes || x.routes.size() != y.routes.size()) return false;
  auto ix = x.routes.begin();
  auto iy = y.routes.begin();
  for (; ix != x.routes.end(); ++ix, ++iy) {
    if (ix->first != iy->first || !same_route(ix->second, iy->second)) return false;
  }
  return true;
}

}  // namespace qroute
