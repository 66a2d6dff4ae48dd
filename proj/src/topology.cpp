#include "qroute/topology.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qroute {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("topology: " + where + ": " + what);
}

std::string pair_str(NodeId a, NodeId b) {
  return std::to_string(a) + "-" + std::to_string(b);
}

}  // namespace

Topology::Topology(std::vector<NodeId> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  if (nodes_.empty()) fail("nodes", "no nodes");
  std::sort(nodes_.begin(), nodes_.end());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] <= 0) fail("nodes", "node id must be positive, got " + std::to_string(nodes_[i]));
    if (i > 0 && nodes_[i] == nodes_[i - 1])
      fail("nodes", "duplicate node id " + std::to_string(nodes_[i]));
    index_.emplace(nodes_[i], static_cast<int>(i));
  }

  for (size_t i = 0; i < links_.size(); ++i) {
    Link& l = links_[i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (l.a == l.b) fail(where, "self-loop " + pair_str(l.a, l.b));
    if (!index_.count(l.a)) fail(where, "unknown endpoint " + std::to_string(l.a));
    if (!index_.count(l.b)) fail(where, "unknown endpoint " + std::to_string(l.b));
    if (l.distance_km < 0.0)
      fail(where, "negative distance " + std::to_string(l.distance_km) + " on " + pair_str(l.a, l.b));
    if (!(l.capacity_bps > 0.0))
      fail(where, "capacity must be positive on " + pair_str(l.a, l.b));
    if (l.a > l.b) std::swap(l.a, l.b);
  }
  std::sort(links_.begin(), links_.end(),
            [](const Link& x, const Link& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (size_t i = 1; i < links_.size(); ++i) {
    if (links_[i].a == links_[i - 1].a && links_[i].b == links_[i - 1].b)
      fail("links", "duplicate link pair " + pair_str(links_[i].a, links_[i].b));
  }

  adj_.assign(nodes_.size(), {});
  adj_index_.assign(nodes_.size(), {});
  adj_link_.assign(nodes_.size(), {});
  for (size_t li = 0; li < links_.size(); ++li) {
    const Link& l = links_[li];
    adj_[static_cast<size_t>(index_.at(l.a))].push_back(l.b);
    adj_[static_cast<size_t>(index_.at(l.b))].push_back(l.a);
    adj_link_[static_cast<size_t>(index_.at(l.a))].push_back(static_cast<int>(li));
    adj_link_[static_cast<size_t>(index_.at(l.b))].push_back(static_cast<int>(li));
  }
  // Keep neighbor ids ascending; link indices track the same permutation.
  for (size_t i = 0; i < adj_.size(); ++i) {
    std::vector<size_t> order(adj_[i].size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return adj_[i][x] < adj_[i][y]; });
    std::vector<NodeId> ids(order.size());
    std::vector<int> lks(order.size());
    std::vector<int> idxs(order.size());
    for (size_t k = 0; k < order.size(); ++k) {
      ids[k] = adj_[i][order[k]];
      lks[k] = adj_link_[i][order[k]];
      idxs[k] = index_.at(ids[k]);
    }
    adj_[i] = std::move(ids);
    adj_link_[i] = std::move(lks);
    adj_index_[i] = std::move(idxs);
  }
}

int Topology::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail("node", "unknown node " + std::to_string(id));
  return it->second;
}

const std::vector<NodeId>& Topology::neighbors(NodeId s) const {
  return adj_[static_cast<size_t>(index_of(s))];
}

int Topology::find_link(NodeId a, NodeId b) const {
  if (!has_node(a) || !has_node(b)) return -1;
  const auto& ids = adj_[static_cast<size_t>(index_.at(a))];
  const auto& lks = adj_link_[static_cast<size_t>(index_.at(a))];
  auto it = std::lower_bound(ids.begin(), ids.end(), b);
  if (it == ids.end() || *it != b) return -1;
  return lks[static_cast<size_t>(it - ids.begin())];
}

const Link& Topology::link_between(NodeId a, NodeId b) const {
  int li = find_link(a, b);
  if (li < 0) fail("link", "no link " + pair_str(a, b));
  return links_[static_cast<size_t>(li)];
}

Matrix Topology::adjacency_indicator() const {
  Matrix p = Matrix::Zero(size(), size());
  for (const Link& l : links_) {
    int ia = index_.at(l.a);
    int ib = index_.at(l.b);
    p(ia, ib) = 1.0;
    p(ib, ia) = 1.0;
  }
  return p;
}

std::vector<std::vector<NodeId>> Topology::connected_components() const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::vector<NodeId>> components;
  for (size_t start = 0; start < nodes_.size(); ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> comp;
    std::queue<int> frontier;
    frontier.push(static_cast<int>(start));
    seen[start] = 1;
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop();
      comp.push_back(nodes_[static_cast<size_t>(u)]);
      for (int v : adj_index_[static_cast<size_t>(u)]) {
        if (!seen[v]) {
          seen[v] = 1;
          frontier.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

namespace {

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw std::runtime_error(std::string(what) + ": invalid JSON");
  return doc;
}

}  // namespace

Topology load_topology(const std::string& json_text) {
  json doc = parse_json(json_text, "topology");
  if (!doc.is_object()) fail("document", "expected an object");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) fail("nodes", "missing array");
  if (!doc.contains("links") || !doc["links"].is_array()) fail("links", "missing array");

  std::vector<NodeId> nodes;
  for (size_t i = 0; i < doc["nodes"].size(); ++i) {
    const json& n = doc["nodes"][i];
    if (!n.is_number_integer())
      fail("nodes[" + std::to_string(i) + "]", "node id must be an integer");
    nodes.push_back(n.get<NodeId>());
  }

  std::vector<Link> links;
  for (size_t i = 0; i < doc["links"].size(); ++i) {
    const json& e = doc["links"][i];
    const std::string where = "links[" + std::to_string(i) + "]";
    if (!e.is_object()) fail(where, "expected an object");
    for (const char* key : {"a", "b", "distance_km"})
      if (!e.contains(key)) fail(where, std::string("missing field \"") + key + "\"");
    if (!e["a"].is_number_integer() || !e["b"].is_number_integer())
      fail(where, "endpoints must be integers");
    if (!e["distance_km"].is_number()) fail(where, "distance_km must be a number");
    Link l;
    l.a = e["a"].get<NodeId>();
    l.b = e["b"].get<NodeId>();
    l.distance_km = e["distance_km"].get<Scalar>();
    if (e.contains("capacity_bps")) {
      if (!e["capacity_bps"].is_number()) fail(where, "capacity_bps must be a number");
      l.capacity_bps = e["capacity_bps"].get<Scalar>();
    }
    links.push_back(l);
  }
  return Topology(std::move(nodes), std::move(links));
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_topology(buf.str());
}

}  // namespace qroute
