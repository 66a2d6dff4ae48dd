#pragma once

#include "qroute/types.hpp"

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace qroute {

// An undirected link with static attributes. Endpoints are stored normalized
// (a < b); attributes are symmetric in both traversal directions.
struct Link {
  NodeId a = 0;
  NodeId b = 0;
  Scalar distance_km = 0.0;
  Scalar capacity_bps = 10e9;  // 10 Gb/s unless the document says otherwise

  bool joins(NodeId x, NodeId y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
};

// Immutable simple graph: nodes, undirected links, and derived adjacency.
// Adjacency lists are sorted ascending by neighbor id, which is the
// foundation for every deterministic tie-break downstream. Safe for
// unrestricted concurrent reads once constructed.
class Topology {
 public:
  Topology(std::vector<NodeId> nodes, std::vector<Link> links);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  // Dense 0-based index of a node; ascending in node id. Throws on unknown id.
  int index_of(NodeId id) const;
  NodeId node_at(int index) const { return nodes_.at(static_cast<size_t>(index)); }

  // Neighbor ids of s, ascending. Empty for an isolated node.
  const std::vector<NodeId>& neighbors(NodeId s) const;
  const std::vector<int>& neighbor_indices(int node_index) const {
    return adj_index_[static_cast<size_t>(node_index)];
  }

  // Index into links() for the pair (a,b), or -1 when they are not adjacent.
  int find_link(NodeId a, NodeId b) const;
  const Link& link_between(NodeId a, NodeId b) const;

  // 0/1 node-to-node connectivity indicator (transitions are deterministic,
  // so reachability is a boolean matrix rather than probabilities).
  Matrix adjacency_indicator() const;

  // Partition of the node set into connected components. Components are
  // ordered by their smallest member; members ascending.
  std::vector<std::vector<NodeId>> connected_components() const;

 private:
  std::vector<NodeId> nodes_;  // ascending
  std::vector<Link> links_;    // endpoints normalized a < b, sorted by (a, b)
  std::unordered_map<NodeId, int> index_;
  std::vector<std::vector<NodeId>> adj_;       // by dense index, neighbor ids ascending
  std::vector<std::vector<int>> adj_index_;    // same order, dense neighbor indices
  std::vector<std::vector<int>> adj_link_;     // same order, indices into links_
};

// Parse and validate a topology document:
//   { "nodes": [1, 2, ...],
//     "links": [ { "a": 1, "b": 2, "distance_km": 7.8, "capacity_bps": 1e10 }, ... ] }
// capacity_bps is optional and defaults to 10e9. Schema violations throw
// std::runtime_error with the offending location in the message.
Topology load_topology(const std::string& json_text);
Topology load_topology_file(const std::string& path);

}  // namespace qroute
