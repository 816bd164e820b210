#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdwarf {

using NodeId = std::uint32_t;

// Undirected connectivity graph with precomputed one-hop and two-hop sets.
// Node ids are dense 0..node_count-1.
class Topology {
 public:
  Topology(std::size_t node_count,
           const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t node_count() const { return adjacency_.size(); }
  const std::vector<NodeId>& one_hop(NodeId i) const;
  // Nodes at graph distance exactly 2.
  const std::vector<NodeId>& two_hop(NodeId i) const;

  bool adjacent(NodeId a, NodeId b) const;
  // True when a and b can interfere, i.e. graph distance <= 2 (a != b).
  bool within_two_hops(NodeId a, NodeId b) const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<NodeId>> two_hop_;
};

// Parses an edge-list document: one "u v" pair per line, '#' starts a
// comment, blank lines ignored. Node ids must densely cover 0..max_id;
// self-loops and malformed lines are reported with their line number.
Topology load_edge_list(std::string_view text);

Topology gen_chain(std::size_t n);
Topology gen_ring(std::size_t n);
Topology gen_star(std::size_t n);      // node 0 is the hub
Topology gen_complete(std::size_t n);
Topology gen_grid(std::size_t rows, std::size_t cols);

// Topology mini-language used by the CLI: "chain:N", "ring:N", "star:N",
// "complete:N", "grid:RxC", "file:PATH".
Topology make_topology(const std::string& spec);

}  // namespace mdwarf
