#include "mdwarf/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdwarf {

Topology::Topology(std::size_t node_count,
                   const std::vector<std::pair<NodeId, NodeId>>& edges) {
  if (node_count == 0) {
    throw std::invalid_argument("topology must contain at least one node");
  }
  std::vector<std::set<NodeId>> adj(node_count);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ") references node >= " +
                                  std::to_string(node_count));
    }
    if (u == v) {
      throw std::invalid_argument("self-loop on node " + std::to_string(u));
    }
    adj[u].insert(v);
    adj[v].insert(u);
  }

  adjacency_.resize(node_count);
  two_hop_.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    adjacency_[i].assign(adj[i].begin(), adj[i].end());
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    std::set<NodeId> second;
    for (NodeId mid : adjacency_[i]) {
      for (NodeId far : adjacency_[mid]) {
        if (far != i && !adj[i].count(far)) second.insert(far);
      }
    }
    two_hop_[i].assign(second.begin(), second.end());
  }
}

const std::vector<NodeId>& Topology::one_hop(NodeId i) const {
  return adjacency_.at(i);
}

const std::vector<NodeId>& Topology::two_hop(NodeId i) const {
  return two_hop_.at(i);
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  const auto& n = adjacency_.at(a);
  return std::binary_search(n.begin(), n.end(), b);
}

bool Topology::within_two_hops(NodeId a, NodeId b) const {
  if (a == b) return false;
  if (adjacent(a, b)) return true;
  const auto& t = two_hop_.at(a);
  return std::binary_search(t.begin(), t.end(), b);
}

Topology load_edge_list(std::string_view text) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<NodeId> seen;
  NodeId max_id = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::string trimmed(line);
    std::istringstream in(trimmed);
    long long u = -1, v = -1;
    if (!(in >> u)) continue;  // blank or comment-only line
    std::string tail;
    if (!(in >> v) || (in >> tail)) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": expected exactly two node ids");
    }
    if (u < 0 || v < 0) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": node ids must be non-negative");
    }
    if (u == v) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) +
                               ": self-loop on node " + std::to_string(u));
    }
    NodeId a = static_cast<NodeId>(u), b = static_cast<NodeId>(v);
    edges.emplace_back(a, b);
    seen.insert(a);
    seen.insert(b);
    max_id = std::max({max_id, a, b});
  }

  if (edges.empty()) {
    throw std::runtime_error("edge list contains no edges");
  }
  // Ids must be dense: a hole would silently shift everyone's neighborhood.
  for (NodeId id = 0; id <= max_id; ++id) {
    if (!seen.count(id)) {
      throw std::runtime_error("edge list skips node id " + std::to_string(id) +
                               " (ids must densely cover 0..max)");
    }
  }
  return Topology(static_cast<std::size_t>(max_id) + 1, edges);
}

Topology gen_chain(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  }
  return Topology(n, edges);
}

Topology gen_ring(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  }
  if (n > 2) edges.emplace_back(static_cast<NodeId>(n - 1), 0);
  return Topology(n, edges);
}

Topology gen_star(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    edges.emplace_back(0, static_cast<NodeId>(i));
  }
  return Topology(n, edges);
}

Topology gen_complete(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  return Topology(n, edges);
}

Topology gen_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto id = [cols](std::size_t r, std::size_t c) {
    return static_cast<NodeId>(r * cols + c);
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return Topology(rows * cols, edges);
}

namespace {

std::size_t parse_count(const std::string& s, const std::string& spec) {
  std::size_t value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || p != s.data() + s.size() || value == 0) {
    throw std::runtime_error("bad topology spec '" + spec +
                             "': expected a positive count, got '" + s + "'");
  }
  return value;
}

}  // namespace

Topology make_topology(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::runtime_error("bad topology spec '" + spec +
                             "': expected kind:arg");
  }
  std::string kind = spec.substr(0, colon);
  std::string arg = spec.substr(colon + 1);

  if (kind == "file") {
    std::ifstream in(arg, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot open topology file '" + arg + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_edge_list(buf.str());
  }
  if (kind == "grid") {
    auto x = arg.find('x');
    if (x == std::string::npos) {
      throw std::runtime_error("bad topology spec '" + spec +
                               "': grid wants RxC");
    }
    return gen_grid(parse_count(arg.substr(0, x), spec),
                    parse_count(arg.substr(x + 1), spec));
  }
  std::size_t n = parse_count(arg, spec);
  if (kind == "chain") return gen_chain(n);
  if (kind == "ring") return gen_ring(n);
  if (kind == "star") return gen_star(n);
  if (kind == "complete") return gen_complete(n);
  throw std::runtime_error("unknown topology kind '" + kind + "'");
}

}  // namespace mdwarf
