#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "mdwarf/topology.hpp"

using namespace mdwarf;

namespace {

// Reference two-hop set via plain BFS distances.
std::set<NodeId> bfs_two_hop(const Topology& topo, NodeId src) {
  std::vector<int> dist(topo.node_count(), -1);
  std::queue<NodeId> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    if (dist[u] >= 2) continue;
    for (NodeId v : topo.one_hop(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  std::set<NodeId> out;
  for (NodeId v = 0; v < topo.node_count(); ++v) {
    if (dist[v] == 2) out.insert(v);
  }
  return out;
}

}  // namespace

TEST_CASE("generators produce the expected neighborhoods") {
  Topology chain = gen_chain(4);
  CHECK(chain.node_count() == 4);
  CHECK(chain.one_hop(0) == std::vector<NodeId>{1});
  CHECK(chain.one_hop(1) == std::vector<NodeId>{0, 2});
  CHECK(chain.two_hop(0) == std::vector<NodeId>{2});
  CHECK(chain.two_hop(1) == std::vector<NodeId>{3});
  CHECK_FALSE(chain.within_two_hops(0, 3));
  CHECK(chain.within_two_hops(0, 2));

  Topology complete = gen_complete(4);
  for (NodeId i = 0; i < 4; ++i) {
    CHECK(complete.one_hop(i).size() == 3);
    CHECK(complete.two_hop(i).empty());
  }

  Topology ring = gen_ring(5);
  CHECK(ring.one_hop(0) == std::vector<NodeId>{1, 4});
  CHECK(ring.two_hop(0) == std::vector<NodeId>{2, 3});

  Topology star = gen_star(5);
  CHECK(star.one_hop(0).size() == 4);
  CHECK(star.two_hop(0).empty());
  CHECK(star.two_hop(1) == std::vector<NodeId>{2, 3, 4});

  Topology grid = gen_grid(2, 3);
  CHECK(grid.node_count() == 6);
  CHECK(grid.one_hop(0) == std::vector<NodeId>{1, 3});
  CHECK(grid.two_hop(0) == std::vector<NodeId>{2, 4});
}

TEST_CASE("two-hop sets agree with BFS on random graphs") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> nd(2, 24);
    std::size_t n = nd(rng);
    std::uniform_real_distribution<double> p(0.0, 1.0);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (p(rng) < 0.3) {
          edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
        }
      }
    }
    Topology topo(n, edges);
    for (NodeId i = 0; i < n; ++i) {
      auto expect = bfs_two_hop(topo, i);
      std::set<NodeId> got(topo.two_hop(i).begin(), topo.two_hop(i).end());
      CHECK(got == expect);
    }
  }
}

TEST_CASE("edge list parsing") {
  Topology t = load_edge_list("# three node chain\n0 1\n1 2\n");
  CHECK(t.node_count() == 3);
  CHECK(t.adjacent(0, 1));
  CHECK(t.adjacent(1, 2));
  CHECK_FALSE(t.adjacent(0, 2));

  // comments and blanks anywhere, duplicate edges collapse
  Topology dup = load_edge_list("0 1\n\n1 0  # same edge again\n");
  CHECK(dup.one_hop(0) == std::vector<NodeId>{1});

  CHECK_THROWS_WITH_AS(load_edge_list("0 0\n"),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load_edge_list("0 1\n2 2\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_AS(load_edge_list("0 1 2\n"), std::runtime_error);
  CHECK_THROWS_AS(load_edge_list("0\n"), std::runtime_error);
  CHECK_THROWS_AS(load_edge_list("# nothing\n"), std::runtime_error);
  // node 1 missing entirely: ids are not dense
  CHECK_THROWS_WITH_AS(load_edge_list("0 2\n"),
                       doctest::Contains("skips node id 1"),
                       std::runtime_error);
}

TEST_CASE("self loops and out-of-range edges are rejected") {
  std::vector<std::pair<NodeId, NodeId>> self{{1, 1}};
  CHECK_THROWS_AS(Topology(3, self), std::invalid_argument);
  std::vector<std::pair<NodeId, NodeId>> oob{{0, 5}};
  CHECK_THROWS_AS(Topology(3, oob), std::invalid_argument);
  CHECK_THROWS_AS(Topology(0, {}), std::invalid_argument);
}

TEST_CASE("topology spec mini-language") {
  CHECK(make_topology("chain:3").node_count() == 3);
  CHECK(make_topology("complete:5").one_hop(2).size() == 4);
  CHECK(make_topology("grid:2x2").node_count() == 4);
  CHECK_THROWS_AS(make_topology("chain"), std::runtime_error);
  CHECK_THROWS_AS(make_topology("blob:4"), std::runtime_error);
  CHECK_THROWS_AS(make_topology("chain:0"), std::runtime_error);
  CHECK_THROWS_AS(make_topology("file:/nonexistent/x.edges"),
                  std::runtime_error);
}
