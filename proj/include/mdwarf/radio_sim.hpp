#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdwarf/node.hpp"
#include "mdwarf/topology.hpp"

namespace mdwarf {

struct RadioConfig {
  double airtime_ms = 2.0;        // transmission duration; must be < T/10
  double start_window_ms = 0.0;   // first-firing window; 0 means "use T"
};

struct SimConfig {
  double period_ms = 1000.0;
  std::size_t periods = 300;
  ProtocolFlags flags;
  RadioConfig radio;
  std::uint64_t seed = 0;
  // (node, period): withhold the node's first timer until that period.
  std::vector<std::pair<NodeId, std::size_t>> late_start;
  // (node, period): the node stops firing from that period on.
  std::vector<std::pair<NodeId, std::size_t>> stop_at;
  bool record_messages = true;
};

struct FiringRecord {
  std::int64_t period = 0;  // floor(time / T)
  NodeId node = 0;
  double time_ms = 0.0;
  double phase_ms = 0.0;    // time mod T
  double force = 0.0;
  double adjustment_ms = 0.0;
};

struct CollisionRecord {
  double time_ms = 0.0;  // end of the lost transmission
  NodeId receiver = 0;
  NodeId sender = 0;     // whose message was lost
  std::vector<NodeId> interferers;  // other overlapping one-hop transmitters
};

struct MessageRecord {
  double time_ms = 0.0;
  NodeId sender = 0;
  std::vector<std::pair<NodeId, double>> entries;
};

struct Trace {
  SimConfig config;  // echo of the run configuration
  std::size_t node_count = 0;
  std::vector<FiringRecord> firings;
  std::vector<CollisionRecord> collisions;
  std::vector<MessageRecord> messages;
  std::size_t delivered_count = 0;  // successful deliveries, for accounting
};

struct Transmission {
  NodeId sender = 0;
  double start = 0.0;
  double end = 0.0;  // start + airtime
};

// True when `tx` is cleanly received at `receiver`: the receiver was not
// transmitting during [tx.start, tx.end) and no other transmission from any
// of its one-hop neighbors overlaps that interval. Intervals are half-open.
bool collision_rule(NodeId receiver, const Transmission& tx,
                    std::span<const Transmission> concurrent,
                    const Topology& topo);

// First firing times for all nodes against one RNG stream: node i's draw is
// the i-th value of mt19937_64(seed), mapped to [0, start_window); late
// starters are offset by their join period. The per-node draw order is fixed
// regardless of late_start so stream layout never shifts.
std::vector<double> draw_start_times(std::size_t node_count,
                                     const SimConfig& cfg);

// Deterministic discrete-event run; events are ordered by (time, schedule
// sequence). Runs until simulated time reaches periods*T + start_window.
Trace run_simulation(const Topology& topo, const SimConfig& cfg);

// Same engine with explicit first firing times (used by tests that inject
// exact phases instead of drawing them).
Trace run_simulation_with_starts(const Topology& topo, const SimConfig& cfg,
                                 std::span<const double> first_fire_times);

}  // namespace mdwarf
