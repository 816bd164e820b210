#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mdwarf/topology.hpp"

namespace mdwarf {

enum class AdjustRule { kForceField, kMidpoint };

// The four supported protocols are combinations of three switches.
enum class Algorithm { kDesync, kExtDesync, kDwarf, kMDwarf };

struct ProtocolFlags {
  bool relay = false;    // rebroadcast one-hop observations
  bool absorb = false;   // absorbed force sum instead of the plain sum
  AdjustRule rule = AdjustRule::kForceField;
  double alpha = 0.95;   // midpoint jump size, ignored by the force rule
};

ProtocolFlags flags_for(Algorithm algo);
const char* algorithm_name(Algorithm algo);

// Payload of one firing broadcast. entries carries the sender's one-hop
// observations as (id, rel ms) anchored at this firing; empty when the
// relay flag is off. The sender never lists itself.
struct FiringMessage {
  NodeId sender = 0;
  std::vector<std::pair<NodeId, double>> entries;
};

enum class HopKind : std::uint8_t { kOneHop, kTwoHopRelayed };

struct NeighborRecord {
  // Absolute time (ms) of the firing this record describes. For relayed
  // records this is the reconstructed estimate, possibly one period stale.
  double observed_at = 0.0;
  HopKind hop = HopKind::kOneHop;
  std::int64_t last_updated = 0;  // wall period floor(t/T) at last refresh
};

struct FiringOutcome {
  FiringMessage message;
  double next_timer_at = 0.0;
  double force = 0.0;       // aggregate force (0 under the midpoint rule)
  double adjustment = 0.0;  // (new_phase - old_phase) mod T, in [0, T)
};

// Pure midpoint target: with no neighbors keep phi, with one move toward
// opposition, otherwise move toward the middle of the arc between the
// previous (largest offset) and next (smallest offset) neighbor. alpha
// scales the jump. Offsets must lie in (0, T).
double midpoint_phase(double phi, std::span<const double> offsets,
                      double alpha, double period);

// One protocol participant. The surrounding simulator owns time and message
// delivery; the node only reacts to its own timer and to received firings.
class Node {
 public:
  // first_timer_at is the node's first scheduled firing; the phase anchor
  // is initialized one period earlier so receptions before the first firing
  // have a well-defined reference.
  Node(NodeId id, double period, ProtocolFlags flags, double first_timer_at);

  FiringOutcome on_timer_fire(double now);
  void on_receive(const FiringMessage& msg, double now);

  NodeId id() const { return id_; }
  double period() const { return period_; }
  double last_firing_time() const { return last_firing_; }
  // Two-hop neighborhood size (incl. self) as of the last firing.
  std::size_t neighborhood_size() const { return n_; }
  const std::map<NodeId, NeighborRecord>& buffer() const { return buffer_; }
  // Relative phase of a buffered record re-anchored at `now`, in [0, T).
  double rel_phase_of(NodeId other, double now) const;

 private:
  // Wall period an instant falls in. Records age by wall periods, not by
  // firing count: a firing adjusted forward refires within the same period
  // and must not age the buffer twice.
  std::int64_t period_index(double t) const;
  void purge_expired(std::int64_t current_period);

  NodeId id_;
  double period_;
  ProtocolFlags flags_;
  double last_firing_;
  std::size_t n_ = 1;
  // True while the next scheduled firing is one a forward adjustment moved;
  // that firing announces the new phase without applying another jump.
  bool repositioned_ = false;
  std::map<NodeId, NeighborRecord> buffer_;
};

}  // namespace mdwarf
