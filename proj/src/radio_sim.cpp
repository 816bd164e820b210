#include "mdwarf/radio_sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>

#include "mdwarf/phase_math.hpp"

namespace mdwarf {

namespace {

struct Validated {
  double start_window;
  double end_time;
};

Validated validate(const Topology& topo, const SimConfig& cfg) {
  double t = cfg.period_ms;
  if (!(std::isfinite(t) && t > 0.0)) {
    throw std::invalid_argument("period_ms must be finite and > 0");
  }
  if (cfg.periods == 0) {
    throw std::invalid_argument("periods must be >= 1");
  }
  double air = cfg.radio.airtime_ms;
  if (!(std::isfinite(air) && air > 0.0 && air < t / 10.0)) {
    throw std::invalid_argument(
        "airtime_ms must be in (0, period/10); got " + std::to_string(air) +
        " for period " + std::to_string(t));
  }
  double window = cfg.radio.start_window_ms;
  if (window == 0.0) window = t;
  if (!(std::isfinite(window) && window > 0.0 && window <= t)) {
    throw std::invalid_argument("start_window_ms must be in (0, period]");
  }
  for (const auto& [node, period] : cfg.late_start) {
    (void)period;
    if (node >= topo.node_count()) {
      throw std::invalid_argument("late_start references unknown node " +
                                  std::to_string(node));
    }
  }
  for (const auto& [node, period] : cfg.stop_at) {
    (void)period;
    if (node >= topo.node_count()) {
      throw std::invalid_argument("stop_at references unknown node " +
                                  std::to_string(node));
    }
  }
  return {window, static_cast<double>(cfg.periods) * t + window};
}

enum class EvKind : std::uint8_t { kTimer, kDelivery };

struct Event {
  double time;
  std::uint64_t seq;  // schedule order, the deterministic tie-break
  EvKind kind;
  NodeId node;        // firing node / receiving node
  std::uint32_t tx;   // transmission index for deliveries
};

struct LaterEvent {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

// Overlapping transmissions that kill `tx` at `receiver`: the receiver's own
// (half-duplex) and any from the receiver's one-hop neighborhood, including
// extra back-to-back transmissions of tx's own sender. `tx` itself (matched
// by sender and start) is skipped so callers may pass it along.
std::vector<NodeId> blocking_interferers(NodeId receiver,
                                         const Transmission& tx,
                                         std::span<const Transmission> others,
                                         const Topology& topo) {
  std::vector<NodeId> out;
  for (const Transmission& c : others) {
    if (!(c.start < tx.end && c.end > tx.start)) continue;
    if (c.sender == tx.sender && c.start == tx.start) continue;
    if (c.sender == receiver || c.sender == tx.sender ||
        topo.adjacent(receiver, c.sender)) {
      out.push_back(c.sender);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool collision_rule(NodeId receiver, const Transmission& tx,
                    std::span<const Transmission> concurrent,
                    const Topology& topo) {
  return blocking_interferers(receiver, tx, concurrent, topo).empty();
}

std::vector<double> draw_start_times(std::size_t node_count,
                                     const SimConfig& cfg) {
  double t = cfg.period_ms;
  double window = cfg.radio.start_window_ms == 0.0 ? t
                                                   : cfg.radio.start_window_ms;
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> starts(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    // Top 53 bits -> uniform double in [0, 1); bit-stable across platforms.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    starts[i] = u * window;
  }
  for (const auto& [node, period] : cfg.late_start) {
    if (node < node_count) {
      starts[node] += static_cast<double>(period) * t;
    }
  }
  return starts;
}

Trace run_simulation(const Topology& topo, const SimConfig& cfg) {
  auto starts = draw_start_times(topo.node_count(), cfg);
  return run_simulation_with_starts(topo, cfg, starts);
}

Trace run_simulation_with_starts(const Topology& topo, const SimConfig& cfg,
                                 std::span<const double> first_fire_times) {
  Validated v = validate(topo, cfg);
  std::size_t n = topo.node_count();
  if (first_fire_times.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " start times, got " +
                                std::to_string(first_fire_times.size()));
  }

  double t = cfg.period_ms;
  double air = cfg.radio.airtime_ms;

  std::vector<std::optional<double>> stop_time(n);
  for (const auto& [node, period] : cfg.stop_at) {
    stop_time[node] = static_cast<double>(period) * t + v.start_window;
  }

  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = first_fire_times[i];
    if (!(std::isfinite(s) && s >= 0.0)) {
      throw std::invalid_argument("start time of node " + std::to_string(i) +
                                  " must be finite and >= 0");
    }
    nodes.emplace_back(static_cast<NodeId>(i), t, cfg.flags, s);
  }

  Trace trace;
  trace.config = cfg;
  trace.config.radio.start_window_ms = v.start_window;
  trace.node_count = n;

  std::priority_queue<Event, std::vector<Event>, LaterEvent> queue;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId id = static_cast<NodeId>(i);
    if (stop_time[i] && first_fire_times[i] >= *stop_time[i]) continue;
    queue.push({first_fire_times[i], seq++, EvKind::kTimer, id, 0});
  }

  std::vector<Transmission> txs;
  std::vector<FiringMessage> payloads;
  std::vector<std::vector<double>> starts_by_node(n);
  std::vector<Transmission> candidates;  // delivery scratch, reused each event

  // Transmissions of `who` overlapping [from, to), appended to `out`.
  auto collect_overlaps = [&](NodeId who, double from, double to,
                              std::vector<Transmission>& out) {
    const auto& list = starts_by_node[who];
    auto it = std::upper_bound(list.begin(), list.end(), from - air);
    for (; it != list.end() && *it < to; ++it) {
      out.push_back({who, *it, *it + air});
    }
  };

  while (!queue.empty()) {
    Event ev = queue.top();
    if (ev.time >= v.end_time) break;
    queue.pop();

    if (ev.kind == EvKind::kTimer) {
      FiringOutcome out = nodes[ev.node].on_timer_fire(ev.time);
      trace.firings.push_back(
          {static_cast<std::int64_t>(std::floor(ev.time / t)), ev.node,
           ev.time, positive_mod(ev.time, t), out.force, out.adjustment});
      if (cfg.record_messages) {
        trace.messages.push_back({ev.time, ev.node, out.message.entries});
      }

      auto tx_index = static_cast<std::uint32_t>(txs.size());
      txs.push_back({ev.node, ev.time, ev.time + air});
      starts_by_node[ev.node].push_back(ev.time);
      payloads.push_back(std::move(out.message));
      for (NodeId peer : topo.one_hop(ev.node)) {
        queue.push({ev.time + air, seq++, EvKind::kDelivery, peer, tx_index});
      }

      // The radio is busy until ev.time + air; a refire requested inside that
      // window waits for the hardware. Keeps one transmission in flight per
      // node, which also bounds how many overlaps a delivery can ever see.
      double next_fire = std::max(out.next_timer_at, ev.time + air);
      if (!stop_time[ev.node] || next_fire < *stop_time[ev.node]) {
        queue.push({next_fire, seq++, EvKind::kTimer, ev.node, 0});
      }
    } else {
      const Transmission& tx = txs[ev.tx];
      candidates.clear();
      collect_overlaps(ev.node, tx.start, tx.end, candidates);
      for (NodeId peer : topo.one_hop(ev.node)) {
        collect_overlaps(peer, tx.start, tx.end, candidates);
      }
      auto interferers =
          blocking_interferers(ev.node, tx, candidates, topo);
      if (interferers.empty()) {
        nodes[ev.node].on_receive(payloads[ev.tx], ev.time);
        ++trace.delivered_count;
      } else {
        trace.collisions.push_back(
            {ev.time, ev.node, tx.sender, std::move(interferers)});
      }
    }
  }

  return trace;
}

}  // namespace mdwarf
