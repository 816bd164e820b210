#include "mdwarf/node.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mdwarf/phase_math.hpp"

namespace mdwarf {

ProtocolFlags flags_for(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDesync:
      return {.relay = false, .absorb = false, .rule = AdjustRule::kMidpoint};
    case Algorithm::kExtDesync:
      return {.relay = true, .absorb = false, .rule = AdjustRule::kMidpoint};
    case Algorithm::kDwarf:
      return {.relay = false, .absorb = false, .rule = AdjustRule::kForceField};
    case Algorithm::kMDwarf:
      return {.relay = true, .absorb = true, .rule = AdjustRule::kForceField};
  }
  throw std::invalid_argument("unknown algorithm");
}

const char* algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDesync: return "desync";
    case Algorithm::kExtDesync: return "ext-desync";
    case Algorithm::kDwarf: return "dwarf";
    case Algorithm::kMDwarf: return "m-dwarf";
  }
  return "?";
}

double midpoint_phase(double phi, std::span<const double> offsets,
                      double alpha, double period) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("midpoint alpha must be in [0, 1]");
  }
  if (offsets.empty()) return positive_mod(phi, period);

  double shift;
  if (offsets.size() == 1) {
    // A lone neighbor is both predecessor and successor: head for the
    // antipode so the pair splits the period evenly.
    shift = offsets[0] - period / 2.0;
  } else {
    auto [lo, hi] = std::minmax_element(offsets.begin(), offsets.end());
    // next neighbor fires *lo from now, previous fired (period - *hi) ago;
    // the midpoint of the arc between them, seen from the node, is their
    // signed half-sum.
    shift = (*lo + *hi - period) / 2.0;
  }
  return positive_mod(phi + alpha * shift, period);
}

Node::Node(NodeId id, double period, ProtocolFlags flags,
           double first_timer_at)
    : id_(id), period_(period), flags_(flags),
      last_firing_(first_timer_at - period) {
  if (!(std::isfinite(period) && period > 0.0)) {
    throw std::invalid_argument("node period must be finite and > 0");
  }
}

double Node::rel_phase_of(NodeId other, double now) const {
  auto it = buffer_.find(other);
  if (it == buffer_.end()) {
    throw std::out_of_range("node " + std::to_string(id_) +
                            " has no record of node " + std::to_string(other));
  }
  return positive_mod(it->second.observed_at - now, period_);
}

std::int64_t Node::period_index(double t) const {
  return static_cast<std::int64_t>(std::floor(t / period_));
}

void Node::purge_expired(std::int64_t current_period) {
  for (auto it = buffer_.begin(); it != buffer_.end();) {
    if (current_period - it->second.last_updated >= 2) {
      it = buffer_.erase(it);
    } else {
      ++it;
    }
  }
}

FiringOutcome Node::on_timer_fire(double now) {
  purge_expired(period_index(now));
  n_ = 1 + buffer_.size();

  FiringOutcome out;
  out.message.sender = id_;
  std::vector<double> offsets;
  offsets.reserve(buffer_.size());
  for (const auto& [other, rec] : buffer_) {
    double rel = positive_mod(rec.observed_at - now, period_);
    // A zero offset would be a node firing exactly with us; it exerts no
    // usable push and the force domain excludes it.
    if (rel > 0.0) offsets.push_back(rel);
    if (flags_.relay && rec.hop == HopKind::kOneHop) {
      out.message.entries.emplace_back(other, rel);
    }
  }

  if (repositioned_) {
    // This firing is the one the previous adjustment moved forward; it only
    // announces the new phase. Re-deriving another jump from the same
    // observations would compound the correction several times per period,
    // which overshoots and can lock uneven spacings into a steady drift.
    repositioned_ = false;
    out.force = 0.0;
    out.adjustment = 0.0;
    out.next_timer_at = now + period_;
    last_firing_ = now;
    return out;
  }

  double phi = positive_mod(now, period_);
  double new_phase;
  if (flags_.rule == AdjustRule::kForceField) {
    out.force = flags_.absorb ? total_force_absorbed(offsets, period_)
                              : total_force_simple(offsets, period_);
    new_phase = update_phase(phi, out.force, coupling_k(n_, period_), period_);
  } else {
    out.force = 0.0;
    new_phase = midpoint_phase(phi, offsets, flags_.alpha, period_);
  }

  out.adjustment = positive_mod(new_phase - phi, period_);
  // Timer resolution floor: a force sum that cancels mathematically can
  // leave ~1e-15 of float dust, and a node sitting at phase exactly 0 has
  // no ulp slack to absorb it. Scheduling a refire a femtosecond ahead is
  // physically meaningless and would needlessly break exact fixed points,
  // so adjustments within a sub-picosecond band of "stay put" (on either
  // side) collapse to zero.
  double resolution = period_ * 1e-12;
  if (out.adjustment < resolution ||
      out.adjustment > period_ - resolution) {
    out.adjustment = 0.0;
  }
  out.next_timer_at = now + (out.adjustment == 0.0 ? period_ : out.adjustment);
  // An adjustment up to T/2 moves this period's firing later (it lands before
  // the period is out); anything larger is a backward move whose timer
  // already spans most of a period, i.e. the next firing is a regular one.
  repositioned_ = out.adjustment > 0.0 && out.adjustment <= period_ / 2.0;

  last_firing_ = now;
  return out;
}

void Node::on_receive(const FiringMessage& msg, double now) {
  if (msg.sender == id_) return;  // own broadcast, nothing to learn

  std::int64_t period_now = period_index(now);
  buffer_[msg.sender] =
      NeighborRecord{.observed_at = now, .hop = HopKind::kOneHop,
                     .last_updated = period_now};
  if (!flags_.relay) return;

  for (const auto& [far, rel] : msg.entries) {
    if (far == id_) continue;  // that's us, we know our own phase
    auto it = buffer_.find(far);
    if (it != buffer_.end() && it->second.hop == HopKind::kOneHop &&
        it->second.last_updated == period_now) {
      continue;  // a direct observation from this period outranks the relay
    }
    // The sender fired `now` (reception ~ its firing) and heard `far` fire
    // `rel` after its own previous firing one period earlier.
    buffer_[far] = NeighborRecord{.observed_at = now + rel - period_,
                                  .hop = HopKind::kTwoHopRelayed,
                                  .last_updated = period_now};
  }
}

}  // namespace mdwarf
