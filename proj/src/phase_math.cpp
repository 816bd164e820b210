#include "mdwarf/phase_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdwarf {

namespace {

void require_period(double period) {
  if (!(std::isfinite(period) && period > 0.0)) {
    throw std::invalid_argument("period must be finite and > 0, got " +
                                std::to_string(period));
  }
}

// Forward push from a neighbor that fired (period - rel) ago, i.e. sits
// behind the node on the ring.
double fwd_of_behind(double rel, double period) {
  return 1.0 / ((period - rel) / period);
}

// Backward push from a neighbor that will fire rel from now, i.e. sits
// ahead of the node on the ring.
double bwd_of_ahead(double rel, double period) {
  return 1.0 / (rel / period);
}

}  // namespace

double positive_mod(double x, double period) {
  require_period(period);
  if (!std::isfinite(x)) {
    throw std::invalid_argument("positive_mod: non-finite input");
  }
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  // fmod can land exactly on period after the correction when x is a tiny
  // negative value; fold that back to 0.
  if (r >= period) r -= period;
  return r;
}

double wrap_phase_diff(double rel, double period) {
  require_period(period);
  if (!(rel >= 0.0 && rel < period)) {
    throw std::invalid_argument("wrap_phase_diff: rel " + std::to_string(rel) +
                                " outside [0, " + std::to_string(period) + ")");
  }
  return rel <= period / 2.0 ? rel : rel - period;
}

double repulsive_force(double delta, double period) {
  require_period(period);
  double half = period / 2.0;
  if (!(delta >= -half && delta <= half)) {
    throw std::invalid_argument("repulsive_force: delta " +
                                std::to_string(delta) +
                                " outside [-T/2, T/2]");
  }
  if (delta == 0.0) {
    throw std::invalid_argument(
        "repulsive_force: zero phase difference has no defined force");
  }
  // Opposite nodes balance out: no push at exactly half a period.
  if (delta == half || delta == -half) return 0.0;
  return -1.0 / (delta / period);
}

double total_force_simple(std::span<const double> rel_phases, double period) {
  require_period(period);
  double total = 0.0;
  for (double rel : rel_phases) {
    if (!(rel > 0.0 && rel < period)) {
      throw std::invalid_argument("total_force_simple: rel phase " +
                                  std::to_string(rel) + " outside (0, T)");
    }
    total += repulsive_force(wrap_phase_diff(rel, period), period);
  }
  return total;
}

double total_force_absorbed(std::span<const double> rel_phases,
                            double period) {
  require_period(period);
  if (rel_phases.empty()) return 0.0;

  std::vector<double> sorted(rel_phases.begin(), rel_phases.end());
  for (double rel : sorted) {
    if (!(rel > 0.0 && rel < period)) {
      throw std::invalid_argument("total_force_absorbed: rel phase " +
                                  std::to_string(rel) + " outside (0, T)");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  double half = period / 2.0;
  auto at_half = [half](double rel) { return rel == half; };

  // Nearest neighbor in each ring direction pushes with full force. A lone
  // entry plays both roles; exactly-opposite entries stay silent.
  double forward = 0.0;
  double backward = 0.0;
  std::size_t last = sorted.size() - 1;
  if (!at_half(sorted[0])) backward = bwd_of_ahead(sorted[0], period);
  if (!at_half(sorted[last])) forward = fwd_of_behind(sorted[last], period);

  // Interior entries are shadowed by the adjacent entry closer to the node:
  // their contribution is the absorber's force minus their own, which
  // vanishes when the two coincide.
  for (std::size_t i = 1; i < last; ++i) {
    double rel = sorted[i];
    if (at_half(rel)) continue;
    if (rel > half) {
      forward += fwd_of_behind(sorted[i + 1], period) -
                 fwd_of_behind(rel, period);
    } else {
      backward += bwd_of_ahead(sorted[i - 1], period) -
                  bwd_of_ahead(rel, period);
    }
  }
  return forward - backward;
}

double coupling_k(std::size_t n, double period) {
  require_period(period);
  if (n == 0) {
    throw std::invalid_argument("coupling_k: neighborhood size must be >= 1");
  }
  return kCouplingC1 * std::pow(static_cast<double>(n), -kCouplingC2) *
         (period / 1000.0);
}

double update_phase(double phase, double force, double k, double period) {
  require_period(period);
  if (!std::isfinite(phase) || !std::isfinite(force) || !std::isfinite(k)) {
    throw std::invalid_argument("update_phase: non-finite input");
  }
  return positive_mod(phase + k * force, period);
}

}  // namespace mdwarf
