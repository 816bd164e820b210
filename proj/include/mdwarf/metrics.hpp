#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mdwarf/radio_sim.hpp"
#include "mdwarf/topology.hpp"

namespace mdwarf {

struct PeriodError {
  std::size_t period = 0;
  double mean_err_ms = 0.0;
  double max_err_ms = 0.0;
  std::size_t collisions = 0;  // lost deliveries during this period
};

struct MetricsReport {
  std::vector<PeriodError> per_period;                 // rows 0..periods-1
  std::optional<std::size_t> convergence_period;
  double fairness = 0.0;                               // Jain index, final period
  std::vector<double> final_phases;                    // snapshot at last period
  std::vector<double> final_widths;                    // gap-to-next per node
};

// Phase of every node at the end of each wall-clock period p (time (p+1)*T):
// the phase set by its latest firing at or before that instant. NaN when the
// node has not fired yet (late start) or is past its stop period.
std::vector<std::vector<double>> phase_snapshots(const Trace& trace,
                                                 std::size_t periods);

// Local desynchronization error of one snapshot. For each present node i the
// contention set C_i is {i} + one-hop + two-hop (present only); the required
// group count N_i comes from greedily packing members that are mutually
// outside each other's interference range into shared slots. The node error
// is |gap to its next-firing member of C_i - T/N_i|. Returns (mean, max)
// over present nodes; nodes with no present contenders contribute 0.
struct SnapshotError {
  double mean_err_ms = 0.0;
  double max_err_ms = 0.0;
};
SnapshotError desync_error(std::span<const double> phases,
                           const Topology& topo, double period);

// Smallest p such that max_err(q) <= epsilon for all q in [p, p+window);
// nullopt when no such window exists in the series.
std::optional<std::size_t> convergence_period(std::span<const double> max_errs,
                                              double epsilon,
                                              std::size_t window);

// Jain fairness index (sum w)^2 / (n * sum w^2); 1.0 means equal widths.
double jain_fairness(std::span<const double> widths);

MetricsReport compute_report(const Trace& trace, const Topology& topo,
                             double epsilon_ms, std::size_t window);

// Fraction of the last `last_periods` periods in which nodes a and b both
// fire within `within_ms` of each other at least once (collision proximity).
double co_fire_fraction(const Trace& trace, NodeId a, NodeId b,
                        double within_ms, std::size_t last_periods);

}  // namespace mdwarf
