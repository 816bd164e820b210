#include "mdwarf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mdwarf/phase_math.hpp"

namespace mdwarf {

namespace {

constexpr double kAbsent = std::numeric_limits<double>::quiet_NaN();

// Per-node error and gap-to-next for one snapshot; NaN phases are absent.
struct NodeFigures {
  std::vector<double> errors;  // aligned with present node order
  std::vector<double> widths;
};

NodeFigures snapshot_figures(std::span<const double> phases,
                             const Topology& topo, double period) {
  if (phases.size() != topo.node_count()) {
    throw std::invalid_argument("snapshot size does not match topology");
  }
  NodeFigures fig;
  for (NodeId i = 0; i < phases.size(); ++i) {
    if (std::isnan(phases[i])) continue;

    std::vector<NodeId> members{i};
    for (NodeId j : topo.one_hop(i)) {
      if (!std::isnan(phases[j])) members.push_back(j);
    }
    for (NodeId j : topo.two_hop(i)) {
      if (!std::isnan(phases[j])) members.push_back(j);
    }
    std::sort(members.begin(), members.end());

    if (members.size() <= 1) {
      fig.errors.push_back(0.0);
      fig.widths.push_back(period);
      continue;
    }

    // Slots needed by the contention set: members that cannot interfere
    // with one another (distance > 2) may share one, greedily packed.
    std::vector<std::vector<NodeId>> groups;
    for (NodeId v : members) {
      bool placed = false;
      for (auto& g : groups) {
        bool fits = std::none_of(g.begin(), g.end(), [&](NodeId u) {
          return topo.within_two_hops(u, v);
        });
        if (fits) {
          g.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({v});
    }
    double ideal = period / static_cast<double>(groups.size());

    double next_gap = std::numeric_limits<double>::infinity();
    for (NodeId j : members) {
      if (j == i) continue;
      next_gap = std::min(next_gap, positive_mod(phases[j] - phases[i],
                                                 period));
    }
    fig.errors.push_back(std::abs(next_gap - ideal));
    fig.widths.push_back(next_gap);
  }
  return fig;
}

}  // namespace

std::vector<std::vector<double>> phase_snapshots(const Trace& trace,
                                                 std::size_t periods) {
  double t = trace.config.period_ms;
  std::size_t n = trace.node_count;

  std::vector<double> stop_time(n, std::numeric_limits<double>::infinity());
  for (const auto& [node, period] : trace.config.stop_at) {
    stop_time[node] = static_cast<double>(period) * t +
                      trace.config.radio.start_window_ms;
  }

  std::vector<std::vector<double>> snaps(periods,
                                         std::vector<double>(n, kAbsent));
  // firings are time-ordered; sweep them once, carrying the latest phase.
  std::vector<double> current(n, kAbsent);
  std::size_t next_firing = 0;
  for (std::size_t p = 0; p < periods; ++p) {
    double snap_time = static_cast<double>(p + 1) * t;
    while (next_firing < trace.firings.size() &&
           trace.firings[next_firing].time_ms <= snap_time) {
      const auto& f = trace.firings[next_firing++];
      current[f.node] = f.phase_ms;
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool gone = snap_time >= stop_time[i];
      snaps[p][i] = gone ? kAbsent : current[i];
    }
  }
  return snaps;
}

SnapshotError desync_error(std::span<const double> phases,
                           const Topology& topo, double period) {
  NodeFigures fig = snapshot_figures(phases, topo, period);
  SnapshotError out;
  if (fig.errors.empty()) return out;
  double sum = 0.0;
  for (double e : fig.errors) {
    sum += e;
    out.max_err_ms = std::max(out.max_err_ms, e);
  }
  out.mean_err_ms = sum / static_cast<double>(fig.errors.size());
  return out;
}

std::optional<std::size_t> convergence_period(std::span<const double> max_errs,
                                              double epsilon,
                                              std::size_t window) {
  if (window == 0 || window > max_errs.size()) return std::nullopt;
  std::size_t run = 0;
  for (std::size_t p = 0; p < max_errs.size(); ++p) {
    run = max_errs[p] <= epsilon ? run + 1 : 0;
    if (run >= window) return p + 1 - window;
  }
  return std::nullopt;
}

double jain_fairness(std::span<const double> widths) {
  if (widths.empty()) {
    throw std::invalid_argument("jain_fairness: empty width list");
  }
  double sum = 0.0, sum_sq = 0.0;
  for (double w : widths) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("jain_fairness: widths must be >= 0");
    }
    sum += w;
    sum_sq += w * w;
  }
  if (sum_sq == 0.0) return 1.0;  // all zero: degenerate but equal
  return sum * sum / (static_cast<double>(widths.size()) * sum_sq);
}

MetricsReport compute_report(const Trace& trace, const Topology& topo,
                             double epsilon_ms, std::size_t window) {
  std::size_t periods = trace.config.periods;
  double t = trace.config.period_ms;
  auto snaps = phase_snapshots(trace, periods);

  std::vector<std::size_t> collisions(periods, 0);
  for (const auto& c : trace.collisions) {
    auto p = static_cast<std::size_t>(std::floor(c.time_ms / t));
    if (p < periods) ++collisions[p];
  }

  MetricsReport report;
  report.per_period.reserve(periods);
  std::vector<double> max_errs(periods);
  for (std::size_t p = 0; p < periods; ++p) {
    SnapshotError e = desync_error(snaps[p], topo, t);
    max_errs[p] = e.max_err_ms;
    report.per_period.push_back(
        {p, e.mean_err_ms, e.max_err_ms, collisions[p]});
  }
  report.convergence_period = convergence_period(max_errs, epsilon_ms, window);

  report.final_phases = snaps.empty() ? std::vector<double>{} : snaps.back();
  NodeFigures final_fig =
      snaps.empty() ? NodeFigures{}
                    : snapshot_figures(report.final_phases, topo, t);
  report.final_widths = final_fig.widths;
  report.fairness =
      final_fig.widths.empty() ? 0.0 : jain_fairness(final_fig.widths);
  return report;
}

double co_fire_fraction(const Trace& trace, NodeId a, NodeId b,
                        double within_ms, std::size_t last_periods) {
  std::size_t periods = trace.config.periods;
  std::size_t k = std::min(last_periods, periods);
  if (k == 0) return 0.0;
  std::int64_t first =
      static_cast<std::int64_t>(periods) - static_cast<std::int64_t>(k);

  std::vector<std::vector<double>> fires_a(k), fires_b(k);
  for (const auto& f : trace.firings) {
    if (f.period < first ||
        f.period >= static_cast<std::int64_t>(periods)) {
      continue;
    }
    auto slot = static_cast<std::size_t>(f.period - first);
    if (f.node == a) fires_a[slot].push_back(f.time_ms);
    if (f.node == b) fires_b[slot].push_back(f.time_ms);
  }

  std::size_t hits = 0;
  for (std::size_t p = 0; p < k; ++p) {
    bool hit = false;
    for (double ta : fires_a[p]) {
      for (double tb : fires_b[p]) {
        if (std::abs(ta - tb) < within_ms) {
          hit = true;
          break;
        }
      }
      if (hit) break;
    }
    hits += hit ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace mdwarf
