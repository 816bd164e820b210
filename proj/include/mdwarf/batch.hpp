#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdwarf/metrics.hpp"
#include "mdwarf/radio_sim.hpp"
#include "mdwarf/topology.hpp"

namespace mdwarf {

struct ExperimentConfig {
  SimConfig sim;                 // seed field is overwritten per run
  std::size_t runs = 100;
  std::uint64_t seed_base = 42;
  double epsilon_ms = 0.0;       // 0 means "use 0.02 * T"
  std::size_t window = 10;
  int jobs = 1;                  // <= 0: all hardware threads
  // Traces can dwarf the metrics by orders of magnitude on long batches;
  // drop them after the per-run report when only the report is needed.
  bool keep_traces = true;
};

struct RunResult {
  std::uint64_t seed = 0;
  Trace trace;                   // empty when keep_traces is off
  MetricsReport report;
  std::size_t total_collisions = 0;  // survives even when the trace is gone
};

struct RunSummaryRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::optional<std::size_t> convergence_period;
  double final_mean_err_ms = 0.0;
  double final_max_err_ms = 0.0;
  double fairness = 0.0;
  std::size_t total_collisions = 0;
};

struct BatchSummary {
  std::vector<RunSummaryRow> rows;
  double fraction_converged = 0.0;
  std::optional<double> median_convergence_period;  // over converged runs
  double median_final_max_err_ms = 0.0;
};

double effective_epsilon(const ExperimentConfig& cfg);

// Runs `cfg.runs` simulations with seeds seed_base..seed_base+runs-1. The
// serial form is the reference implementation; the parallel form distributes
// runs over OpenMP threads and must produce identical results (each run is
// fully independent and lands in its own slot).
std::vector<RunResult> run_batch_serial(const Topology& topo,
                                        const ExperimentConfig& cfg);
std::vector<RunResult> run_batch_parallel(const Topology& topo,
                                          const ExperimentConfig& cfg);
// Dispatches on cfg.jobs (1 -> serial).
std::vector<RunResult> run_batch(const Topology& topo,
                                 const ExperimentConfig& cfg);

BatchSummary summarize(const std::vector<RunResult>& results);

// Per-run rows plus a trailing "aggregate" row (fraction converged, median
// convergence period, median errors, summed collisions).
void write_summary_csv(const std::string& path, const BatchSummary& summary);

}  // namespace mdwarf
