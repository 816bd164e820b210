#include "mdwarf/batch.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mdwarf {

namespace {

RunResult execute_run(const Topology& topo, const ExperimentConfig& cfg,
                      std::size_t run_index) {
  SimConfig sim = cfg.sim;
  sim.seed = cfg.seed_base + run_index;
  RunResult result;
  result.seed = sim.seed;
  result.trace = run_simulation(topo, sim);
  result.report = compute_report(result.trace, topo, effective_epsilon(cfg),
                                 cfg.window);
  result.total_collisions = result.trace.collisions.size();
  if (!cfg.keep_traces) result.trace = Trace{};
  return result;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 ? values[n / 2]
               : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

double effective_epsilon(const ExperimentConfig& cfg) {
  return cfg.epsilon_ms > 0.0 ? cfg.epsilon_ms : 0.02 * cfg.sim.period_ms;
}

std::vector<RunResult> run_batch_serial(const Topology& topo,
                                        const ExperimentConfig& cfg) {
  std::vector<RunResult> results(cfg.runs);
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    results[r] = execute_run(topo, cfg, r);
  }
  return results;
}

std::vector<RunResult> run_batch_parallel(const Topology& topo,
                                          const ExperimentConfig& cfg) {
#ifdef _OPENMP
  std::vector<RunResult> results(cfg.runs);
  int jobs = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
  // Runs are fully independent and each writes only its own slot, so the
  // result is identical to the serial loop regardless of scheduling.
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    try {
      results[r] = execute_run(topo, cfg, r);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
#else
  return run_batch_serial(topo, cfg);
#endif
}

std::vector<RunResult> run_batch(const Topology& topo,
                                 const ExperimentConfig& cfg) {
  if (cfg.jobs == 1) return run_batch_serial(topo, cfg);
  return run_batch_parallel(topo, cfg);
}

BatchSummary summarize(const std::vector<RunResult>& results) {
  BatchSummary summary;
  std::vector<double> conv_periods;
  std::vector<double> final_max_errs;
  std::size_t converged = 0;

  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& res = results[r];
    RunSummaryRow row;
    row.run = r;
    row.seed = res.seed;
    row.convergence_period = res.report.convergence_period;
    row.converged = row.convergence_period.has_value();
    if (!res.report.per_period.empty()) {
      row.final_mean_err_ms = res.report.per_period.back().mean_err_ms;
      row.final_max_err_ms = res.report.per_period.back().max_err_ms;
    }
    row.fairness = res.report.fairness;
    row.total_collisions = res.total_collisions;
    summary.rows.push_back(row);

    final_max_errs.push_back(row.final_max_err_ms);
    if (row.converged) {
      ++converged;
      conv_periods.push_back(static_cast<double>(*row.convergence_period));
    }
  }

  if (!results.empty()) {
    summary.fraction_converged =
        static_cast<double>(converged) / static_cast<double>(results.size());
  }
  if (!conv_periods.empty()) {
    summary.median_convergence_period = median(conv_periods);
  }
  summary.median_final_max_err_ms = median(final_max_errs);
  return summary;
}

void write_summary_csv(const std::string& path, const BatchSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << std::fixed << std::setprecision(6);
  out << "run,seed,converged,convergence_period,final_mean_err_ms,"
         "final_max_err_ms,fairness,total_collisions\n";
  std::size_t total_collisions = 0;
  std::vector<double> fairness_values;
  for (const auto& row : summary.rows) {
    out << row.run << ',' << row.seed << ',' << (row.converged ? 1 : 0)
        << ',';
    if (row.convergence_period) out << *row.convergence_period;
    out << ',' << row.final_mean_err_ms << ',' << row.final_max_err_ms << ','
        << row.fairness << ',' << row.total_collisions << '\n';
    fairness_values.push_back(row.fairness);
    total_collisions += row.total_collisions;
  }
  out << "aggregate,," << summary.fraction_converged << ',';
  if (summary.median_convergence_period) {
    out << *summary.median_convergence_period;
  }
  out << ",," << summary.median_final_max_err_ms << ','
      << median(fairness_values) << ',' << total_collisions << '\n';
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path + "' failed");
  }
}

}  // namespace mdwarf
