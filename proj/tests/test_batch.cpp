#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "mdwarf/batch.hpp"
#include "mdwarf/metrics.hpp"
#include "mdwarf/topology.hpp"

using namespace mdwarf;
using doctest::Approx;

namespace {

ExperimentConfig small_batch(Algorithm algo, std::size_t runs) {
  ExperimentConfig cfg;
  cfg.sim.flags = flags_for(algo);
  cfg.sim.periods = 30;
  cfg.sim.record_messages = false;
  cfg.runs = runs;
  cfg.seed_base = 100;
  cfg.window = 5;
  return cfg;
}

void check_identical(const std::vector<RunResult>& a,
                     const std::vector<RunResult>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].seed == b[r].seed);
    REQUIRE(a[r].trace.firings.size() == b[r].trace.firings.size());
    for (std::size_t i = 0; i < a[r].trace.firings.size(); ++i) {
      CHECK(a[r].trace.firings[i].time_ms == b[r].trace.firings[i].time_ms);
      CHECK(a[r].trace.firings[i].node == b[r].trace.firings[i].node);
      CHECK(a[r].trace.firings[i].phase_ms == b[r].trace.firings[i].phase_ms);
    }
    CHECK(a[r].trace.collisions.size() == b[r].trace.collisions.size());
    CHECK(a[r].trace.delivered_count == b[r].trace.delivered_count);
    CHECK(a[r].report.convergence_period == b[r].report.convergence_period);
    CHECK(a[r].report.fairness == b[r].report.fairness);
  }
}

}  // namespace

TEST_CASE("effective epsilon defaults to two percent of the period") {
  ExperimentConfig cfg;
  cfg.sim.period_ms = 1000.0;
  CHECK(effective_epsilon(cfg) == Approx(20.0));
  cfg.epsilon_ms = 5.0;
  CHECK(effective_epsilon(cfg) == Approx(5.0));
  cfg.epsilon_ms = 0.0;
  cfg.sim.period_ms = 500.0;
  CHECK(effective_epsilon(cfg) == Approx(10.0));
}

TEST_CASE("parallel batches reproduce the serial reference bit for bit") {
  Topology topo = gen_complete(3);
  ExperimentConfig cfg = small_batch(Algorithm::kMDwarf, 8);
  auto serial = run_batch_serial(topo, cfg);

  cfg.jobs = 4;
  auto parallel = run_batch_parallel(topo, cfg);
  check_identical(serial, parallel);

  cfg.jobs = 0;  // all threads
  auto all_threads = run_batch_parallel(topo, cfg);
  check_identical(serial, all_threads);
}

TEST_CASE("run_batch dispatches by job count") {
  Topology topo = gen_chain(3);
  ExperimentConfig cfg = small_batch(Algorithm::kExtDesync, 4);
  cfg.jobs = 1;
  auto one = run_batch(topo, cfg);
  cfg.jobs = 3;
  auto three = run_batch(topo, cfg);
  check_identical(one, three);

  for (std::size_t r = 0; r < one.size(); ++r) {
    CHECK(one[r].seed == cfg.seed_base + r);
  }
}

TEST_CASE("parallel batches propagate configuration errors") {
  Topology topo = gen_complete(2);
  ExperimentConfig cfg = small_batch(Algorithm::kDwarf, 4);
  cfg.sim.periods = 0;
  cfg.jobs = 2;
  CHECK_THROWS_AS(run_batch_parallel(topo, cfg), std::invalid_argument);
}

TEST_CASE("dropping traces keeps the reports and collision totals") {
  Topology topo = gen_complete(3);
  ExperimentConfig cfg = small_batch(Algorithm::kMDwarf, 4);
  auto kept = run_batch(topo, cfg);
  cfg.keep_traces = false;
  auto dropped = run_batch(topo, cfg);
  REQUIRE(kept.size() == dropped.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    CHECK(dropped[r].trace.firings.empty());
    CHECK(dropped[r].total_collisions == kept[r].trace.collisions.size());
    CHECK(dropped[r].report.convergence_period ==
          kept[r].report.convergence_period);
    REQUIRE_FALSE(dropped[r].report.per_period.empty());
    CHECK(dropped[r].report.per_period.back().max_err_ms ==
          kept[r].report.per_period.back().max_err_ms);
  }
}

TEST_CASE("summary statistics over handcrafted results") {
  RunResult good;
  good.seed = 42;
  good.report.convergence_period = 10;
  good.report.per_period.push_back({29, 1.0, 2.0, 0});
  good.report.fairness = 0.9;
  good.total_collisions = 5;

  RunResult bad;
  bad.seed = 43;
  bad.report.per_period.push_back({29, 3.0, 30.0, 0});
  bad.report.fairness = 0.5;
  bad.total_collisions = 7;

  BatchSummary s = summarize({good, bad});
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].converged);
  CHECK_FALSE(s.rows[1].converged);
  CHECK(s.fraction_converged == Approx(0.5));
  REQUIRE(s.median_convergence_period.has_value());
  CHECK(*s.median_convergence_period == Approx(10.0));
  CHECK(s.median_final_max_err_ms == Approx(16.0));

  BatchSummary none = summarize({bad});
  CHECK(none.fraction_converged == 0.0);
  CHECK_FALSE(none.median_convergence_period.has_value());

  BatchSummary empty = summarize({});
  CHECK(empty.rows.empty());
  CHECK(empty.fraction_converged == 0.0);
}

TEST_CASE("summary csv layout") {
  RunResult good;
  good.seed = 42;
  good.report.convergence_period = 10;
  good.report.per_period.push_back({29, 1.0, 2.0, 0});
  good.report.fairness = 0.9;
  good.total_collisions = 5;

  RunResult bad;
  bad.seed = 43;
  bad.report.per_period.push_back({29, 3.0, 30.0, 0});
  bad.report.fairness = 0.5;
  bad.total_collisions = 7;

  BatchSummary s = summarize({good, bad});
  auto path = std::filesystem::temp_directory_path() / "mdwarf_summary.csv";
  write_summary_csv(path.string(), s);

  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() ==
        "run,seed,converged,convergence_period,final_mean_err_ms,"
        "final_max_err_ms,fairness,total_collisions\n"
        "0,42,1,10,1.000000,2.000000,0.900000,5\n"
        "1,43,0,,3.000000,30.000000,0.500000,7\n"
        "aggregate,,0.500000,10.000000,,16.000000,0.700000,12\n");

  CHECK_THROWS_AS(write_summary_csv("/nonexistent_dir_zz/s.csv", s),
                  std::runtime_error);
}

TEST_CASE("late starters stay absent from snapshots until they join") {
  Topology topo = gen_complete(2);
  ExperimentConfig cfg = small_batch(Algorithm::kMDwarf, 1);
  cfg.sim.periods = 12;
  cfg.sim.late_start = {{1, 5}};
  auto results = run_batch_serial(topo, cfg);
  REQUIRE(results.size() == 1);

  auto snaps = phase_snapshots(results[0].trace, cfg.sim.periods);
  for (std::size_t p = 0; p <= 3; ++p) {
    CHECK(std::isnan(snaps[p][1]));
    CHECK_FALSE(std::isnan(snaps[p][0]));
  }
  CHECK_FALSE(std::isnan(snaps[6][1]));
  CHECK_FALSE(std::isnan(snaps[11][1]));
}
