// Batch experiment driver: runs seeded desynchronization simulations over a
// chosen topology and protocol, writing per-run CSV traces plus a summary.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdwarf/batch.hpp"
#include "mdwarf/csv_io.hpp"

namespace fs = std::filesystem;
using namespace mdwarf;

namespace {

std::pair<NodeId, std::size_t> parse_node_period(const std::string& s,
                                                 const std::string& flag) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError(flag, "expected NODE:PERIOD, got '" + s + "'");
  }
  try {
    unsigned long node = std::stoul(s.substr(0, colon));
    unsigned long period = std::stoul(s.substr(colon + 1));
    return {static_cast<NodeId>(node), static_cast<std::size_t>(period)};
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected NODE:PERIOD, got '" + s + "'");
  }
}

std::string run_dir_name(std::size_t run, std::size_t total) {
  int width = 3;
  for (std::size_t v = total; v > 1000; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run_%0*zu", width, run);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desynchronization protocol simulator (DESYNC, EXT-DESYNC, "
               "DWARF, M-DWARF)"};

  std::string algo = "m-dwarf";
  std::string topo_spec;
  std::string out_dir;
  ExperimentConfig cfg;
  cfg.sim.record_messages = true;
  std::vector<std::string> late_specs, stop_specs;
  std::optional<bool> relay_override, absorb_override;
  std::string rule_override;

  app.add_option("--algo", algo, "Protocol preset")
      ->check(CLI::IsMember({"desync", "ext-desync", "dwarf", "m-dwarf"}))
      ->capture_default_str();
  app.add_option("--topo", topo_spec,
                 "Topology: chain:N ring:N star:N complete:N grid:RxC "
                 "file:PATH")
      ->required();
  app.add_option("--period", cfg.sim.period_ms, "Firing period T in ms")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--periods", cfg.sim.periods, "Simulated periods per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--runs", cfg.runs, "Number of seeded runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", cfg.seed_base, "Base seed; run r uses seed+r")
      ->capture_default_str();
  app.add_option("--airtime", cfg.sim.radio.airtime_ms,
                 "Message airtime in ms (must stay below T/10)")
      ->capture_default_str();
  app.add_option("--start-window", cfg.sim.radio.start_window_ms,
                 "Initial firing window in ms (default: one period)");
  app.add_option("--alpha", cfg.sim.flags.alpha,
                 "Midpoint jump size for desync rules")
      ->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon_ms,
                 "Convergence threshold in ms (default: 0.02*T)");
  app.add_option("--window", cfg.window,
                 "Consecutive periods under epsilon to count as converged")
      ->capture_default_str();
  app.add_option("--late-start", late_specs,
                 "NODE:PERIOD, withhold a node's first firing (repeatable)");
  app.add_option("--stop", stop_specs,
                 "NODE:PERIOD, node stops firing at that period (repeatable)");
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--jobs", cfg.jobs,
                 "Concurrent runs (1 = serial, 0 = all hardware threads)")
      ->capture_default_str();
  auto* relay_flag = app.add_flag("--relay,!--no-relay",
                                  "Override preset relay behavior");
  auto* absorb_flag = app.add_flag("--absorb,!--no-absorb",
                                   "Override preset force absorption");
  app.add_option("--rule", rule_override, "Override preset adjustment rule")
      ->check(CLI::IsMember({"force-field", "midpoint"}));

  CLI11_PARSE(app, argc, argv);

  std::vector<fs::path> created;
  bool created_out_dir = false;
  try {
    Algorithm preset = algo == "desync"    ? Algorithm::kDesync
                       : algo == "ext-desync" ? Algorithm::kExtDesync
                       : algo == "dwarf"      ? Algorithm::kDwarf
                                              : Algorithm::kMDwarf;
    double alpha = cfg.sim.flags.alpha;
    cfg.sim.flags = flags_for(preset);
    cfg.sim.flags.alpha = alpha;
    if (relay_flag->count()) {
      cfg.sim.flags.relay = relay_flag->as<bool>();
    }
    if (absorb_flag->count()) {
      cfg.sim.flags.absorb = absorb_flag->as<bool>();
    }
    if (!rule_override.empty()) {
      cfg.sim.flags.rule = rule_override == "midpoint"
                               ? AdjustRule::kMidpoint
                               : AdjustRule::kForceField;
    }
    for (const auto& s : late_specs) {
      cfg.sim.late_start.push_back(parse_node_period(s, "--late-start"));
    }
    for (const auto& s : stop_specs) {
      cfg.sim.stop_at.push_back(parse_node_period(s, "--stop"));
    }

    Topology topo = make_topology(topo_spec);

    fs::path out(out_dir);
    if (!fs::exists(out)) {
      fs::create_directories(out);
      created_out_dir = true;
    }

    auto results = run_batch(topo, cfg);

    for (std::size_t r = 0; r < results.size(); ++r) {
      fs::path dir = out / run_dir_name(r, cfg.runs);
      fs::create_directories(dir);
      created.push_back(dir);
      write_firings_csv((dir / "firings.csv").string(), results[r].trace);
      write_metrics_csv((dir / "metrics.csv").string(), results[r].report);
      write_messages_csv((dir / "messages.csv").string(), results[r].trace);
      write_collisions_csv((dir / "collisions.csv").string(),
                           results[r].trace);
    }

    BatchSummary summary = summarize(results);
    fs::path summary_path = out / "summary.csv";
    created.push_back(summary_path);
    write_summary_csv(summary_path.string(), summary);

    std::cout << "runs=" << cfg.runs
              << " converged=" << summary.fraction_converged;
    if (summary.median_convergence_period) {
      std::cout << " median_convergence_period="
                << *summary.median_convergence_period;
    }
    std::cout << " median_final_max_err_ms="
              << summary.median_final_max_err_ms << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    // Leave no half-written experiment behind.
    std::error_code ec;
    if (created_out_dir) {
      fs::remove_all(out_dir, ec);
    } else {
      for (const auto& p : created) fs::remove_all(p, ec);
    }
    return 1;
  }
}
