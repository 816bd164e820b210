// Compares the serial reference batch runner against the OpenMP one on the
// same workload and verifies they produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mdwarf/batch.hpp"
#include "mdwarf/topology.hpp"

using namespace mdwarf;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

bool identical(const std::vector<RunResult>& a,
               const std::vector<RunResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const auto& fa = a[r].trace.firings;
    const auto& fb = b[r].trace.firings;
    if (fa.size() != fb.size()) return false;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      if (fa[i].time_ms != fb[i].time_ms || fa[i].node != fb[i].node ||
          fa[i].phase_ms != fb[i].phase_ms) {
        return false;
      }
    }
    if (a[r].report.convergence_period != b[r].report.convergence_period) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string topo_spec = argc > 1 ? argv[1] : "complete:8";
  std::size_t runs = argc > 2 ? std::stoul(argv[2]) : 48;
  std::size_t periods = argc > 3 ? std::stoul(argv[3]) : 200;

  ExperimentConfig cfg;
  cfg.sim.flags = flags_for(Algorithm::kMDwarf);
  cfg.sim.periods = periods;
  cfg.sim.record_messages = false;
  cfg.runs = runs;
  cfg.seed_base = 1000;
  cfg.jobs = 0;  // all threads

  Topology topo = make_topology(topo_spec);

  std::printf("workload: %s, %zu runs x %zu periods (m-dwarf)\n",
              topo_spec.c_str(), runs, periods);

  double t0 = now_seconds();
  auto serial = run_batch_serial(topo, cfg);
  double serial_s = now_seconds() - t0;

  t0 = now_seconds();
  auto parallel = run_batch_parallel(topo, cfg);
  double parallel_s = now_seconds() - t0;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif

  std::printf("serial   : %8.3f s\n", serial_s);
  std::printf("parallel : %8.3f s  (%d threads)\n", parallel_s, threads);
  std::printf("speedup  : %8.2fx\n", serial_s / parallel_s);

  if (!identical(serial, parallel)) {
    std::printf("MISMATCH: parallel results differ from serial reference\n");
    return 1;
  }
  std::printf("results identical across both runners\n");
  return 0;
}
