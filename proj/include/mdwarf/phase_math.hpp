#pragma once

#include <cstddef>
#include <span>

namespace mdwarf {

// Coupling coefficient regression constants, fitted at T = 1000 ms.
// K(n, T) = kCouplingC1 * n^(-kCouplingC2) * T / 1000.
inline constexpr double kCouplingC1 = 38.597;
inline constexpr double kCouplingC2 = 1.874;

// Wraps x into [0, period). Exact for exact inputs.
double positive_mod(double x, double period);

// Maps a relative phase in [0, T) onto the signed difference in (-T/2, T/2].
// Values up to and including T/2 stay as-is, larger ones wrap negative.
double wrap_phase_diff(double rel, double period);

// Repulsive force exerted by a neighbor at signed phase difference delta:
//   f = -1 / (delta / T)  for 0 < |delta| < T/2, exactly 0 at |delta| = T/2.
// A neighbor ahead (delta > 0) pushes backward (negative force). delta == 0
// is a contract violation (a co-phased neighbor cannot be heard).
double repulsive_force(double delta, double period);

// Plain force sum: wraps each relative phase and adds the repulsive forces.
// rel_phases must lie in (0, T).
double total_force_simple(std::span<const double> rel_phases, double period);

// Force sum with absorption. Only the nearest neighbor in each ring
// direction exerts its full force; every other entry contributes the
// difference between its absorber's force and its own, so stacked
// neighbors collapse toward a single effective push:
//   sort ascending; backward += 1/(sorted[0]/T); forward += 1/((T-last)/T);
//   interior entry > T/2: forward += f_fwd(next larger) - f_fwd(entry)
//   interior entry < T/2: backward += f_bwd(next smaller) - f_bwd(entry)
//   entries exactly at T/2 contribute nothing; result = forward - backward.
double total_force_absorbed(std::span<const double> rel_phases, double period);

// Coupling coefficient for a two-hop neighborhood of n nodes (incl. self).
double coupling_k(std::size_t n, double period);

// New phase after applying the aggregate force: (phase + k * force) mod T,
// normalized into [0, T).
double update_phase(double phase, double force, double k, double period);

}  // namespace mdwarf
