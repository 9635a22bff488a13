#pragma once

#include "berry/loop.hpp"

namespace berry {

// Sign convention, used consistently across the library: the Berry phase of
// a closed loop is
//
//     gamma = Im sum_s log < v_j(t_s) | v_j(t_{s+1}) >
//
// over the discretized loop. With this sign the equatorial XY qubit
// transported through phi: 0 -> pi acquires +pi, and a generic single-mode
// qubit acquires pi (1 - cos theta_k). The ground band of B.sigma around a
// colatitude-theta0 circle acquires -pi (1 - cos theta0) mod 2 pi.
struct BerryPhaseResult {
  double principal = 0.0;   // in (-pi, pi]
  double unwrapped = 0.0;   // accumulated segment-wise; principal mod 2 pi
  int segments_used = 0;
  double refinement_error = 0.0;  // mod-2pi distance between K and 2K result
};

struct WilsonOptions {
  double tol = 1e-9;            // refinement stop: |gamma_2K - gamma_K| < tol
  int initial_segments = 64;
  int max_segments = 1 << 20;
  // A band is "isolated" when its gap exceeds this times max |E|.
  double gap_threshold_rel = 1e-10;
  double eigen_tol = 1e-10;
};

// Discretized Wilson-loop phase (sum of per-segment overlap arguments) at a
// fixed sampling. Gauge-invariant mod 2 pi. Throws DegeneracyError if band j
// loses isolation at any sampled point.
double discrete_loop_phase(const HamiltonianFamily& family,
                           const LoopPath& path, int band,
                           const WilsonOptions& opts = {});

// Wilson-loop phase with segment doubling from opts.initial_segments until
// the mod-2pi change per doubling drops below opts.tol. Throws
// ConvergenceError if max_segments is reached first.
BerryPhaseResult wilson_loop_phase(const HamiltonianFamily& family,
                                   const Loop& loop, int band,
                                   const WilsonOptions& opts = {});

// Maps an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace berry
