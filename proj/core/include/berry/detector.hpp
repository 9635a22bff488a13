#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "berry/curvature.hpp"
#include "berry/xy_model.hpp"

namespace berry {

// A shrinking family of loops Gamma_r with limit point lambda_0. radii must
// be strictly decreasing; generator(r) must stay within radii[r] of the
// limit point.
struct LoopSequence {
  ParameterPoint limit_point;
  std::function<Loop(int)> generator;  // r = 0 .. radii.size() - 1
  std::vector<double> radii;

  // Circles of the given radii around `center` in the (axis_u, axis_v)
  // coordinate plane.
  static LoopSequence shrinking_circles(ParameterPoint center,
                                        std::vector<double> radii, int axis_u,
                                        int axis_v);
};

enum class SequenceClass { Contractible, NonContractible, Inconclusive };

std::string to_string(SequenceClass c);

struct SequenceVerdict {
  std::vector<double> phases;  // principal values, as classified
  double fitted_limit = 0.0;   // tail constant, in (-pi, pi]
  double tail_spread = 0.0;
  SequenceClass classification = SequenceClass::Inconclusive;
  double tolerance = 0.0;
};

struct DetectorOptions {
  // Non-contractibility calls need |fitted_limit| > phase_tol with the tail
  // settled to within spread_tol; a non-settled tail is inconclusive.
  double phase_tol = 0.1;
  double spread_tol = 0.02;
  double tail_fraction = 0.5;
  WilsonOptions wilson;
};

// Wilson-loop phase for every Gamma_r, in order. A degeneracy on some loop
// is reported with its index r in the error message.
std::vector<BerryPhaseResult> phase_sequence(const HamiltonianFamily& family,
                                             const LoopSequence& seq, int band,
                                             const WilsonOptions& opts = {});

// Non-contractibility verdict from a phase sequence (>= 4 entries). Phases
// are reduced to (-pi, pi]; the tail (last tail_fraction of entries) is fit
// to a constant.
SequenceVerdict classify_sequence(const std::vector<double>& phases,
                                  double phase_tol = 0.1,
                                  double tail_fraction = 0.5,
                                  double spread_tol = 0.02);

// Least-squares slope of log |phase| vs log radius; ~2 for a smooth
// (contractible) flux-through-area sequence.
double area_scaling_slope(const std::vector<double>& phases,
                          const std::vector<double>& radii);

// A closed surface represented as a sweep of loops: loop_at(0) and
// loop_at(1) are point-like, intermediate values span the surface.
struct SurfaceLoopFamily {
  std::function<Loop(double)> loop_at;  // s in [0, 1]
  int loop_count = 33;

  // Colatitude sweep of the sphere |p - center| = radius in a 3d manifold.
  static SurfaceLoopFamily sphere(ParameterPoint center, double radius,
                                  int loop_count = 33);
  // Boundary of the box [lo, hi] (3d), swept bottom face -> walls -> top
  // face by rectangles.
  static SurfaceLoopFamily box(ParameterPoint lo, ParameterPoint hi,
                               int loop_count = 33);
};

enum class SurfaceClass { PhaseRotating, PhasePreserving };

std::string to_string(SurfaceClass c);

struct WindingReport {
  std::vector<double> phases;  // unwrapped trace gamma(s), gamma(0) = 0
  int winding = 0;             // l = gamma(1) / 2 pi
  SurfaceClass classification = SurfaceClass::PhasePreserving;
};

// Unwraps the phase trace across the sweep (adjacent jumps must stay below
// pi, else UnwrapError) and reports the integer winding l. The final phase
// must land within 0.05 * 2 pi of an integer multiple of 2 pi.
WindingReport surface_winding(const HamiltonianFamily& family,
                              const SurfaceLoopFamily& surface, int band,
                              const WilsonOptions& opts = {});

struct BisectionStep {
  int depth = 0;
  int axis = 0;
  double cut = 0.0;
  int kept_half = 0;  // 0 = lower, 1 = upper
  int winding = 0;    // winding of the kept half's surface
  bool both_rotating = false;
};

struct BisectionReport {
  ParameterPoint located_point;
  double box_diameter = 0.0;  // max side length of the final box
  int depth = 0;
  int initial_winding = 0;
  std::vector<BisectionStep> steps;
  // Boxes dropped while both halves were phase-rotating (possible with
  // several degeneracies); kept as candidate regions for the caller.
  std::vector<std::pair<ParameterPoint, ParameterPoint>> extra_candidates;
};

struct BisectionOptions {
  double stop_diameter = 1e-4;
  int surface_loops = 33;
  WilsonOptions wilson{.tol = 1e-3};
  // Cut-plane dither fractions tried in order when a cut surface hits a
  // degeneracy or fails to unwrap.
  std::vector<double> dither = {0.0, 0.02, -0.02, 0.05, -0.05, 0.11, -0.11};
};

// Stone's successive bisection of a 3d box whose boundary is phase-rotating.
// Throws DegeneracyError("initial surface is phase-preserving") when the
// initial box does not enclose a degeneracy.
BisectionReport stone_bisection(const HamiltonianFamily& family,
                                ParameterPoint lo, ParameterPoint hi, int band,
                                const BisectionOptions& opts = {});

// The (M, gamma) table of XY-chain phases at fixed lambda, exposing the two
// iterated limits: at fixed M every phi_k -> {0, 2 pi} as gamma -> 0, while
// the equatorial-mode phase stays pi for every gamma > 0 once M -> infinity.
struct ScalingSeries {
  double lambda = 0.0;
  std::vector<int> M_values;
  std::vector<double> gamma_values;
  // Row-major [M index][gamma index].
  std::vector<double> phi_total;
  std::vector<double> phi_intensive;
  // Equatorial-mode phase; empty when lambda is outside (-1, 1).
  std::vector<double> phi_equatorial;

  int index(int mi, int gi) const {
    return mi * static_cast<int>(gamma_values.size()) + gi;
  }
  bool has_equatorial() const { return !phi_equatorial.empty(); }
};

// Schedules must be strictly monotone. Exact-degeneracy hits propagate
// UndefinedAngleError (scan drivers dither lambda, not this function).
ScalingSeries xy_order_of_limits(double lambda,
                                 const std::vector<double>& gamma_schedule,
                                 const std::vector<int>& M_schedule);

// phi(M) / M^exponent (default exponent 1).
double intensive_phase(double lambda, double gamma, int M,
                       double exponent = 1.0);

}  // namespace berry
