#pragma once

#include "berry/wilson.hpp"

namespace berry {

// Berry curvature of band j at one parameter point, in the normalization
// fixed by the Wilson loop: curvature = (plaquette phase) / (plaquette area)
// in the small-area limit. `bound` is the Cauchy-Schwarz bound in the same
// normalization; |F_value| <= bound whenever gap > 0.
struct CurvatureSample {
  ParameterPoint point;
  int mu = 0;
  int nu = 1;
  double F_value = 0.0;
  double gap = 0.0;
  double bound = 0.0;
};

struct CurvatureOptions {
  double gap_threshold_rel = 1e-10;
  double eigen_tol = 1e-10;
  double derivative_step = 1e-5;  // FD step for dH when no analytic form
};

// Sum-over-states curvature:
//
//   F_{mu nu} = 2 sum_{m != j} Im[ <j|dH_mu|m><m|dH_nu|j> ] / (E_m - E_j)^2
//
// The prefactor 2 makes this the same object the plaquette Wilson loop
// measures (phase per unit area); see curvature_plaquette.
CurvatureSample curvature_sum_over_states(const HamiltonianFamily& family,
                                          const ParameterPoint& point, int mu,
                                          int nu, int band,
                                          const CurvatureOptions& opts = {});

// Wilson-loop phase around the h x h coordinate plaquette centered at
// `point` in the (mu, nu) plane, divided by h^2. Converges to
// curvature_sum_over_states as h -> 0 with O(h^2) error.
double curvature_plaquette(const HamiltonianFamily& family,
                           const ParameterPoint& point, int mu, int nu,
                           int band, double h,
                           const CurvatureOptions& opts = {});

// 2 ||dH_mu |j>|| ||dH_nu |j>|| / (Delta E)^2, the Cauchy-Schwarz bound on
// |F_{mu nu}| in the plaquette normalization.
double curvature_bound(const HamiltonianFamily& family,
                       const ParameterPoint& point, int mu, int nu, int band,
                       const CurvatureOptions& opts = {});

// inf_{m != j} |E_j - E_m| at `point` (0 when exactly degenerate).
double gap_at(const HamiltonianFamily& family, const ParameterPoint& point,
              int band, double eigen_tol = 1e-10);

// Operator norm of the central difference of the band-j projector along
// axis mu, || (Pi_j(p + h e_mu) - Pi_j(p - h e_mu)) / 2h ||. Gauge-free.
double projector_derivative_norm(const HamiltonianFamily& family,
                                 const ParameterPoint& point, int mu, int band,
                                 double h,
                                 const CurvatureOptions& opts = {});

}  // namespace berry
