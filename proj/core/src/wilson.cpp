#include "berry/wilson.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "berry/errors.hpp"

namespace berry {

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

namespace {

Vector band_vector(const HamiltonianFamily& family, const ParameterPoint& p,
                   int band, const WilsonOptions& opts,
                   const std::string& where) {
  EigenSystem eigs = eigensystem(family(p), opts.eigen_tol);
  const int d = eigs.dim();
  if (band < 0 || band >= d) {
    throw std::invalid_argument("wilson: band index out of range");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < d; ++m) {
    if (m == band) continue;
    gap = std::min(gap, std::abs(eigs.eigenvalues[m] - eigs.eigenvalues[band]));
  }
  const double scale =
      std::max(1e-300, eigs.eigenvalues.cwiseAbs().maxCoeff());
  if (d > 1 && gap <= opts.gap_threshold_rel * scale) {
    throw DegeneracyError("wilson: band " + std::to_string(band) +
                          " loses isolation " + where + " (gap " +
                          std::to_string(gap) + ")");
  }
  return eigs.vector(band);
}

}  // namespace

double discrete_loop_phase(const HamiltonianFamily& family,
                           const LoopPath& path, int band,
                           const WilsonOptions& opts) {
  const int n = path.segments();
  if (n < 3) throw std::invalid_argument("wilson: need at least 3 points");

  Vector first = band_vector(family, path.points[0], band, opts, "at s=0");
  Vector prev = first;
  double phase = 0.0;
  for (int s = 1; s <= n; ++s) {
    Vector cur = (s == n) ? first
                          : band_vector(family, path.points[s], band, opts,
                                        "at s=" + std::to_string(s));
    const Complex overlap = prev.dot(cur);  // <prev|cur>
    if (std::abs(overlap) < 1e-8) {
      // Consecutive states (nearly) orthogonal: the loop passes through or
      // numerically at a band degeneracy between samples.
      throw DegeneracyError(
          "wilson: vanishing overlap between consecutive loop points; the "
          "loop crosses a degeneracy of band " + std::to_string(band));
    }
    phase += std::arg(overlap);
    prev = std::move(cur);
  }
  return phase;
}

BerryPhaseResult wilson_loop_phase(const HamiltonianFamily& family,
                                   const Loop& loop, int band,
                                   const WilsonOptions& opts) {
  int segments = opts.initial_segments;
  double prev_phase = discrete_loop_phase(family, loop.sample(segments), band,
                                          opts);
  while (true) {
    if (2LL * segments > opts.max_segments) {
      throw ConvergenceError(
          "wilson: refinement did not converge below tol within " +
          std::to_string(opts.max_segments) + " segments");
    }
    segments *= 2;
    const double phase =
        discrete_loop_phase(family, loop.sample(segments), band, opts);
    const double err = std::abs(wrap_angle(phase - prev_phase));
    if (err < opts.tol) {
      BerryPhaseResult out;
      out.unwrapped = phase;
      out.principal = wrap_angle(phase);
      out.segments_used = segments;
      out.refinement_error = err;
      return out;
    }
    prev_phase = phase;
  }
}

}  // namespace berry
