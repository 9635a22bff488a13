#include "berry/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "berry/errors.hpp"

namespace berry {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LoopSequence LoopSequence::shrinking_circles(ParameterPoint center,
                                             std::vector<double> radii,
                                             int axis_u, int axis_v) {
  LoopSequence seq;
  seq.limit_point = center;
  seq.radii = radii;
  seq.generator = [center = std::move(center), radii = std::move(radii),
                   axis_u, axis_v](int r) {
    return Loop::coordinate_circle(center, radii.at(r), axis_u, axis_v);
  };
  return seq;
}

std::vector<BerryPhaseResult> phase_sequence(const HamiltonianFamily& family,
                                             const LoopSequence& seq, int band,
                                             const WilsonOptions& opts) {
  const int n = static_cast<int>(seq.radii.size());
  if (n < 1) throw std::invalid_argument("phase_sequence: empty schedule");
  for (int r = 1; r < n; ++r) {
    if (!(seq.radii[r] < seq.radii[r - 1])) {
      throw std::invalid_argument(
          "phase_sequence: radii must be strictly decreasing");
    }
  }
  std::vector<BerryPhaseResult> phases;
  phases.reserve(n);
  for (int r = 0; r < n; ++r) {
    try {
      phases.push_back(wilson_loop_phase(family, seq.generator(r), band,
                                         opts));
    } catch (const DegeneracyError& e) {
      throw DegeneracyError("loop r=" + std::to_string(r) + ": " + e.what());
    }
  }
  return phases;
}

std::string to_string(SequenceClass c) {
  switch (c) {
    case SequenceClass::Contractible: return "contractible";
    case SequenceClass::NonContractible: return "non-contractible";
    case SequenceClass::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

SequenceVerdict classify_sequence(const std::vector<double>& phases,
                                  double phase_tol, double tail_fraction,
                                  double spread_tol) {
  const int n = static_cast<int>(phases.size());
  if (n < 4) {
    throw std::invalid_argument(
        "classify_sequence: need at least 4 phases, got " +
        std::to_string(n));
  }
  SequenceVerdict verdict;
  verdict.tolerance = phase_tol;
  verdict.phases.reserve(n);
  for (double p : phases) verdict.phases.push_back(wrap_angle(p));

  const int tail =
      std::clamp(static_cast<int>(std::ceil(n * tail_fraction)), 2, n);
  // Circular mean of the tail, so a tail hugging +-pi is not torn apart by
  // the branch cut.
  double sum_sin = 0.0, sum_cos = 0.0;
  for (int i = n - tail; i < n; ++i) {
    sum_sin += std::sin(verdict.phases[i]);
    sum_cos += std::cos(verdict.phases[i]);
  }
  verdict.fitted_limit = std::atan2(sum_sin, sum_cos);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = n - tail; i < n; ++i) {
    const double dev = wrap_angle(verdict.phases[i] - verdict.fitted_limit);
    lo = std::min(lo, dev);
    hi = std::max(hi, dev);
  }
  verdict.tail_spread = hi - lo;

  if (verdict.tail_spread < spread_tol) {
    verdict.classification = std::abs(verdict.fitted_limit) > phase_tol
                                 ? SequenceClass::NonContractible
                                 : SequenceClass::Contractible;
  } else {
    verdict.classification = SequenceClass::Inconclusive;
  }
  return verdict;
}

double area_scaling_slope(const std::vector<double>& phases,
                          const std::vector<double>& radii) {
  if (phases.size() != radii.size()) {
    throw std::invalid_argument("area_scaling_slope: size mismatch");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double p = std::abs(wrap_angle(phases[i]));
    if (p <= 0.0 || radii[i] <= 0.0) continue;
    const double x = std::log(radii[i]);
    const double y = std::log(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    throw std::invalid_argument(
        "area_scaling_slope: need at least 2 nonzero phases");
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SurfaceLoopFamily SurfaceLoopFamily::sphere(ParameterPoint center,
                                            double radius, int loop_count) {
  if (center.size() != 3) {
    throw std::invalid_argument("sphere surface needs a 3d manifold");
  }
  SurfaceLoopFamily surface;
  surface.loop_count = loop_count;
  surface.loop_at = [center = std::move(center), radius](double s) {
    const double theta = std::numbers::pi * s;
    ParameterPoint c = center;
    c[2] += radius * std::cos(theta);
    const double ring = radius * std::sin(theta);
    if (ring == 0.0) return Loop::point(c);
    return Loop::coordinate_circle(c, ring, 0, 1);
  };
  return surface;
}

SurfaceLoopFamily SurfaceLoopFamily::box(ParameterPoint lo, ParameterPoint hi,
                                         int loop_count) {
  if (lo.size() != 3 || hi.size() != 3) {
    throw std::invalid_argument("box surface needs a 3d manifold");
  }
  for (int c = 0; c < 3; ++c) {
    if (!(lo[c] < hi[c])) {
      throw std::invalid_argument("box surface: lo must be < hi per axis");
    }
  }
  SurfaceLoopFamily surface;
  surface.loop_count = loop_count;
  surface.loop_at = [lo = std::move(lo), hi = std::move(hi)](double s) {
    const double hx = (hi[0] - lo[0]) / 2.0;
    const double hy = (hi[1] - lo[1]) / 2.0;
    const double cx = (lo[0] + hi[0]) / 2.0;
    const double cy = (lo[1] + hi[1]) / 2.0;
    // Sweep: bottom face (expanding), side walls (rising), top face
    // (shrinking); rectangles stay in z = const planes throughout.
    if (s <= 1.0 / 3.0) {
      const double u = 3.0 * s;
      if (u == 0.0) return Loop::point({cx, cy, lo[2]});
      return Loop::rectangle({cx, cy, lo[2]}, u * hx, u * hy, 0, 1);
    }
    if (s <= 2.0 / 3.0) {
      const double z = lo[2] + (3.0 * s - 1.0) * (hi[2] - lo[2]);
      return Loop::rectangle({cx, cy, z}, hx, hy, 0, 1);
    }
    const double u = 3.0 * (1.0 - s);
    if (u == 0.0) return Loop::point({cx, cy, hi[2]});
    return Loop::rectangle({cx, cy, hi[2]}, u * hx, u * hy, 0, 1);
  };
  return surface;
}

std::string to_string(SurfaceClass c) {
  return c == SurfaceClass::PhaseRotating ? "phase-rotating"
                                          : "phase-preserving";
}

WindingReport surface_winding(const HamiltonianFamily& family,
                              const SurfaceLoopFamily& surface, int band,
                              const WilsonOptions& opts) {
  const int count = surface.loop_count;
  if (count < 3) {
    throw std::invalid_argument("surface_winding: need at least 3 loops");
  }
  WindingReport report;
  report.phases.reserve(count);
  double unwrapped = 0.0;
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    const BerryPhaseResult phase =
        wilson_loop_phase(family, surface.loop_at(s), band, opts);
    if (i == 0) {
      unwrapped = phase.principal;
    } else {
      const double jump = wrap_angle(phase.principal - unwrapped);
      if (std::abs(jump) >= 0.999 * std::numbers::pi) {
        throw UnwrapError(
            "surface_winding: adjacent loops " + std::to_string(i - 1) +
            " -> " + std::to_string(i) +
            " jump by >= pi; refine the loop family");
      }
      unwrapped += jump;
    }
    report.phases.push_back(unwrapped);
  }
  const double turns = unwrapped / kTwoPi;
  report.winding = static_cast<int>(std::lround(turns));
  if (std::abs(turns - report.winding) > 0.05) {
    throw UnwrapError("surface_winding: final phase " +
                      std::to_string(unwrapped) +
                      " is not an integer winding within 0.05 turns");
  }
  report.classification = report.winding != 0 ? SurfaceClass::PhaseRotating
                                              : SurfaceClass::PhasePreserving;
  return report;
}

namespace {

int box_winding(const HamiltonianFamily& family, const ParameterPoint& lo,
                const ParameterPoint& hi, int band,
                const BisectionOptions& opts) {
  WilsonOptions wopts = opts.wilson;
  return surface_winding(family,
                         SurfaceLoopFamily::box(lo, hi, opts.surface_loops),
                         band, wopts)
      .winding;
}

}  // namespace

BisectionReport stone_bisection(const HamiltonianFamily& family,
                                ParameterPoint lo, ParameterPoint hi, int band,
                                const BisectionOptions& opts) {
  if (family.manifold_dim() != 3 || lo.size() != 3 || hi.size() != 3) {
    throw std::invalid_argument("stone_bisection: needs a 3d manifold");
  }
  BisectionReport report;
  report.initial_winding = box_winding(family, lo, hi, band, opts);
  if (report.initial_winding == 0) {
    throw DegeneracyError(
        "stone_bisection: initial surface is phase-preserving (winding 0); "
        "the box does not enclose a degeneracy");
  }

  auto diameter = [](const ParameterPoint& a, const ParameterPoint& b) {
    double d = 0.0;
    for (int c = 0; c < 3; ++c) d = std::max(d, b[c] - a[c]);
    return d;
  };

  int depth = 0;
  while (diameter(lo, hi) >= opts.stop_diameter) {
    const int axis = depth % 3;
    const double width = hi[axis] - lo[axis];
    const double mid = (lo[axis] + hi[axis]) / 2.0;
    bool advanced = false;
    for (double dither : opts.dither) {
      const double cut = mid + dither * width;
      if (!(cut > lo[axis] && cut < hi[axis])) continue;
      ParameterPoint lower_hi = hi, upper_lo = lo;
      lower_hi[axis] = cut;
      upper_lo[axis] = cut;
      int w_lower = 0, w_upper = 0;
      try {
        w_lower = box_winding(family, lo, lower_hi, band, opts);
        w_upper = box_winding(family, upper_lo, hi, band, opts);
      } catch (const DegeneracyError&) {
        continue;  // degeneracy on the cut surface; dither the plane
      } catch (const UnwrapError&) {
        continue;
      } catch (const ConvergenceError&) {
        continue;  // phase refinement stalls when the cut grazes a degeneracy
      }
      if (w_lower == 0 && w_upper == 0) continue;

      BisectionStep step;
      step.depth = depth;
      step.axis = axis;
      step.cut = cut;
      step.both_rotating = (w_lower != 0 && w_upper != 0);
      if (w_lower != 0) {
        step.kept_half = 0;
        step.winding = w_lower;
        if (step.both_rotating) {
          report.extra_candidates.emplace_back(upper_lo, hi);
        }
        hi = lower_hi;
      } else {
        step.kept_half = 1;
        step.winding = w_upper;
        lo = upper_lo;
      }
      report.steps.push_back(step);
      advanced = true;
      break;
    }
    if (!advanced) {
      throw ConvergenceError(
          "stone_bisection: no phase-rotating half found at depth " +
          std::to_string(depth) + " after dithering the cut plane");
    }
    ++depth;
  }

  report.depth = depth;
  report.box_diameter = diameter(lo, hi);
  report.located_point = {(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0,
                          (lo[2] + hi[2]) / 2.0};
  return report;
}

ScalingSeries xy_order_of_limits(double lambda,
                                 const std::vector<double>& gamma_schedule,
                                 const std::vector<int>& M_schedule) {
  auto strictly_monotone = [](const auto& v) {
    if (v.size() < 2) return true;
    const bool inc = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (inc ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    }
    return true;
  };
  if (gamma_schedule.empty() || M_schedule.empty()) {
    throw std::invalid_argument("xy_order_of_limits: empty schedule");
  }
  if (!strictly_monotone(gamma_schedule) || !strictly_monotone(M_schedule)) {
    throw std::invalid_argument(
        "xy_order_of_limits: schedules must be strictly monotone");
  }

  ScalingSeries series;
  series.lambda = lambda;
  series.M_values = M_schedule;
  series.gamma_values = gamma_schedule;
  const bool equatorial = lambda > -1.0 && lambda < 1.0;
  const std::size_t cells = M_schedule.size() * gamma_schedule.size();
  series.phi_total.resize(cells);
  series.phi_intensive.resize(cells);
  if (equatorial) series.phi_equatorial.resize(cells);

  for (std::size_t mi = 0; mi < M_schedule.size(); ++mi) {
    const xy::ModeGrid grid(M_schedule[mi]);
    const auto k0 = xy::equatorial_mode(lambda, grid);
    for (std::size_t gi = 0; gi < gamma_schedule.size(); ++gi) {
      const xy::XYPoint point(lambda, gamma_schedule[gi]);
      const double total = xy::total_berry_phase(point, grid);
      const std::size_t idx = mi * gamma_schedule.size() + gi;
      series.phi_total[idx] = total;
      series.phi_intensive[idx] = total / grid.M;
      if (equatorial) {
        series.phi_equatorial[idx] =
            xy::mode_berry_phase(xy::dispersion(point, grid), *k0);
      }
    }
  }
  return series;
}

double intensive_phase(double lambda, double gamma, int M, double exponent) {
  const xy::ModeGrid grid(M);
  return xy::total_berry_phase(xy::XYPoint(lambda, gamma), grid) /
         std::pow(static_cast<double>(M), exponent);
}

}  // namespace berry
