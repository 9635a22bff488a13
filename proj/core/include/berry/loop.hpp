#pragma once

#include <functional>
#include <vector>

#include "berry/family.hpp"

namespace berry {

// A discretized closed curve: first point != last, closure is implicit.
struct LoopPath {
  std::vector<ParameterPoint> points;

  int segments() const { return static_cast<int>(points.size()); }
};

// A closed curve in parameter space, parametrized by t in [0, 1).
// Resamplable at any segment count, which is what phase refinement needs.
class Loop {
 public:
  Loop(std::function<ParameterPoint(double)> parametrization, int dim);

  // Piecewise-linear interpolation through an explicit path (at least 3
  // points, all of equal dimension).
  static Loop from_path(LoopPath path);

  // center + radius * (cos(2 pi t) u + sin(2 pi t) v). u, v must have the
  // same dimension as center; they are used as given (not re-normalized).
  static Loop circle(ParameterPoint center, double radius,
                     ParameterPoint u, ParameterPoint v);

  // Axis-aligned circle in the (axis_u, axis_v) coordinate plane.
  static Loop coordinate_circle(ParameterPoint center, double radius,
                                int axis_u, int axis_v);

  // Axis-aligned rectangle boundary in the (axis_u, axis_v) plane, centered
  // on `center`, with half-widths hu, hv, traversed u -> v orientation.
  static Loop rectangle(ParameterPoint center, double hu, double hv,
                        int axis_u, int axis_v);

  // A loop degenerate to a single point (used at the poles of a surface
  // sweep; its Berry phase is identically zero).
  static Loop point(ParameterPoint p);

  int dim() const { return dim_; }
  ParameterPoint at(double t) const { return parametrization_(t); }
  LoopPath sample(int segments) const;

 private:
  std::function<ParameterPoint(double)> parametrization_;
  int dim_;
};

}  // namespace berry
