#include "berry/loop.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace berry {

Loop::Loop(std::function<ParameterPoint(double)> parametrization, int dim)
    : parametrization_(std::move(parametrization)), dim_(dim) {
  if (!parametrization_) {
    throw std::invalid_argument("loop: parametrization required");
  }
  if (dim_ < 1) throw std::invalid_argument("loop: dimension must be >= 1");
}

Loop Loop::from_path(LoopPath path) {
  if (path.points.size() < 3) {
    throw std::invalid_argument("loop: a path needs at least 3 points");
  }
  const int dim = static_cast<int>(path.points.front().size());
  for (const auto& p : path.points) {
    if (static_cast<int>(p.size()) != dim) {
      throw std::invalid_argument("loop: mixed point dimensions in path");
    }
  }
  auto points = std::make_shared<std::vector<ParameterPoint>>(
      std::move(path.points));
  return Loop(
      [points, dim](double t) {
        const int n = static_cast<int>(points->size());
        t -= std::floor(t);
        const double s = t * n;
        const int i = std::min(static_cast<int>(s), n - 1);
        const double f = s - i;
        const ParameterPoint& a = (*points)[i];
        const ParameterPoint& b = (*points)[(i + 1) % n];
        ParameterPoint out(dim);
        for (int c = 0; c < dim; ++c) out[c] = (1.0 - f) * a[c] + f * b[c];
        return out;
      },
      dim);
}

Loop Loop::circle(ParameterPoint center, double radius, ParameterPoint u,
                  ParameterPoint v) {
  const int dim = static_cast<int>(center.size());
  if (static_cast<int>(u.size()) != dim || static_cast<int>(v.size()) != dim) {
    throw std::invalid_argument("loop: circle axes must match center");
  }
  return Loop(
      [center = std::move(center), radius, u = std::move(u),
       v = std::move(v), dim](double t) {
        const double a = 2.0 * std::numbers::pi * t;
        ParameterPoint out(center);
        for (int c = 0; c < dim; ++c) {
          out[c] += radius * (std::cos(a) * u[c] + std::sin(a) * v[c]);
        }
        return out;
      },
      dim);
}

Loop Loop::coordinate_circle(ParameterPoint center, double radius, int axis_u,
                             int axis_v) {
  const int dim = static_cast<int>(center.size());
  if (axis_u < 0 || axis_u >= dim || axis_v < 0 || axis_v >= dim ||
      axis_u == axis_v) {
    throw std::invalid_argument("loop: bad circle axes");
  }
  ParameterPoint u(dim, 0.0), v(dim, 0.0);
  u[axis_u] = 1.0;
  v[axis_v] = 1.0;
  return circle(std::move(center), radius, std::move(u), std::move(v));
}

Loop Loop::rectangle(ParameterPoint center, double hu, double hv, int axis_u,
                     int axis_v) {
  const int dim = static_cast<int>(center.size());
  if (axis_u < 0 || axis_u >= dim || axis_v < 0 || axis_v >= dim ||
      axis_u == axis_v) {
    throw std::invalid_argument("loop: bad rectangle axes");
  }
  return Loop(
      [center = std::move(center), hu, hv, axis_u, axis_v](double t) {
        t -= std::floor(t);
        const double s = 4.0 * t;
        ParameterPoint out(center);
        double du, dv;
        if (s < 1.0) {  // bottom edge, u: -hu -> +hu at v = -hv
          du = -hu + 2.0 * hu * s;
          dv = -hv;
        } else if (s < 2.0) {  // right edge
          du = hu;
          dv = -hv + 2.0 * hv * (s - 1.0);
        } else if (s < 3.0) {  // top edge, reversed
          du = hu - 2.0 * hu * (s - 2.0);
          dv = hv;
        } else {  // left edge
          du = -hu;
          dv = hv - 2.0 * hv * (s - 3.0);
        }
        out[axis_u] += du;
        out[axis_v] += dv;
        return out;
      },
      dim);
}

Loop Loop::point(ParameterPoint p) {
  const int dim = static_cast<int>(p.size());
  return Loop([p = std::move(p)](double) { return p; }, dim);
}

LoopPath Loop::sample(int segments) const {
  if (segments < 3) {
    throw std::invalid_argument("loop: need at least 3 segments");
  }
  LoopPath path;
  path.points.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    path.points.push_back(at(static_cast<double>(i) / segments));
  }
  return path;
}

}  // namespace berry
