#include "berry/curvature.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "berry/errors.hpp"

namespace berry {

namespace {

struct BandContext {
  EigenSystem eigs;
  double gap;
};

BandContext band_context(const HamiltonianFamily& family,
                         const ParameterPoint& point, int band,
                         double eigen_tol, double gap_threshold_rel) {
  BandContext ctx{eigensystem(family(point), eigen_tol), 0.0};
  const int d = ctx.eigs.dim();
  if (band < 0 || band >= d) {
    throw std::invalid_argument("curvature: band index out of range");
  }
  double gap = std::numeric_limits<double>::infinity();
  for (int m = 0; m < d; ++m) {
    if (m == band) continue;
    gap = std::min(gap, std::abs(ctx.eigs.eigenvalues[m] -
                                 ctx.eigs.eigenvalues[band]));
  }
  ctx.gap = (d > 1) ? gap : std::numeric_limits<double>::infinity();
  if (gap_threshold_rel > 0.0) {
    const double scale =
        std::max(1e-300, ctx.eigs.eigenvalues.cwiseAbs().maxCoeff());
    if (ctx.gap <= gap_threshold_rel * scale) {
      throw DegeneracyError("curvature: band " + std::to_string(band) +
                            " is degenerate at the requested point");
    }
  }
  return ctx;
}

}  // namespace

CurvatureSample curvature_sum_over_states(const HamiltonianFamily& family,
                                          const ParameterPoint& point, int mu,
                                          int nu, int band,
                                          const CurvatureOptions& opts) {
  BandContext ctx = band_context(family, point, band, opts.eigen_tol,
                                 opts.gap_threshold_rel);
  const Matrix dmu = family.derivative(point, mu, opts.derivative_step);
  const Matrix dnu = family.derivative(point, nu, opts.derivative_step);
  const Vector j = ctx.eigs.vector(band);
  const Vector dmu_j = dmu * j;
  const Vector dnu_j = dnu * j;

  double sum = 0.0;
  for (int m = 0; m < ctx.eigs.dim(); ++m) {
    if (m == band) continue;
    const Vector vm = ctx.eigs.vector(m);
    const Complex a = j.dot(dmu * vm.eval());  // <j|dH_mu|m>
    const Complex b = vm.dot(dnu_j);           // <m|dH_nu|j>
    const double de = ctx.eigs.eigenvalues[m] - ctx.eigs.eigenvalues[band];
    sum += (a * b).imag() / (de * de);
  }

  CurvatureSample out;
  out.point = point;
  out.mu = mu;
  out.nu = nu;
  out.F_value = 2.0 * sum;
  out.gap = ctx.gap;
  out.bound = 2.0 * dmu_j.norm() * dnu_j.norm() / (ctx.gap * ctx.gap);
  return out;
}

double curvature_plaquette(const HamiltonianFamily& family,
                           const ParameterPoint& point, int mu, int nu,
                           int band, double h, const CurvatureOptions& opts) {
  if (h <= 0.0) throw std::invalid_argument("curvature: step must be > 0");
  // F is undefined at a band degeneracy even when every plaquette corner is
  // gapped, so check the center point explicitly.
  band_context(family, point, band, opts.eigen_tol, opts.gap_threshold_rel);
  LoopPath plaquette;
  const double half = h / 2.0;
  for (auto [du, dv] : {std::pair{-half, -half},
                        std::pair{half, -half},
                        std::pair{half, half},
                        std::pair{-half, half}}) {
    ParameterPoint p = point;
    p[mu] += du;
    p[nu] += dv;
    plaquette.points.push_back(std::move(p));
  }
  WilsonOptions wopts;
  wopts.gap_threshold_rel = opts.gap_threshold_rel;
  wopts.eigen_tol = opts.eigen_tol;
  // The raw segment sum can carry a spurious multiple of 2 pi where the
  // deterministic eigenvector gauge is singular; a small plaquette's phase
  // is far below pi, so the principal value is the physical one.
  return wrap_angle(discrete_loop_phase(family, plaquette, band, wopts)) /
         (h * h);
}

double curvature_bound(const HamiltonianFamily& family,
                       const ParameterPoint& point, int mu, int nu, int band,
                       const CurvatureOptions& opts) {
  return curvature_sum_over_states(family, point, mu, nu, band, opts).bound;
}

double gap_at(const HamiltonianFamily& family, const ParameterPoint& point,
              int band, double eigen_tol) {
  BandContext ctx = band_context(family, point, band, eigen_tol, 0.0);
  return std::isinf(ctx.gap) ? 0.0 : ctx.gap;
}

double projector_derivative_norm(const HamiltonianFamily& family,
                                 const ParameterPoint& point, int mu, int band,
                                 double h, const CurvatureOptions& opts) {
  if (h <= 0.0) throw std::invalid_argument("curvature: step must be > 0");
  auto projector = [&](double offset) -> Matrix {
    ParameterPoint p = point;
    p[mu] += offset;
    BandContext ctx = band_context(family, p, band, opts.eigen_tol,
                                   opts.gap_threshold_rel);
    const Vector v = ctx.eigs.vector(band);
    return v * v.adjoint();
  };
  const Matrix diff = (projector(h) - projector(-h)) / (2.0 * h);
  // diff is Hermitian, so the operator norm is the largest |eigenvalue|.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace berry
