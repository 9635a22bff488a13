#include "berry/xy_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "berry/errors.hpp"

namespace berry::xy {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

XYPoint::XYPoint(double lambda_, double gamma_, double phi_)
    : lambda(lambda_), gamma(gamma_), phi(phi_) {
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("XYPoint: gamma must be >= 0");
  }
  if (!std::isfinite(lambda) || !std::isfinite(phi)) {
    throw std::invalid_argument("XYPoint: non-finite parameter");
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
}

ModeGrid::ModeGrid(int modes) : M(modes), N(2 * modes + 1) {
  if (modes < 1) throw std::invalid_argument("ModeGrid: M must be >= 1");
}

double ModeGrid::x(int k) const {
  if (k < 1 || k > M) throw std::out_of_range("ModeGrid: k out of 1..M");
  return kTwoPi * k / N;
}

ModeSpectrum dispersion(const XYPoint& point, const ModeGrid& grid) {
  ModeSpectrum out;
  out.M = grid.M;
  out.x.resize(grid.M);
  out.eps.resize(grid.M);
  out.lambda_k.resize(grid.M);
  out.cos_theta.resize(grid.M);
  out.defined.resize(grid.M);
  for (int k = 1; k <= grid.M; ++k) {
    const int i = k - 1;
    const double x = grid.x(k);
    const double eps = std::cos(x) - point.lambda;
    const double off = point.gamma * std::sin(x);
    const double lam = std::hypot(eps, off);
    out.x[i] = x;
    out.eps[i] = eps;
    out.lambda_k[i] = lam;
    out.defined[i] = lam > 0.0;
    out.cos_theta[i] = out.defined[i]
                           ? eps / lam
                           : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double mode_berry_phase(const ModeSpectrum& spectrum, int k) {
  if (k < 1 || k > spectrum.M) {
    throw std::out_of_range("mode_berry_phase: k out of 1..M");
  }
  if (!spectrum.defined[k - 1]) {
    throw UndefinedAngleError("mode " + std::to_string(k) +
                              " is exactly degenerate (Lambda_k = 0)");
  }
  return kPi * (1.0 - spectrum.cos_theta[k - 1]);
}

double total_berry_phase(const XYPoint& point, const ModeGrid& grid) {
  const ModeSpectrum spectrum = dispersion(point, grid);
  double total = 0.0;
  for (int k = 1; k <= grid.M; ++k) total += mode_berry_phase(spectrum, k);
  return total;
}

double total_berry_phase_mod(const XYPoint& point, const ModeGrid& grid) {
  double mod = std::fmod(total_berry_phase(point, grid), kTwoPi);
  if (mod < 0.0) mod += kTwoPi;
  return mod;
}

std::vector<QubitState> ground_state(const XYPoint& point,
                                     const ModeGrid& grid) {
  const ModeSpectrum spectrum = dispersion(point, grid);
  std::vector<QubitState> qubits;
  qubits.reserve(grid.M);
  const std::complex<double> phase =
      std::complex<double>(0.0, 1.0) *
      std::exp(std::complex<double>(0.0, 2.0 * point.phi));
  for (int k = 1; k <= grid.M; ++k) {
    if (!spectrum.defined[k - 1]) {
      throw UndefinedAngleError("mode " + std::to_string(k) +
                                " is exactly degenerate (Lambda_k = 0)");
    }
    const double theta = std::acos(spectrum.cos_theta[k - 1]);
    qubits.push_back(
        {std::cos(theta / 2.0), phase * std::sin(theta / 2.0)});
  }
  return qubits;
}

double excitation_gap(const XYPoint& point, const ModeGrid& grid) {
  const ModeSpectrum spectrum = dispersion(point, grid);
  double gap = std::numeric_limits<double>::infinity();
  for (double lam : spectrum.lambda_k) gap = std::min(gap, lam);
  return gap;
}

std::optional<int> equatorial_mode(double lambda, const ModeGrid& grid) {
  if (!(lambda > -1.0 && lambda < 1.0)) return std::nullopt;
  int best = 1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= grid.M; ++k) {
    const double dist = std::abs(std::cos(grid.x(k)) - lambda);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  return best;
}

double relative_phase_equatorial(const XYPoint& point, const ModeGrid& grid) {
  const auto k0 = equatorial_mode(point.lambda, grid);
  if (!k0) {
    throw std::domain_error(
        "relative_phase_equatorial: lambda outside (-1, 1), no equatorial "
        "mode");
  }
  return -mode_berry_phase(dispersion(point, grid), *k0);
}

std::string to_string(Region region) {
  switch (region) {
    case Region::XXCritical: return "XX-critical";
    case Region::XYCritical: return "XY-critical";
    case Region::IsingLine: return "Ising-line";
    case Region::NonCritical: return "non-critical";
  }
  return "unknown";
}

Region classify_region(const XYPoint& point, double tol) {
  if (std::abs(point.gamma) <= tol && point.lambda > -1.0 &&
      point.lambda < 1.0) {
    return Region::XXCritical;
  }
  if (std::abs(std::abs(point.lambda) - 1.0) <= tol) {
    return Region::XYCritical;
  }
  if (std::abs(point.gamma - 1.0) <= tol) return Region::IsingLine;
  return Region::NonCritical;
}

}  // namespace berry::xy
