#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace berry::xy {

// Parameters of the rotated anisotropic XY chain
//   H(lambda, gamma, phi) = g(phi) H(lambda, gamma) g(phi)^dagger.
// gamma >= 0; phi is normalized into [0, 2 pi) on construction.
struct XYPoint {
  double lambda;
  double gamma;
  double phi;

  XYPoint(double lambda, double gamma, double phi = 0.0);
};

// Momentum grid of a chain with sites -M..M (N = 2M+1, always odd).
// Positive modes k = 1..M at x_k = 2 pi k / N, strictly increasing in (0, pi).
struct ModeGrid {
  int M;
  int N;

  explicit ModeGrid(int modes);
  double x(int k) const;  // k in 1..M
};

// Per-mode closed-form quantities. Vectors are indexed by k-1 for k = 1..M.
// When Lambda_k = 0 exactly, cos(theta_k) is undefined and defined[k-1] is
// false; phase operations on such a mode throw UndefinedAngleError.
struct ModeSpectrum {
  int M = 0;
  std::vector<double> x;          // momenta x_k
  std::vector<double> eps;        // eps_k = cos x_k - lambda
  std::vector<double> lambda_k;   // sqrt(eps_k^2 + gamma^2 sin^2 x_k)
  std::vector<double> cos_theta;  // eps_k / Lambda_k where defined
  std::vector<bool> defined;

  bool mode_defined(int k) const { return defined[k - 1]; }
};

// Eq.-(5)-structure qubit of mode k: cos(theta_k/2)|00> + i e^{2 i phi}
// sin(theta_k/2)|11>.
struct QubitState {
  std::complex<double> amplitude_0;
  std::complex<double> amplitude_1;
};

enum class Region { XXCritical, XYCritical, IsingLine, NonCritical };

std::string to_string(Region region);

ModeSpectrum dispersion(const XYPoint& point, const ModeGrid& grid);

// pi (1 - cos theta_k), in [0, 2 pi]. k is 1-based.
double mode_berry_phase(const ModeSpectrum& spectrum, int k);

// Raw sum over modes, phi(M) = sum_k pi (1 - cos theta_k), in [0, 2 pi M].
// Independent of point.phi (the loop variable does not enter the sum).
double total_berry_phase(const XYPoint& point, const ModeGrid& grid);

// total_berry_phase reduced into [0, 2 pi).
double total_berry_phase_mod(const XYPoint& point, const ModeGrid& grid);

// The M ground-state qubits. Throws UndefinedAngleError at exact degeneracy.
std::vector<QubitState> ground_state(const XYPoint& point,
                                     const ModeGrid& grid);

// min_k Lambda_k, the lowest one-particle excitation energy at finite N.
double excitation_gap(const XYPoint& point, const ModeGrid& grid);

// For lambda in (-1, 1): the 1-based k minimizing |cos x_k - lambda|.
// Outside that interval there is no equatorial mode.
std::optional<int> equatorial_mode(double lambda, const ModeGrid& grid);

// Carollo-Pachos relative phase at its gamma -> 0 content: -phi_{k0} for the
// equatorial mode k0. Throws std::domain_error when lambda is outside
// (-1, 1).
double relative_phase_equatorial(const XYPoint& point, const ModeGrid& grid);

// XX-critical:  gamma = 0 and lambda in (-1, 1)
// XY-critical:  lambda = +-1
// Ising-line:   gamma = 1
// Exact equalities tested with `tol`; tie-break order XX, XY, Ising.
Region classify_region(const XYPoint& point, double tol = 1e-12);

}  // namespace berry::xy
