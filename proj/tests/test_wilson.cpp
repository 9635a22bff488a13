#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "berry/errors.hpp"
#include "berry/wilson.hpp"

using namespace berry;

namespace {

constexpr double kPi = std::numbers::pi;

// Mod-2pi distance between two angles.
double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2.0 * kPi + 0.3) == doctest::Approx(0.3));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2.0 * kPi));
}

TEST_CASE("two-level-real unit circle carries phase pi") {
  const HamiltonianFamily family = make_two_level_real();
  const Loop loop = Loop::coordinate_circle({0.0, 0.0}, 1.0, 0, 1);
  const BerryPhaseResult result = wilson_loop_phase(family, loop, 0);
  CHECK(angle_distance(result.principal, kPi) < 1e-9);
  CHECK(result.segments_used >= 128);
  CHECK(result.refinement_error < 1e-9);
  // Excited band of a two-level system carries the opposite phase.
  const BerryPhaseResult excited = wilson_loop_phase(family, loop, 1);
  CHECK(angle_distance(excited.principal, -kPi) < 1e-9);
}

TEST_CASE("constant Hamiltonian has zero loop phase") {
  const HamiltonianFamily family(
      2, 2, [](const ParameterPoint&) -> Matrix {
        Matrix h(2, 2);
        h << 1, 0.5, 0.5, -1;
        return h;
      });
  const Loop loop = Loop::coordinate_circle({0.3, -0.2}, 0.7, 0, 1);
  const BerryPhaseResult result = wilson_loop_phase(family, loop, 0);
  CHECK(std::abs(result.principal) < 1e-12);
}

TEST_CASE("spin-half colatitude circle: gamma = -pi (1 - cos theta0)") {
  const HamiltonianFamily family = make_spin_half();
  for (const double theta0 : {kPi / 3.0, 0.4, 2.0}) {
    const Loop loop = Loop::coordinate_circle({0.0, 0.0, std::cos(theta0)},
                                              std::sin(theta0), 0, 1);
    const BerryPhaseResult result = wilson_loop_phase(family, loop, 0);
    const double expected = -kPi * (1.0 - std::cos(theta0));
    CHECK(angle_distance(result.principal, expected) < 1e-8);
  }
}

TEST_CASE("xy-qubit phi: 0 -> pi loop accumulates pi (1 - cos theta_k)") {
  const int M = 7, k = 2, N = 2 * M + 1;
  const double lambda = 0.3, gamma = 0.8;
  const HamiltonianFamily family = make_xy_qubit(M, k);
  const Loop loop(
      [lambda, gamma](double t) {
        return ParameterPoint{lambda, gamma, kPi * t};
      },
      3);
  const BerryPhaseResult result = wilson_loop_phase(family, loop, 0);
  const double x = 2.0 * kPi * k / N;
  const double eps = std::cos(x) - lambda;
  const double cos_theta =
      eps / std::hypot(eps, gamma * std::sin(x));
  CHECK(result.unwrapped ==
        doctest::Approx(kPi * (1.0 - cos_theta)).epsilon(1e-8));
}

TEST_CASE("reversed loop negates the phase mod 2 pi") {
  const HamiltonianFamily family = make_spin_half();
  const Loop loop = Loop::circle({0.2, 0.1, 0.5}, 0.4, {1.0, 0.0, 0.0},
                                 {0.0, 0.7, 0.7});
  const Loop reversed([&loop](double t) { return loop.at(1.0 - t); }, 3);
  const double forward = wilson_loop_phase(family, loop, 0).principal;
  const double backward = wilson_loop_phase(family, reversed, 0).principal;
  CHECK(angle_distance(forward, -backward) < 1e-8);
}

TEST_CASE("discrete phase is gauge invariant mod 2 pi") {
  const HamiltonianFamily family = make_spin_half();
  const LoopPath path =
      Loop::coordinate_circle({0.0, 0.0, 0.6}, 0.8, 0, 1).sample(97);
  const double library_phase = discrete_loop_phase(family, path, 0);

  // Recompute with an independent overlap chain under random per-point
  // gauge twists; the wrapped phase must not move.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::vector<Vector> vectors;
  for (const ParameterPoint& p : path.points) {
    Vector v = eigensystem(family(p)).vector(0);
    vectors.push_back(std::exp(Complex(0.0, angle(rng))) * v);
  }
  double gauged = 0.0;
  const int n = static_cast<int>(vectors.size());
  for (int s = 0; s < n; ++s) {
    gauged += std::arg(vectors[s].dot(vectors[(s + 1) % n]));
  }
  CHECK(angle_distance(library_phase, gauged) < 1e-10);
}

TEST_CASE("a path through an exact degeneracy raises DegeneracyError") {
  const HamiltonianFamily family = make_two_level_real();
  LoopPath path;
  path.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(discrete_loop_phase(family, path, 0), DegeneracyError);
}

TEST_CASE("a segment straddling a degeneracy is flagged") {
  // Consecutive fields +x and -x have orthogonal ground states: the segment
  // crosses the degeneracy at the origin and the overlap vanishes.
  const HamiltonianFamily family = make_spin_half();
  LoopPath path;
  path.points = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(discrete_loop_phase(family, path, 0), DegeneracyError);
}

TEST_CASE("input validation") {
  const HamiltonianFamily family = make_spin_half();
  const Loop loop = Loop::coordinate_circle({0.0, 0.0, 1.0}, 0.1, 0, 1);
  CHECK_THROWS_AS(wilson_loop_phase(family, loop, 5),
                  std::invalid_argument);
  LoopPath two_points;
  two_points.points = {{0.0, 0.0, 1.0}, {0.1, 0.0, 1.0}};
  CHECK_THROWS_AS(discrete_loop_phase(family, two_points, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(loop.sample(2), std::invalid_argument);
}

TEST_CASE("refinement honors a tight tolerance") {
  const HamiltonianFamily family = make_spin_half();
  const Loop loop = Loop::coordinate_circle({0.0, 0.0, 0.2}, 0.98, 0, 1);
  WilsonOptions opts;
  opts.tol = 1e-9;
  const BerryPhaseResult result = wilson_loop_phase(family, loop, 0, opts);
  CHECK(result.refinement_error < 1e-9);
  const double expected = -kPi * (1.0 - 0.2 / std::hypot(0.98, 0.2));
  CHECK(angle_distance(result.principal, expected) < 1e-8);
}
