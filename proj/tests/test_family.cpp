#include <doctest.h>

#include <cmath>
#include <numbers>

#include "berry/errors.hpp"
#include "berry/expression.hpp"
#include "berry/family.hpp"

using namespace berry;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("two-level-real evaluates x sigma_x + z sigma_z") {
  const HamiltonianFamily family = make_two_level_real();
  CHECK(family.dim() == 2);
  CHECK(family.manifold_dim() == 2);
  const Matrix h = family({0.3, -0.4});
  CHECK(h(0, 0).real() == doctest::Approx(-0.4));
  CHECK(h(1, 1).real() == doctest::Approx(0.4));
  CHECK(h(0, 1).real() == doctest::Approx(0.3));
  CHECK(h(0, 1).imag() == doctest::Approx(0.0));
  CHECK(is_hermitian(h));
}

TEST_CASE("spin-half evaluates B . sigma with analytic derivatives") {
  const HamiltonianFamily family = make_spin_half();
  CHECK(family.dim() == 2);
  CHECK(family.manifold_dim() == 3);
  CHECK(family.has_analytic_derivative());
  const Matrix h = family({0.1, 0.2, 0.3});
  // B . sigma = [[z, x - i y], [x + i y, -z]]
  CHECK(h(0, 0).real() == doctest::Approx(0.3));
  CHECK(h(0, 1).real() == doctest::Approx(0.1));
  CHECK(h(0, 1).imag() == doctest::Approx(-0.2));
  // Linear family: central finite differences are exact, so the analytic
  // derivative and the FD fallback must agree to rounding.
  const HamiltonianFamily fd_only(
      2, 3, [&family](const ParameterPoint& p) { return family(p); });
  for (int axis = 0; axis < 3; ++axis) {
    const Matrix a = family.derivative({0.1, 0.2, 0.3}, axis);
    const Matrix b = fd_only.derivative({0.1, 0.2, 0.3}, axis);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("finite-difference derivative is O(h^2) accurate") {
  // Nonlinear scalar family with a known derivative.
  const HamiltonianFamily family(
      2, 1,
      [](const ParameterPoint& p) -> Matrix {
        Matrix h(2, 2);
        h << std::sin(p[0]), p[0] * p[0], p[0] * p[0], -std::sin(p[0]);
        return h;
      });
  const ParameterPoint p{0.7};
  Matrix exact(2, 2);
  exact << std::cos(0.7), 1.4, 1.4, -std::cos(0.7);
  const double err_h = (family.derivative(p, 0, 1e-2) - exact)
                           .cwiseAbs()
                           .maxCoeff();
  const double err_h2 = (family.derivative(p, 0, 5e-3) - exact)
                            .cwiseAbs()
                            .maxCoeff();
  CHECK(err_h < 1e-4);
  // Halving h divides the error by ~4.
  CHECK(err_h / err_h2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("xy-qubit eigenvalues are +- Lambda_k") {
  const int M = 7;
  const int k = 2;
  const int N = 2 * M + 1;
  const HamiltonianFamily family = make_xy_qubit(M, k);
  CHECK(family.manifold_dim() == 3);
  const double lambda = 0.3, gamma = 0.8;
  const double x = 2.0 * kPi * k / N;
  const double eps = std::cos(x) - lambda;
  const double big_lambda =
      std::sqrt(eps * eps + gamma * gamma * std::sin(x) * std::sin(x));
  const EigenSystem eigs = eigensystem(family({lambda, gamma, 0.4}));
  CHECK(eigs.eigenvalues[0] == doctest::Approx(-big_lambda).epsilon(1e-12));
  CHECK(eigs.eigenvalues[1] == doctest::Approx(big_lambda).epsilon(1e-12));
}

TEST_CASE("family ids resolve and bad ids throw") {
  CHECK(family_from_id("two-level-real").manifold_dim() == 2);
  CHECK(family_from_id("spin-half").manifold_dim() == 3);
  CHECK(family_from_id("xy-qubit(3)", 5).manifold_dim() == 3);
  CHECK_THROWS_AS(family_from_id("no-such-family"), ConfigError);
  CHECK_THROWS_AS(family_from_id("xy-qubit(9)", 5), ConfigError);
}

TEST_CASE("point dimension mismatches are rejected") {
  const HamiltonianFamily family = make_spin_half();
  CHECK_THROWS_AS(family({0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(family.derivative({0.1}, 0), std::invalid_argument);
}

TEST_CASE("expression parser evaluates the documented grammar") {
  const std::vector<std::string> params{"x", "y"};
  CHECK(Expression::parse("2*x + sin(pi*y)^2", params).evaluate({3.0, 0.5}) ==
        doctest::Approx(7.0));
  CHECK(Expression::parse("-x^2", params).evaluate({2.0, 0.0}) ==
        doctest::Approx(-4.0));
  CHECK(Expression::parse("2^3^2", params).evaluate({0.0, 0.0}) ==
        doctest::Approx(512.0));  // right-associative
  CHECK(Expression::parse("sqrt(abs(-9))", params).evaluate({0.0, 0.0}) ==
        doctest::Approx(3.0));
  CHECK(Expression::parse("exp(log(5))", params).evaluate({0.0, 0.0}) ==
        doctest::Approx(5.0));
  CHECK(Expression::parse("(x + y) / 2", params).evaluate({1.0, 3.0}) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(Expression::parse("x +", params), ConfigError);
  CHECK_THROWS_AS(Expression::parse("bogus(3)", params), ConfigError);
  CHECK_THROWS_AS(Expression::parse("x (", params), ConfigError);
}

TEST_CASE("family file reproduces two-level-real") {
  const std::string text = R"(# x sigma_x + z sigma_z
params x z
dim 2
term x
0 0   1 0
1 0   0 0
term z
1 0   0 0
0 0  -1 0
)";
  const HamiltonianFamily family = parse_family_text(text);
  CHECK(family.dim() == 2);
  CHECK(family.manifold_dim() == 2);
  const HamiltonianFamily builtin = make_two_level_real();
  for (const ParameterPoint p : {ParameterPoint{0.3, -0.4},
                                 ParameterPoint{-1.0, 2.0}}) {
    CHECK((family(p) - builtin(p)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("family file rejects malformed input") {
  // Non-Hermitian term matrix.
  CHECK_THROWS_AS(parse_family_text("params x\ndim 2\nterm x\n"
                                    "0 0 1 0\n2 0 0 0\n"),
                  ConfigError);
  // Wrong entry count.
  CHECK_THROWS_AS(parse_family_text("params x\ndim 2\nterm x\n0 0 1 0\n"),
                  ConfigError);
  // Entries before any term.
  CHECK_THROWS_AS(parse_family_text("params x\ndim 2\n0 0 1 0 1 0 0 0\n"),
                  ConfigError);
  // Missing params.
  CHECK_THROWS_AS(parse_family_text("dim 2\nterm 1\n0 0 1 0\n1 0 0 0\n"),
                  ConfigError);
  // Unknown parameter in a term expression.
  CHECK_THROWS_AS(parse_family_text("params x\ndim 1\nterm q\n1 0\n"),
                  ConfigError);
}
