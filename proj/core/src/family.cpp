#include "berry/family.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "berry/errors.hpp"

namespace berry {

namespace {

Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix pauli_y() {
  Matrix s(2, 2);
  s << 0, Complex(0, -1), Complex(0, 1), 0;
  return s;
}

Matrix pauli_z() {
  Matrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

}  // namespace

HamiltonianFamily::HamiltonianFamily(int dim, int manifold_dim,
                                     Evaluator evaluate, Derivative derivative,
                                     std::string name)
    : dim_(dim),
      manifold_dim_(manifold_dim),
      evaluate_(std::move(evaluate)),
      derivative_(std::move(derivative)),
      name_(std::move(name)) {
  if (dim_ < 1) throw std::invalid_argument("family: dimension must be >= 1");
  if (manifold_dim_ < 1) {
    throw std::invalid_argument("family: manifold dimension must be >= 1");
  }
  if (!evaluate_) throw std::invalid_argument("family: evaluator required");
}

void HamiltonianFamily::check_point(const ParameterPoint& p) const {
  if (static_cast<int>(p.size()) != manifold_dim_) {
    throw std::invalid_argument(
        "family '" + name_ + "': point has dimension " +
        std::to_string(p.size()) + ", expected " +
        std::to_string(manifold_dim_));
  }
  for (double c : p) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("family '" + name_ +
                                  "': non-finite coordinate");
    }
  }
}

Matrix HamiltonianFamily::operator()(const ParameterPoint& p) const {
  check_point(p);
  return evaluate_(p);
}

Matrix HamiltonianFamily::derivative(const ParameterPoint& p, int axis,
                                     double h) const {
  check_point(p);
  if (axis < 0 || axis >= manifold_dim_) {
    throw std::invalid_argument("family: derivative axis out of range");
  }
  if (derivative_) return derivative_(p, axis);
  ParameterPoint plus = p, minus = p;
  plus[axis] += h;
  minus[axis] -= h;
  return (evaluate_(plus) - evaluate_(minus)) / (2.0 * h);
}

HamiltonianFamily make_two_level_real() {
  return HamiltonianFamily(
      2, 2,
      [](const ParameterPoint& p) -> Matrix {
        return p[0] * pauli_x() + p[1] * pauli_z();
      },
      [](const ParameterPoint&, int axis) -> Matrix {
        return axis == 0 ? pauli_x() : pauli_z();
      },
      "two-level-real");
}

HamiltonianFamily make_spin_half() {
  return HamiltonianFamily(
      2, 3,
      [](const ParameterPoint& p) -> Matrix {
        return p[0] * pauli_x() + p[1] * pauli_y() + p[2] * pauli_z();
      },
      [](const ParameterPoint&, int axis) -> Matrix {
        switch (axis) {
          case 0: return pauli_x();
          case 1: return pauli_y();
          default: return pauli_z();
        }
      },
      "spin-half");
}

HamiltonianFamily make_xy_qubit(int modes, int k) {
  if (modes < 1) throw std::invalid_argument("xy-qubit: modes must be >= 1");
  if (k < 1 || k > modes) {
    throw std::invalid_argument("xy-qubit: mode index out of 1..M");
  }
  const double x_k = 2.0 * std::numbers::pi * k / (2 * modes + 1);
  std::string name = "xy-qubit(" + std::to_string(k) + ")";
  // The two-level Hamiltonian whose ground state is the mode-k qubit of the
  // XY ground state: H = -Lambda_k n.sigma with Bloch vector
  //   n = (-sin theta_k sin 2 phi, sin theta_k cos 2 phi, cos theta_k).
  return HamiltonianFamily(
      2, 3,
      [x_k](const ParameterPoint& p) -> Matrix {
        const double lambda = p[0], gamma = p[1], phi = p[2];
        const double eps = std::cos(x_k) - lambda;
        const double off = gamma * std::sin(x_k);
        const double big_lambda = std::hypot(eps, off);
        if (big_lambda == 0.0) return Matrix::Zero(2, 2);
        const double cos_theta = eps / big_lambda;
        const double sin_theta = off / big_lambda;
        const double nx = -sin_theta * std::sin(2.0 * phi);
        const double ny = sin_theta * std::cos(2.0 * phi);
        const double nz = cos_theta;
        return -big_lambda *
               (nx * pauli_x() + ny * pauli_y() + nz * pauli_z());
      },
      nullptr, name);
}

HamiltonianFamily family_from_id(const std::string& id, int modes) {
  if (id == "two-level-real") return make_two_level_real();
  if (id == "spin-half") return make_spin_half();
  if (id == "xy-qubit") return make_xy_qubit(modes, 1);
  if (id.rfind("xy-qubit(", 0) == 0 && id.back() == ')') {
    const std::string inner = id.substr(9, id.size() - 10);
    std::size_t pos = 0;
    int k = 0;
    try {
      k = std::stoi(inner, &pos);
    } catch (const std::exception&) {
      throw ConfigError("family", "bad xy-qubit mode index '" + inner + "'");
    }
    if (pos != inner.size()) {
      throw ConfigError("family", "bad xy-qubit mode index '" + inner + "'");
    }
    try {
      return make_xy_qubit(modes, k);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("family", e.what());
    }
  }
  throw ConfigError("family", "unknown family identifier '" + id + "'");
}

}  // namespace berry
