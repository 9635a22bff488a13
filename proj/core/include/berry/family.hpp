#pragma once

#include <functional>
#include <string>
#include <vector>

#include "berry/eigensystem.hpp"

namespace berry {

// A point in the parameter manifold Q (dimension fixed per family).
using ParameterPoint = std::vector<double>;

// A smooth map from parameter points to d x d Hermitian matrices, optionally
// with analytic partial derivatives. Evaluators must be stateless: they are
// called concurrently from worker threads.
class HamiltonianFamily {
 public:
  using Evaluator = std::function<Matrix(const ParameterPoint&)>;
  using Derivative = std::function<Matrix(const ParameterPoint&, int axis)>;

  HamiltonianFamily(int dim, int manifold_dim, Evaluator evaluate,
                    Derivative derivative = nullptr, std::string name = "");

  int dim() const { return dim_; }
  int manifold_dim() const { return manifold_dim_; }
  const std::string& name() const { return name_; }
  bool has_analytic_derivative() const { return derivative_ != nullptr; }

  Matrix operator()(const ParameterPoint& p) const;

  // Analytic dH/d(axis) when supplied, otherwise a central finite difference
  // with step h (O(h^2) accurate).
  Matrix derivative(const ParameterPoint& p, int axis, double h = 1e-5) const;

 private:
  void check_point(const ParameterPoint& p) const;

  int dim_;
  int manifold_dim_;
  Evaluator evaluate_;
  Derivative derivative_;
  std::string name_;
};

// Built-in families.
//
//   two-level-real : H(x, z) = x sigma^x + z sigma^z           (q = 2)
//   spin-half      : H(B)    = B . sigma                       (q = 3)
//   xy-qubit       : the single-mode qubit of the XY chain,
//                    parameters (lambda, gamma, phi) at fixed (M, k) (q = 3)
HamiltonianFamily make_two_level_real();
HamiltonianFamily make_spin_half();
HamiltonianFamily make_xy_qubit(int modes, int k);

// Resolves "two-level-real", "spin-half", "xy-qubit" or "xy-qubit(k)".
// `modes` supplies M for the xy-qubit family (k defaults to the equatorial
// neighbourhood only via explicit selection; default k = 1).
HamiltonianFamily family_from_id(const std::string& id, int modes = 1);

}  // namespace berry
