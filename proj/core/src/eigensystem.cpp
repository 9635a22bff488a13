#include "berry/eigensystem.hpp"

#include <cmath>
#include <stdexcept>

#include "berry/errors.hpp"

namespace berry {

double hermiticity_defect(const Matrix& H) {
  double scale = H.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const Matrix& H, double tol) {
  return H.rows() == H.cols() && hermiticity_defect(H) <= tol;
}

EigenSystem eigensystem(const Matrix& H, double tol, int max_dim) {
  if (H.rows() != H.cols()) {
    throw std::invalid_argument("eigensystem: matrix is not square");
  }
  if (H.rows() > max_dim) {
    throw std::invalid_argument("eigensystem: dimension " +
                                std::to_string(H.rows()) +
                                " exceeds the cap of " +
                                std::to_string(max_dim));
  }
  if (!is_hermitian(H, 1e-12)) {
    throw std::invalid_argument("eigensystem: matrix is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigensystem: solver did not converge");
  }

  EigenSystem out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();

  // Deterministic gauge: the first component with |v_i| > 1e-8 is made real
  // positive.
  const int d = out.dim();
  for (int m = 0; m < d; ++m) {
    for (int i = 0; i < d; ++i) {
      Complex c = out.eigenvectors(i, m);
      if (std::abs(c) > 1e-8) {
        out.eigenvectors.col(m) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }

  double scale = std::max(1.0, out.eigenvalues.cwiseAbs().maxCoeff());
  out.residual = (H * out.eigenvectors -
                  out.eigenvectors * out.eigenvalues.asDiagonal())
                     .cwiseAbs()
                     .maxCoeff();
  if (out.residual > tol * scale) {
    throw ConvergenceError("eigensystem: residual " +
                           std::to_string(out.residual) +
                           " exceeds tolerance");
  }
  return out;
}

std::vector<int> degeneracy_vector(const EigenSystem& eigs,
                                   double cluster_tol) {
  std::vector<int> multiplicities;
  const int d = eigs.dim();
  int current = 1;
  for (int m = 1; m < d; ++m) {
    if (eigs.eigenvalues[m] - eigs.eigenvalues[m - 1] < cluster_tol) {
      ++current;
    } else {
      multiplicities.push_back(current);
      current = 1;
    }
  }
  if (d > 0) multiplicities.push_back(current);
  return multiplicities;
}

}  // namespace berry
