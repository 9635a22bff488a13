#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace berry {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest matrix dimension accepted by the dense solver.
inline constexpr int kMaxMatrixDim = 512;

// max |H(i,j) - conj(H(j,i))| relative to the matrix scale.
double hermiticity_defect(const Matrix& H);

bool is_hermitian(const Matrix& H, double tol = 1e-12);

// Full spectral resolution of a Hermitian matrix. Eigenvalues ascending,
// eigenvectors orthonormal columns in the same order, gauge-fixed so the
// first component with |v_i| > 1e-8 is real positive.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // column m pairs with eigenvalues[m]
  double residual = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  Vector vector(int m) const { return eigenvectors.col(m); }
};

// Throws std::invalid_argument for non-Hermitian or oversized input and
// ConvergenceError if the residual exceeds tol * max(1, spectral scale).
EigenSystem eigensystem(const Matrix& H, double tol = 1e-10,
                        int max_dim = kMaxMatrixDim);

// Eigenvalue multiplicities, clustering consecutive values whose spacing is
// below cluster_tol, ordered by ascending eigenvalue. Entries sum to dim.
std::vector<int> degeneracy_vector(const EigenSystem& eigs, double cluster_tol);

}  // namespace berry
