#pragma once

#include <Eigen/Core>

namespace heckelab {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix.
/// Sweeps until the off-diagonal Frobenius norm is <= 1e-12 * ||M||_F.
/// Each eigenvector's largest-magnitude component is made positive.
/// Throws ErrorKind::NonSymmetric if |M - M^T| exceeds 1e-8 * max(1, max|M|).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& M);

}  // namespace heckelab
