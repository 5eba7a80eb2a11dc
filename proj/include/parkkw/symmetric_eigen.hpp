#pragma once

#include <Eigen/Dense>

namespace parkkw {

// M = vectors' * diag(values) * vectors, values sorted descending, rows of
// `vectors` orthonormal.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

// Cyclic Jacobi rotations on a small dense symmetric matrix. Stops once the
// off-diagonal Frobenius mass drops below 1e-12 * ||M||_F; throws
// NumericalFailure after 100 * n^2 sweeps.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& m);

}  // namespace parkkw
