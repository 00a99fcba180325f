#pragma once

#include <Eigen/Dense>

namespace opshape {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column j pairs with values(j)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm is at most rel_tol * ||A||_F.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double rel_tol = 1e-13,
                            int max_sweeps = 100);

}  // namespace opshape
