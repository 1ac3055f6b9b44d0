#pragma once

#include <Eigen/Dense>

namespace sdpi {

/// Thin singular value decomposition M = U diag(S) V^T of an m x n matrix,
/// with k = min(m, n) columns in U and V and S sorted descending.
struct Svd {
  Eigen::MatrixXd u;  // m x k
  Eigen::VectorXd s;  // k
  Eigen::MatrixXd v;  // n x k
};

/// One-sided (Hestenes) Jacobi SVD. Deterministic, accurate to working
/// precision at the small sizes used here. Columns of U belonging to zero
/// singular values are completed to an orthonormal set.
Svd svd_dense(const Eigen::MatrixXd& m);

}  // namespace sdpi
