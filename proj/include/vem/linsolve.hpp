#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace vem {

using DenseMatrix = Eigen::MatrixXd;
using SparseSym = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// LU with partial pivoting; throws if the relative residual exceeds 1e-10
/// or the matrix is numerically singular.
Eigen::MatrixXd solve_dense(const DenseMatrix& A, const Eigen::MatrixXd& b);
Eigen::VectorXd solve_dense(const DenseMatrix& A, const Eigen::VectorXd& b);

/// Cholesky solve of an SPD matrix; throws if the factorisation fails.
Eigen::VectorXd solve_cholesky(const DenseMatrix& A, const Eigen::VectorXd& b);

struct KktSolution {
  Eigen::MatrixXd x;            // primal, one column per right-hand side
  Eigen::MatrixXd multipliers;  // Lagrange multipliers
};

/// Minimise 1/2 x^T H x - g^T x subject to C x = m by factorising
/// [H C^T; C 0]. Columns of g and m are independent right-hand sides.
KktSolution solve_kkt(const DenseMatrix& H, const DenseMatrix& C, const Eigen::MatrixXd& g,
                      const Eigen::MatrixXd& m);

struct CgOptions {
  double tolerance = 1e-10;  // on ||r|| / ||b||
  int max_iterations = -1;   // -1: 50 sqrt(n) + 1000
  int checkpoint_every = 0;  // record the iterate every k iterations (0: never)
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<Eigen::VectorXd> checkpoints;  // iterates, starting with x0
};

/// Conjugate gradients with Jacobi preconditioning for SPD matrices,
/// started from `x0` when it is given.
CgResult solve_cg(const SparseSym& A, const Eigen::VectorXd& b, const CgOptions& options = {},
                  const Eigen::VectorXd* x0 = nullptr);

}  // namespace vem
