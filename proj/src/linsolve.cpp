#include "vem/linsolve.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "vem/error.hpp"

namespace vem {

Eigen::MatrixXd solve_dense(const DenseMatrix& A, const Eigen::MatrixXd& b) {
  if (A.rows() != A.cols() || A.rows() != b.rows())
    throw Error("solve", "dense solve: dimension mismatch");
  if (A.rows() == 0) return Eigen::MatrixXd(0, b.cols());
  Eigen::FullPivLU<DenseMatrix> lu(A);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw Error("solve", "dense solve: matrix is singular to tolerance");
  Eigen::MatrixXd x = lu.solve(b);
  const double scale = A.norm() * x.norm() + b.norm();
  if ((A * x - b).norm() > 1e-10 * scale)
    throw Error("solve", "dense solve: residual check failed");
  return x;
}

Eigen::VectorXd solve_dense(const DenseMatrix& A, const Eigen::VectorXd& b) {
  return solve_dense(A, Eigen::MatrixXd(b)).col(0);
}

Eigen::VectorXd solve_cholesky(const DenseMatrix& A, const Eigen::VectorXd& b) {
  Eigen::LLT<DenseMatrix> llt(A);
  if (llt.info() != Eigen::Success) throw Error("solve", "Cholesky factorisation failed");
  return llt.solve(b);
}

KktSolution solve_kkt(const DenseMatrix& H, const DenseMatrix& C, const Eigen::MatrixXd& g,
                      const Eigen::MatrixXd& m) {
  const Eigen::Index n = H.rows();
  const Eigen::Index k = C.rows();
  DenseMatrix K = DenseMatrix::Zero(n + k, n + k);
  K.topLeftCorner(n, n) = H;
  if (k > 0) {
    K.topRightCorner(n, k) = C.transpose();
    K.bottomLeftCorner(k, n) = C;
  }
  Eigen::MatrixXd rhs(n + k, g.cols());
  rhs.topRows(n) = g;
  if (k > 0) rhs.bottomRows(k) = m;
  const Eigen::MatrixXd sol = solve_dense(K, rhs);
  return {sol.topRows(n), sol.bottomRows(k)};
}

CgResult solve_cg(const SparseSym& A, const Eigen::VectorXd& b, const CgOptions& options,
                  const Eigen::VectorXd* x0) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n || (x0 && x0->size() != n))
    throw Error("solve", "CG: dimension mismatch");
  CgResult result;
  result.x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (n == 0 || bnorm == 0.0) {
    result.x.setZero();
    result.converged = true;
    return result;
  }
  const int max_iters = options.max_iterations > 0
                            ? options.max_iterations
                            : static_cast<int>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;

  Eigen::VectorXd inv_diag = A.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_diag(i) > 0.0)) throw Error("solve", "non-positive diagonal entry in CG matrix");
    inv_diag(i) = 1.0 / inv_diag(i);
  }

  Eigen::VectorXd r = b;
  if (x0) r.noalias() -= A * result.x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd q(n);
  double rz = r.dot(z);
  double rel = r.norm() / bnorm;
  if (options.checkpoint_every > 0) result.checkpoints.push_back(result.x);

  int it = 0;
  while (it < max_iters && rel > options.tolerance) {
    q.noalias() = A * p;
    const double alpha = rz / p.dot(q);
    result.x += alpha * p;
    r -= alpha * q;
    ++it;
    rel = r.norm() / bnorm;
    if (options.checkpoint_every > 0 && it % options.checkpoint_every == 0)
      result.checkpoints.push_back(result.x);
    if (rel <= options.tolerance) break;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  result.iterations = it;
  result.relative_residual = rel;
  result.converged = rel <= options.tolerance;
  return result;
}

}  // namespace vem
