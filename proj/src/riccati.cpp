#include "loglin/riccati.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "loglin/errors.hpp"

namespace loglin {

double spectral_abscissa(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A^T X + X A) = (I kron A^T + A^T kron I) vec(X), column-major vec.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += I(i, j) * A.transpose();
      L.block(i * n, j * n, n, n) += A(j, i) * I;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(M.data(), n * n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(L);
  if (!lu.isInvertible()) throw IllConditioned("Lyapunov operator is singular");
  const Eigen::VectorXd x = lu.solve(rhs);
  Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (X + X.transpose());
}

double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd S = B * R.llt().solve(B.transpose());
  return (A.transpose() * P + P * A - P * S * P + Q).norm();
}

RiccatiSolution care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const RiccatiOptions& options) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols()) {
    throw InvalidArgument("care_solve: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> rllt(R);
  if (rllt.info() != Eigen::Success) throw InvalidArgument("care_solve: R must be positive definite");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(B.cols(), n);
  if (spectral_abscissa(A) >= 0.0) {
    bool found = false;
    double c = 1.0;
    for (int d = 0; d <= options.max_seed_doublings; ++d, c *= 2.0) {
      K = -c * B.transpose();
      if (spectral_abscissa(A + B * K) < 0.0) {
        found = true;
        break;
      }
    }
    if (!found) throw NotStabilizable("care_solve: no stabilizing seed gain found");
  }

  RiccatiSolution sol;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd Ak = A + B * K;
    sol.P = lyapunov_solve(Ak, Q + K.transpose() * R * K);
    K = -rllt.solve(B.transpose() * sol.P);
    sol.iterations = it;
    sol.residual = care_residual(A, B, Q, R, sol.P);
    if (sol.residual <= options.tolerance) {
      sol.K = K;
      return sol;
    }
  }
  throw NoConvergence("care_solve: Kleinman iteration did not reach the residual tolerance");
}

Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const RiccatiSolution sol = care_solve(A, B, Q, R);
  if (spectral_abscissa(A + B * sol.K) >= 0.0) {
    throw NotStabilizable("lqr_gain: closed loop is not Hurwitz");
  }
  return sol.K;
}

}  // namespace loglin
