#pragma once

#include <Eigen/Core>

namespace loglin {

struct RiccatiOptions {
  double tolerance = 1e-9;  // Frobenius norm of the CARE residual
  int max_iterations = 50;
  int max_seed_doublings = 10;
};

struct RiccatiSolution {
  Eigen::MatrixXd P;
  Eigen::MatrixXd K;  // u = K x, K = -R^-1 B^T P
  double residual = 0.0;
  int iterations = 0;
};

/// Largest real part over the eigenvalues of A.
double spectral_abscissa(const Eigen::MatrixXd& A);

/// Solves A^T P + P A - P B R^-1 B^T P + Q = 0 by Kleinman-Newton iteration.
///
/// Each step solves a Lyapunov equation through its Kronecker form. The seed
/// is K0 = 0 when A is Hurwitz, else K0 = -c B^T with c doubled from 1 until
/// A + B K0 is Hurwitz (NotStabilizable past 2^max_seed_doublings).
RiccatiSolution care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const RiccatiOptions& options = {});

/// Frobenius norm of A^T P + P A - P B R^-1 B^T P + Q.
double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R, const Eigen::MatrixXd& P);

/// Solves A^T X + X A + M = 0 (Kronecker form, small n only).
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& M);

/// LQR gain K = -R^-1 B^T P; checks that A + B K is Hurwitz.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

}  // namespace loglin
