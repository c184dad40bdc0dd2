#include "loglin/invariant_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "loglin/errors.hpp"

namespace loglin {

std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  if (n < 1) throw InvalidArgument("fibonacci_sphere needs n >= 1");
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

std::vector<AlgebraVector> ellipsoid_boundary(const Eigen::Matrix3d& P, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P);
  if (es.eigenvalues().minCoeff() <= 0.0) throw InvalidArgument("ellipsoid shape must be positive definite");
  const Eigen::Matrix3d root_inv =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  std::vector<AlgebraVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const Eigen::Vector3d& u : fibonacci_sphere(n)) out.push_back(root_inv * u);
  return out;
}

void check_angle_guard(const Eigen::Matrix3d& P) {
  const double extent = std::sqrt(P.inverse()(2, 2));
  if (!(extent < std::numbers::pi - se2::kBranchGuard)) {
    throw AngleWrap("ellipsoid heading extent reaches +-pi; log coordinates are not valid there");
  }
}

double sigma_max_over_ellipsoid(const InvariantEllipsoid& E, int n) {
  check_angle_guard(E.P);
  double s = 0.0;
  for (const AlgebraVector& z : ellipsoid_boundary(E.P, n)) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(se2::left_distortion(z));
    s = std::max(s, svd.singularValues()(0));
  }
  return kSampleMargin * s;
}

double no_inversion_bound(const InvariantEllipsoid& E, const ControlConfig& cfg, int n) {
  check_angle_guard(E.P);
  double b = 0.0;
  for (const AlgebraVector& z : ellipsoid_boundary(E.P, n)) {
    b = std::max(b, no_inversion_residual(z, cfg).norm());
  }
  return kSampleMargin * b;
}

namespace {

// Shared driver; a non-null cfg adds the no-inversion residual to rho.
Algorithm1Result iterate(const PolytopicSystem& sys, const ControlConfig* cfg,
                         const Algorithm1Options& options) {
  if (!(options.sigma0 >= 1.0)) throw InvalidArgument("algorithm1: sigma0 must be >= 1");
  if (!(options.eps > 0.0)) throw InvalidArgument("algorithm1: eps must be positive");
  const double wnorm = sys.w_bound.norm();

  Algorithm1Result res;
  double sigma = options.sigma0;
  double beta = 0.0;
  for (int it = 1; it <= options.max_iter; ++it) {
    IterationRecord rec;
    rec.sigma = sigma;
    rec.beta = beta;
    rec.rho = sigma * wnorm + beta;
    InvariantEllipsoid E = invariant_ellipsoid(sys.vertices, rec.rho, options.lmi);
    rec.sigma_max = sigma_max_over_ellipsoid(E);
    rec.beta_max = cfg ? no_inversion_bound(E, *cfg) : 0.0;
    res.history.push_back(rec);
    res.iterations = it;

    // Without disturbance and residual, rho = 0 whatever sigma is.
    if (wnorm == 0.0 && rec.beta_max == 0.0 && beta == 0.0) {
      E.sigma = std::max(sigma, rec.sigma_max);
      res.ellipsoid = E;
      res.sigma_final = E.sigma;
      res.sigma_max = rec.sigma_max;
      return res;
    }

    const double ds = sigma - rec.sigma_max;
    const double db = beta - rec.beta_max;
    const bool close = std::abs(ds) < options.eps && std::abs(db) < options.eps;
    if (close && ds >= 0.0 && db >= 0.0) {
      E.sigma = sigma;
      res.ellipsoid = E;
      res.sigma_final = sigma;
      res.sigma_max = rec.sigma_max;
      res.beta = beta;
      return res;
    }
    if (close) {
      // Only the bound that fell short is pushed up.
      if (ds < 0.0) sigma = rec.sigma_max + 0.5 * options.eps;
      if (db < 0.0) beta = rec.beta_max + 0.5 * options.eps;
    } else {
      sigma = std::max(1.0, rec.sigma_max);
      beta = rec.beta_max;
    }
  }
  throw NoConvergence("algorithm1: distortion bound did not converge");
}

}  // namespace

Algorithm1Result algorithm1(const PolytopicSystem& sys, const Algorithm1Options& options) {
  return iterate(sys, nullptr, options);
}

Algorithm1Result no_inversion_ellipsoid(const PolytopicSystem& sys, const ControlConfig& cfg,
                                        const Algorithm1Options& options) {
  return iterate(sys, &cfg, options);
}

bool SaturationBox::contains(const AlgebraVector& u) const {
  return (u.cwiseAbs().array() <= bound.array()).all();
}

SaturationBox saturation_box(const InvariantEllipsoid& E, const ControlConfig& cfg, ControlMode mode, int n) {
  check_angle_guard(E.P);
  SaturationBox box;
  for (const AlgebraVector& z : ellipsoid_boundary(E.P, n)) {
    box.bound = box.bound.cwiseMax(feedback(z, cfg, mode).cwiseAbs());
  }
  box.bound *= kSampleMargin;
  return box;
}

}  // namespace loglin
