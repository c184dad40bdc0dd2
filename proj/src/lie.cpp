#include "loglin/lie.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "loglin/errors.hpp"

namespace loglin {
namespace {

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

// The helpers below avoid the cancellation in 1 - cos t, t - sin t and
// 1 - (t/2) cot(t/2), which would otherwise cost half the digits just above
// the Taylor switch.

// 1 - cos t
double one_minus_cos(double t) {
  const double s = std::sin(0.5 * t);
  return 2.0 * s * s;
}

// t - sin t, by its series for |t| < 1 (terms fall by t^2 / 90 or faster).
double t_minus_sin(double t) {
  if (std::abs(t) >= 1.0) return t - std::sin(t);
  const double t2 = t * t;
  double term = t * t2 / 6.0, sum = 0.0;
  for (int k = 1; k <= 9; ++k) {
    sum += term;
    term *= -t2 / static_cast<double>((2 * k + 2) * (2 * k + 3));
  }
  return sum;
}

// 1 - (t/2) cot(t/2) = sum_n |B_2n| t^2n / (2n)!, ratio about (t / 2 pi)^2.
double one_minus_half_cot(double t) {
  if (std::abs(t) >= 1.0) return 1.0 - 0.5 * t / std::tan(0.5 * t);
  static constexpr double kCoeff[] = {1.0 / 12.0, 1.0 / 720.0, 1.0 / 30240.0, 1.0 / 1209600.0,
                                      1.0 / 47900160.0, 691.0 / 1307674368000.0,
                                      1.0 / 74724249600.0};
  const double t2 = t * t;
  double power = t2, sum = 0.0;
  for (double c : kCoeff) {
    sum += c * power;
    power *= t2;
  }
  return sum;
}

// sin(t)/t
double sinc(double t) {
  if (std::abs(t) < se2::kSeriesThreshold) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0));
  }
  return std::sin(t) / t;
}

// (1 - cos t)/t
double cosc(double t) {
  if (std::abs(t) < se2::kSeriesThreshold) {
    const double t2 = t * t;
    return t / 2.0 * (1.0 - t2 / 12.0 * (1.0 - t2 / 30.0));
  }
  return one_minus_cos(t) / t;
}

// -(t/2) cot(t/2) = t sin t / (2 (cos t - 1)); the diagonal entry of U.
double half_cot(double t) {
  if (std::abs(t) < se2::kSeriesThreshold) {
    const double t2 = t * t;
    return -1.0 + t2 / 12.0 + t2 * t2 / 720.0 + t2 * t2 * t2 / 30240.0;
  }
  return -0.5 * t / std::tan(0.5 * t);
}

}  // namespace

Eigen::Matrix2d rotation2d(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

SE2::SE2(double theta, const Eigen::Vector2d& p) : theta_(wrap_angle(theta)), p_(p) {}

SE2 SE2::FromMatrix(const Eigen::Matrix3d& m, double tol) {
  const Eigen::Matrix2d r = m.topLeftCorner<2, 2>();
  if ((r.transpose() * r - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > tol ||
      std::abs(r.determinant() - 1.0) > tol) {
    throw InvalidArgument("SE2: rotation block is not in SO(2)");
  }
  if (std::abs(m(2, 0)) > tol || std::abs(m(2, 1)) > tol || std::abs(m(2, 2) - 1.0) > tol) {
    throw InvalidArgument("SE2: bottom row must be (0, 0, 1)");
  }
  return SE2(std::atan2(r(1, 0), r(0, 0)), m.topRightCorner<2, 1>());
}

Eigen::Matrix2d SE2::rotation() const { return rotation2d(theta_); }

Eigen::Matrix3d SE2::matrix() const {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m.topLeftCorner<2, 2>() = rotation();
  m.topRightCorner<2, 1>() = p_;
  return m;
}

SE2 SE2::inverse() const { return SE2(-theta_, -(rotation().transpose() * p_)); }

SE2 SE2::operator*(const SE2& other) const {
  return SE2(theta_ + other.theta_, p_ + rotation() * other.p_);
}

Eigen::Vector2d SE2::operator*(const Eigen::Vector2d& point) const {
  return rotation() * point + p_;
}

namespace se2 {

AlgebraMatrix wedge(const AlgebraVector& z) {
  AlgebraMatrix m;
  m << 0.0, -z(2), z(0),
       z(2), 0.0, z(1),
       0.0, 0.0, 0.0;
  return m;
}

AlgebraVector vee(const AlgebraMatrix& m) {
  const bool ok = std::abs(m(0, 0)) <= kStructureTol && std::abs(m(1, 1)) <= kStructureTol &&
                  std::abs(m(0, 1) + m(1, 0)) <= kStructureTol &&
                  m.row(2).cwiseAbs().maxCoeff() <= kStructureTol;
  if (!ok) throw StructureViolation("vee: matrix is not an element of se(2)");
  return AlgebraVector(m(0, 2), m(1, 2), m(1, 0));
}

SE2 exp(const AlgebraVector& z) {
  const double t = z(2);
  const double a = sinc(t), b = cosc(t);
  Eigen::Matrix2d v;
  v << a, -b, b, a;
  return SE2(t, v * z.head<2>());
}

AlgebraVector log(const SE2& X) {
  const double t = X.angle();
  if (std::abs(t) > std::numbers::pi - kBranchGuard) {
    throw BranchSingularity("log: rotation angle within branch guard of +-pi");
  }
  const double a = sinc(t), b = cosc(t);
  // V = aI + bJ, so V^-1 = (aI - bJ) / (a^2 + b^2).
  Eigen::Matrix2d vinv;
  vinv << a, b, -b, a;
  vinv /= a * a + b * b;
  AlgebraVector z;
  z.head<2>() = vinv * X.translation();
  z(2) = t;
  return z;
}

AdjointMatrix adjoint(const SE2& X) {
  AdjointMatrix m = AdjointMatrix::Identity();
  m.topLeftCorner<2, 2>() = X.rotation();
  m(0, 2) = X.translation().y();
  m(1, 2) = -X.translation().x();
  return m;
}

AdjointMatrix ad(const AlgebraVector& z) {
  AdjointMatrix m;
  m << 0.0, -z(2), z(1),
       z(2), 0.0, -z(0),
       0.0, 0.0, 0.0;
  return m;
}

namespace {

// sum_{k < terms} sign^k ad^k / (k+1)!
AdjointMatrix ad_series(const AlgebraVector& z, int terms, double sign) {
  if (terms < 1) throw InvalidArgument("series needs at least one term");
  const AdjointMatrix a = sign * ad(z);
  AdjointMatrix power = AdjointMatrix::Identity();
  AdjointMatrix sum = AdjointMatrix::Zero();
  double factorial = 1.0;
  for (int k = 0; k < terms; ++k) {
    factorial *= static_cast<double>(k + 1);
    sum += power / factorial;
    power = power * a;
  }
  return sum;
}

}  // namespace

AdjointMatrix dexp_series(const AlgebraVector& z, int terms) { return ad_series(z, terms, -1.0); }

AdjointMatrix left_distortion_inv_series(const AlgebraVector& z, int terms) {
  return -ad_series(z, terms, 1.0);
}

AdjointMatrix right_distortion_inv_series(const AlgebraVector& z, int terms) {
  return -ad_series(z, terms, -1.0);
}

AdjointMatrix left_distortion_inv(const AlgebraVector& z) {
  const double t = z(2);
  if (std::abs(t) < kSeriesThreshold) return left_distortion_inv_series(z, kSeriesTerms);
  const double s = std::sin(t), omc = one_minus_cos(t);
  const double t2 = t * t;
  const double gamma = omc / t2;
  const double delta = t_minus_sin(t) / t2;
  AdjointMatrix m;
  m << -s / t, omc / t, -(delta * z(0) + gamma * z(1)),
       -omc / t, -s / t, gamma * z(0) - delta * z(1),
       0.0, 0.0, -1.0;
  return m;
}

AdjointMatrix left_distortion(const AlgebraVector& z) {
  const double t = z(2);
  if (std::abs(t) > std::numbers::pi - kBranchGuard) {
    throw BranchSingularity("left distortion: |theta| within branch guard of pi");
  }
  const double c = half_cot(t);
  const double d = t / 2.0;
  // g = -(1 + c) / t, expanded near zero where 1 + c = t^2/12 + t^4/720 + ...
  double g;
  if (std::abs(t) < kSeriesThreshold) {
    const double t2 = t * t;
    g = -t * (1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0);
  } else {
    g = -one_minus_half_cot(t) / t;
  }
  AdjointMatrix m;
  m << c, -d, g * z(0) + 0.5 * z(1),
       d, c, g * z(1) - 0.5 * z(0),
       0.0, 0.0, -1.0;
  return m;
}

AdjointMatrix right_distortion_inv(const AlgebraVector& z) {
  return right_distortion_inv_series(z, kSeriesTerms);
}

AdjointMatrix right_distortion(const AlgebraVector& z) {
  const AdjointMatrix minv = right_distortion_inv(z);
  Eigen::JacobiSVD<AdjointMatrix> svd(minv);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 0.0) || sv(0) / sv(2) > 1e8) {
    throw BranchSingularity("right distortion: inverse is ill-conditioned");
  }
  return minv.inverse();
}

}  // namespace se2
}  // namespace loglin
