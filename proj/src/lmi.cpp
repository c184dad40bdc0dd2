#include "loglin/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "loglin/errors.hpp"

namespace loglin {

std::vector<AlgebraVector> ReferenceBox::corners() const {
  return {AlgebraVector(vx_min, vy, omega_min), AlgebraVector(vx_min, vy, omega_max),
          AlgebraVector(vx_max, vy, omega_min), AlgebraVector(vx_max, vy, omega_max)};
}

AlgebraVector ReferenceBox::center() const {
  return AlgebraVector(0.5 * (vx_min + vx_max), vy, 0.5 * (omega_min + omega_max));
}

bool ReferenceBox::contains(const AlgebraVector& lbar, double tol) const {
  return lbar(0) >= vx_min - tol && lbar(0) <= vx_max + tol && std::abs(lbar(1) - vy) <= tol &&
         lbar(2) >= omega_min - tol && lbar(2) <= omega_max + tol;
}

PolytopicSystem make_polytope(const ReferenceBox& box, const ControlConfig& cfg,
                              const Eigen::Vector3d& w_bound) {
  PolytopicSystem sys;
  sys.w_bound = w_bound;
  const Eigen::Matrix3d bk = cfg.B * cfg.K;
  for (const AlgebraVector& l : box.corners()) sys.vertices.push_back(-se2::ad(l) + bk);
  return sys;
}

Eigen::Vector3d InvariantEllipsoid::semi_axes() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P);
  Eigen::Vector3d axes = es.eigenvalues().cwiseSqrt().cwiseInverse();
  std::sort(axes.data(), axes.data() + 3);
  return axes;
}

double InvariantEllipsoid::geometric_mean_semi_axis() const {
  return std::pow(P.determinant(), -1.0 / 6.0);
}

double InvariantEllipsoid::extent(int i) const { return std::sqrt(P.inverse()(i, i)); }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Basis of symmetric 3x3 matrices: diagonal entries, then (0,1), (0,2), (1,2).
Eigen::Matrix3d sym_basis(int k) {
  static constexpr int rows[6] = {0, 1, 2, 0, 0, 1};
  static constexpr int cols[6] = {0, 1, 2, 1, 2, 2};
  Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
  e(rows[k], cols[k]) = 1.0;
  e(cols[k], rows[k]) = 1.0;
  return e;
}

Eigen::Matrix3d sym_from(const Eigen::VectorXd& x) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 6; ++k) m += x(k) * sym_basis(k);
  return m;
}

Eigen::VectorXd sym_to(const Eigen::Matrix3d& m) {
  Eigen::VectorXd x(6);
  x << m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2);
  return x;
}

// F(x) = F0 + sum_k x_k F_k, required positive definite.
struct AffineLmi {
  Eigen::MatrixXd F0;
  std::vector<Eigen::MatrixXd> Fk;
  bool objective = false;  // barrier weighted by t instead of 1

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd F = F0;
    for (std::size_t k = 0; k < Fk.size(); ++k) F += x(static_cast<Eigen::Index>(k)) * Fk[k];
    return F;
  }
};

struct BarrierProblem {
  Eigen::VectorXd c;
  std::vector<AffineLmi> lmis;

  // t c^T x - sum_j w_j log det F_j(x); +inf outside the domain.
  double value(double t, const Eigen::VectorXd& x) const {
    double v = t * c.dot(x);
    for (const AffineLmi& lmi : lmis) {
      Eigen::LLT<Eigen::MatrixXd> llt(lmi.eval(x));
      if (llt.info() != Eigen::Success) return kInf;
      const Eigen::VectorXd d = llt.matrixLLT().diagonal();
      if ((d.array() <= 0.0).any()) return kInf;
      const double logdet = 2.0 * d.array().log().sum();
      v -= (lmi.objective ? t : 1.0) * logdet;
    }
    return v;
  }

  double barrier_parameter() const {
    double m = 0.0;
    for (const AffineLmi& lmi : lmis) m += static_cast<double>(lmi.F0.rows());
    return m;
  }

  // Newton centering with backtracking; stops early when `stop(x)` holds.
  void center(double t, Eigen::VectorXd& x, const std::function<bool(const Eigen::VectorXd&)>& stop) const {
    const Eigen::Index n = x.size();
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd g = t * c;
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
      for (const AffineLmi& lmi : lmis) {
        const double w = lmi.objective ? t : 1.0;
        const Eigen::MatrixXd F = lmi.eval(x);
        const Eigen::MatrixXd Finv = F.llt().solve(Eigen::MatrixXd::Identity(F.rows(), F.cols()));
        std::vector<Eigen::MatrixXd> G(static_cast<std::size_t>(n));
        for (Eigen::Index k = 0; k < n; ++k) {
          G[static_cast<std::size_t>(k)] = Finv * lmi.Fk[static_cast<std::size_t>(k)];
          g(k) -= w * G[static_cast<std::size_t>(k)].trace();
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          for (Eigen::Index l = k; l < n; ++l) {
            const double h = w * (G[static_cast<std::size_t>(k)].cwiseProduct(
                                      G[static_cast<std::size_t>(l)].transpose()))
                                     .sum();
            H(k, l) += h;
            if (l != k) H(l, k) += h;
          }
        }
      }
      const Eigen::VectorXd dx = -H.ldlt().solve(g);
      const double decrement = -g.dot(dx);
      if (!std::isfinite(decrement) || decrement < 0.0) return;
      if (0.5 * decrement < 1e-11) return;
      const double f0 = value(t, x);
      double step = 1.0;
      Eigen::VectorXd xn = x;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        xn = x + step * dx;
        const double f1 = value(t, xn);
        if (f1 <= f0 - 0.25 * step * decrement) {
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) return;
      x = xn;
      if (stop && stop(x)) return;
    }
  }
};

Eigen::MatrixXd lyap_term(const Eigen::Matrix3d& A, const Eigen::Matrix3d& E, double alpha) {
  return A.transpose() * E + E * A + alpha * E;
}

// Finds P with A_i^T P + P A_i + alpha P < 0 at every vertex, I < P < L I.
std::optional<Eigen::Matrix3d> phase_one(const std::vector<Eigen::Matrix3d>& vertices, double alpha) {
  constexpr double kCond = 1e6;
  BarrierProblem prob;
  prob.c = Eigen::VectorXd::Zero(7);
  prob.c(6) = 1.0;
  for (const Eigen::Matrix3d& A : vertices) {
    AffineLmi lmi;
    lmi.F0 = Eigen::MatrixXd::Zero(3, 3);
    for (int k = 0; k < 6; ++k) lmi.Fk.push_back(-lyap_term(A, sym_basis(k), alpha));
    lmi.Fk.push_back(Eigen::MatrixXd::Identity(3, 3));
    prob.lmis.push_back(lmi);
  }
  AffineLmi lower, upper;
  lower.F0 = -Eigen::MatrixXd::Identity(3, 3);
  upper.F0 = kCond * Eigen::MatrixXd::Identity(3, 3);
  for (int k = 0; k < 6; ++k) {
    lower.Fk.push_back(sym_basis(k));
    upper.Fk.push_back(-sym_basis(k));
  }
  lower.Fk.push_back(Eigen::MatrixXd::Zero(3, 3));
  upper.Fk.push_back(Eigen::MatrixXd::Zero(3, 3));
  prob.lmis.push_back(lower);
  prob.lmis.push_back(upper);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(7);
  x.head(6) = sym_to(2.0 * Eigen::Matrix3d::Identity());
  double s0 = 0.0;
  for (const Eigen::Matrix3d& A : vertices) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(lyap_term(A, 2.0 * Eigen::Matrix3d::Identity(), alpha));
    s0 = std::max(s0, es.eigenvalues().maxCoeff());
  }
  x(6) = s0 + 1.0;

  const auto feasible = [](const Eigen::VectorXd& v) { return v(6) < 0.0; };
  const double m = prob.barrier_parameter();
  for (double t = 1.0; m / t > 1e-12; t *= 10.0) {
    prob.center(t, x, feasible);
    if (feasible(x)) return sym_from(x);
    if (x(6) - m / t > 0.0) return std::nullopt;
  }
  return std::nullopt;
}

bool is_pd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

}  // namespace

FixedAlphaSolution solve_fixed_alpha(const std::vector<Eigen::Matrix3d>& vertices, double rho,
                                     double alpha, const LmiOptions& options) {
  if (vertices.empty()) throw InvalidArgument("LMI needs at least one vertex");
  if (!(rho >= 0.0)) throw InvalidArgument("rho must be non-negative");
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");

  // With P~ = rho^2 P the constraint becomes the rho = 1 problem, so every
  // positive rho is solved in the same units and scaled back at the end.
  const double r = rho > 0.0 ? 1.0 : 0.0;
  const double cap = rho > 0.0 ? options.p_max * rho * rho : options.p_max;

  FixedAlphaSolution out;
  const std::optional<Eigen::Matrix3d> seed = phase_one(vertices, alpha);
  if (!seed) return out;

  BarrierProblem prob;
  prob.c = Eigen::VectorXd::Zero(6);
  for (const Eigen::Matrix3d& A : vertices) {
    AffineLmi lmi;
    lmi.F0 = Eigen::MatrixXd::Zero(6, 6);
    lmi.F0.bottomRightCorner(3, 3) = alpha * Eigen::MatrixXd::Identity(3, 3);
    for (int k = 0; k < 6; ++k) {
      Eigen::MatrixXd Fk = Eigen::MatrixXd::Zero(6, 6);
      const Eigen::Matrix3d E = sym_basis(k);
      Fk.topLeftCorner(3, 3) = -lyap_term(A, E, alpha);
      Fk.topRightCorner(3, 3) = -r * E;
      Fk.bottomLeftCorner(3, 3) = -r * E;
      lmi.Fk.push_back(Fk);
    }
    prob.lmis.push_back(lmi);
  }
  AffineLmi upper, logdet;
  upper.F0 = cap * Eigen::MatrixXd::Identity(3, 3);
  logdet.F0 = Eigen::MatrixXd::Zero(3, 3);
  logdet.objective = true;
  for (int k = 0; k < 6; ++k) {
    upper.Fk.push_back(-sym_basis(k));
    logdet.Fk.push_back(sym_basis(k));
  }
  prob.lmis.push_back(upper);
  prob.lmis.push_back(logdet);

  // Shrink the phase-one point until the Schur complement term is dominated.
  const Eigen::Matrix3d P1 = *seed;
  double min_margin = kInf;
  for (const Eigen::Matrix3d& A : vertices) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(-lyap_term(A, P1, alpha));
    min_margin = std::min(min_margin, es.eigenvalues().minCoeff());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es1(P1);
  const double pmax = es1.eigenvalues().maxCoeff();
  double eps = 0.5 * cap / pmax;
  if (r > 0.0) eps = std::min(eps, 0.5 * alpha * min_margin / (pmax * pmax));
  Eigen::VectorXd x = sym_to(eps * P1);
  for (int i = 0; i < 200 && !std::isfinite(prob.value(1.0, x)); ++i) {
    eps *= 0.5;
    x = sym_to(eps * P1);
  }
  if (!std::isfinite(prob.value(1.0, x))) return out;

  const double m = prob.barrier_parameter();
  for (double t = 1.0;; t *= 10.0) {
    prob.center(t, x, nullptr);
    if (m / t < options.gap_tolerance) break;
  }

  Eigen::Matrix3d P = sym_from(x);
  if (rho > 0.0) P /= rho * rho;
  if (!is_pd(P)) return out;
  out.feasible = true;
  out.P = 0.5 * (P + P.transpose());
  out.log_det = std::log(out.P.determinant());
  return out;
}

InvariantEllipsoid invariant_ellipsoid(const std::vector<Eigen::Matrix3d>& vertices, double rho,
                                       const LmiOptions& options) {
  if (options.alpha_scan < 2) throw InvalidArgument("alpha_scan must be >= 2");
  const double lo = std::log(options.alpha_min), hi = std::log(options.alpha_max);

  struct Best {
    double log_alpha = 0.0;
    FixedAlphaSolution sol;
  } best;
  best.sol.log_det = -kInf;

  const auto evaluate = [&](double la) {
    FixedAlphaSolution sol = solve_fixed_alpha(vertices, rho, std::exp(la), options);
    const double v = sol.feasible ? sol.log_det : -kInf;
    if (sol.feasible && v > best.sol.log_det) best = {la, sol};
    return v;
  };

  const int n = options.alpha_scan;
  std::vector<double> grid(static_cast<std::size_t>(n)), vals(static_cast<std::size_t>(n));
  int arg = -1;
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    vals[static_cast<std::size_t>(i)] = evaluate(grid[static_cast<std::size_t>(i)]);
    if (std::isfinite(vals[static_cast<std::size_t>(i)]) &&
        (arg < 0 || vals[static_cast<std::size_t>(i)] > vals[static_cast<std::size_t>(arg)])) {
      arg = i;
    }
  }
  if (arg < 0) throw Infeasible("invariant ellipsoid: no decay rate in range admits a solution");

  // Golden section on the bracket around the best grid point.
  double a = grid[static_cast<std::size_t>(std::max(arg - 1, 0))];
  double b = grid[static_cast<std::size_t>(std::min(arg + 1, n - 1))];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = evaluate(x1), f2 = evaluate(x2);
  for (int it = 0; it < options.golden_iterations; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = evaluate(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = evaluate(x2);
    }
  }

  InvariantEllipsoid E;
  E.P = best.sol.P;
  E.alpha = std::exp(best.log_alpha);
  E.rho = rho;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(E.P);
  E.capped = es.eigenvalues().maxCoeff() >= 0.999 * options.p_max;
  return E;
}

double vertex_lmi_residual(const InvariantEllipsoid& E, const std::vector<Eigen::Matrix3d>& vertices) {
  double worst = -kInf;
  for (const Eigen::Matrix3d& A : vertices) {
    Eigen::Matrix<double, 6, 6> M;
    M.topLeftCorner<3, 3>() = A.transpose() * E.P + E.P * A + E.alpha * E.P;
    M.topRightCorner<3, 3>() = E.rho * E.P;
    M.bottomLeftCorner<3, 3>() = E.rho * E.P;
    M.bottomRightCorner<3, 3>() = -E.alpha * Eigen::Matrix3d::Identity();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(M);
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

}  // namespace loglin
