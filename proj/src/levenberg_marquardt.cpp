#include "threshgate/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace threshgate {
namespace {

struct Linearization {
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double rss = 0.0;
  bool finite = true;
};

Linearization linearize(const CurveModel& model, std::span<const double> xs, std::span<const double> ys,
                        const Eigen::VectorXd& p, bool with_jacobian) {
  const auto m = static_cast<Eigen::Index>(xs.size());
  const auto n = p.size();
  Linearization lin;
  lin.residuals.resize(m);
  if (with_jacobian) lin.jacobian.resize(m, n);
  std::vector<double> grad(static_cast<std::size_t>(n));
  const std::span<const double> pspan(p.data(), static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double value = model(pspan, xs[static_cast<std::size_t>(i)], grad);
    const double r = value - ys[static_cast<std::size_t>(i)];
    lin.residuals(i) = r;
    lin.rss += r * r;
    if (with_jacobian) {
      for (Eigen::Index j = 0; j < n; ++j) lin.jacobian(i, j) = grad[static_cast<std::size_t>(j)];
    }
  }
  lin.finite = std::isfinite(lin.rss) && (!with_jacobian || lin.jacobian.allFinite());
  return lin;
}

}  // namespace

LmResult levenberg_marquardt(const CurveModel& model, std::span<const double> xs, std::span<const double> ys,
                             std::vector<double> initial, const LmOptions& options) {
  const auto n = static_cast<Eigen::Index>(initial.size());
  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(initial.data(), n);

  LmResult result;
  auto finish = [&](bool converged, std::string reason) {
    result.params.assign(p.data(), p.data() + n);
    result.converged = converged;
    result.stop_reason = std::move(reason);
    return result;
  };

  Linearization cur = linearize(model, xs, ys, p, true);
  result.rss = cur.rss;
  result.rss_trace.push_back(cur.rss);
  if (!cur.finite) return finish(false, "non-finite residuals at start");

  double lambda = options.initial_damping;
  bool converged = false;
  std::string reason = "iteration cap";
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (cur.rss == 0.0) {
      converged = true;
      reason = "exact fit";
      break;
    }

    const Eigen::MatrixXd jtj = cur.jacobian.transpose() * cur.jacobian;
    const Eigen::VectorXd gradient = cur.jacobian.transpose() * cur.residuals;
    // Columns that vanish entirely would leave the damped system singular.
    const double diag_floor = 1e-12 * std::max(jtj.diagonal().maxCoeff(), std::numeric_limits<double>::min());
    Eigen::MatrixXd damped = jtj;
    for (Eigen::Index j = 0; j < n; ++j) damped(j, j) += lambda * std::max(jtj(j, j), diag_floor);

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
    Eigen::VectorXd step;
    if (ldlt.info() == Eigen::Success) step = ldlt.solve(-gradient);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || !damped.allFinite()) {
      reason = "damped normal equations not solvable";
      break;
    }

    // Geodesic acceleration: correct the step for the curvature of the residuals
    // along it, and reject steps whose correction is large relative to the step.
    const Eigen::VectorXd velocity = step;
    bool too_curved = false;
    if (options.max_acceleration_ratio > 0.0) {
      const double h = options.curvature_probe;
      const Linearization probe = linearize(model, xs, ys, p + h * velocity, false);
      if (probe.finite) {
        const Eigen::VectorXd rvv =
            (2.0 / h) * ((probe.residuals - cur.residuals) / h - cur.jacobian * velocity);
        const Eigen::VectorXd accel = ldlt.solve(-(cur.jacobian.transpose() * rvv));
        const Eigen::VectorXd scale = damped.diagonal().cwiseSqrt();
        const double ratio = 2.0 * scale.cwiseProduct(accel).norm() / scale.cwiseProduct(velocity).norm();
        if (accel.allFinite()) {
          step = velocity + 0.5 * accel;
          too_curved = !(ratio <= options.max_acceleration_ratio);
        }
      } else {
        too_curved = true;
      }
    }

    const double step_norm = step.cwiseAbs().maxCoeff();
    const Eigen::VectorXd trial_p = p + step;
    Linearization trial = linearize(model, xs, ys, trial_p, false);

    if (trial.finite && trial.rss < cur.rss && !too_curved) {
      const double rel_change = (cur.rss - trial.rss) / cur.rss;
      p = trial_p;
      cur = linearize(model, xs, ys, p, true);
      if (!cur.finite) {
        reason = "non-finite Jacobian";
        break;
      }
      result.rss = cur.rss;
      result.rss_trace.push_back(cur.rss);
      lambda /= options.damping_factor;
      if (rel_change < options.rel_rss_tol || step_norm < options.step_tol) {
        converged = true;
        reason = rel_change < options.rel_rss_tol ? "relative RSS change below tolerance"
                                                   : "parameter step below tolerance";
        break;
      }
    } else {
      lambda *= options.damping_factor;
      if (step_norm < options.step_tol) {
        converged = true;
        reason = "parameter step below tolerance";
        break;
      }
    }
  }

  if (!converged) return finish(false, reason);

  // Covariance at the solution, from the equilibrated normal matrix.
  const Eigen::MatrixXd jtj = cur.jacobian.transpose() * cur.jacobian;
  const Eigen::VectorXd diag = jtj.diagonal();
  if ((diag.array() > 0.0).all()) {
    const Eigen::VectorXd inv_sqrt = diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * jtj * inv_sqrt.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
    const double ev_min = eig.eigenvalues().minCoeff();
    const double ev_max = eig.eigenvalues().maxCoeff();
    result.condition = ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  } else {
    result.condition = std::numeric_limits<double>::infinity();
  }

  const auto m = static_cast<Eigen::Index>(xs.size());
  if (result.condition <= options.max_condition && m > n) {
    const double s2 = cur.rss / static_cast<double>(m - n);
    const Eigen::MatrixXd inv = jtj.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd cov = s2 * inv;
    result.covariance.resize(static_cast<std::size_t>(n * n));
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) result.covariance[static_cast<std::size_t>(r * n + c)] = cov(r, c);
    }
  }
  return finish(true, reason);
}

}  // namespace threshgate
