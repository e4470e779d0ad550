#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace threshgate {

/// Model callback: given parameters p and abscissa x, return the model value and
/// write d(model)/d(p_j) into grad (grad.size() == p.size()).
using CurveModel = std::function<double(std::span<const double> p, double x, std::span<double> grad)>;

struct LmOptions {
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
  double rel_rss_tol = 1e-10;
  double step_tol = 1e-10;
  int max_iterations = 1000;
  // Upper bound on the condition number of the column-equilibrated J^T J at the
  // solution. Above it the covariance is reported as infinite.
  double max_condition = 1e12;
  // Steps with 2|a|/|v| above this (acceleration a, velocity v, both in the
  // damping metric) are rejected like steps that raise the RSS. 0 disables
  // the geodesic correction.
  double max_acceleration_ratio = 0.75;
  // Relative step used for the finite-difference second directional derivative.
  double curvature_probe = 0.1;
};

struct LmResult {
  std::vector<double> params;
  bool converged = false;
  int iterations = 0;
  double rss = 0.0;
  // s^2 (J^T J)^-1 with s^2 = rss / (m - p); empty when not computable.
  std::vector<double> covariance;  // row-major p x p
  double condition = 0.0;
  std::string stop_reason;
  std::vector<double> rss_trace;  // initial RSS, then the RSS after every accepted step
};

/// Minimizes sum_i (model(p, x_i) - y_i)^2 with Marquardt-scaled damping:
/// the diagonal of J^T J is multiplied by (1 + lambda); lambda shrinks by
/// damping_factor after an accepted step and grows by it after a rejected one.
/// A step is accepted only when it strictly lowers the RSS. Each step carries
/// a second-order (geodesic acceleration) correction; without it, fits started
/// far from the data's scale tend to run off to huge parameter values.
LmResult levenberg_marquardt(const CurveModel& model, std::span<const double> xs, std::span<const double> ys,
                             std::vector<double> initial, const LmOptions& options = {});

}  // namespace threshgate
