#pragma once

#include <array>
#include <string>
#include <variant>

#include "threshgate/histogram.hpp"
#include "threshgate/levenberg_marquardt.hpp"

namespace threshgate {

/// a * exp(-((x - mu) / sigma)^2 / 2)
struct GaussianParams {
  double a = 0.0;
  double mu = 0.0;
  double sigma = 0.0;

  bool operator==(const GaussianParams&) const = default;
};

/// Sum of two Gaussian components; after fitting, g1.mu <= g2.mu.
struct DualGaussianParams {
  GaussianParams g1;
  GaussianParams g2;

  bool operator==(const DualGaussianParams&) const = default;
};

using ModelParams = std::variant<GaussianParams, DualGaussianParams>;

struct FitReport {
  ModelParams params;
  bool converged = false;
  bool valid = false;       // converged and passed the parameter screen
  double delta = 0.0;       // trace of the parameter covariance (+inf when singular)
  double epsilon = 0.0;     // sum over bins of |model - density|
  double rss = 0.0;
  int iterations = 0;
  std::string note;         // solver stop reason or the screen rule that failed

  bool operator==(const FitReport&) const = default;
};

/// Returns a at x == mu and 0 elsewhere when sigma == 0.
double eval_gaussian(const GaussianParams& p, double x);
double eval_dual(const DualGaussianParams& p, double x);
double eval_model(const ModelParams& p, double x);

/// Partial derivatives with respect to (a, mu, sigma).
std::array<double, 3> gaussian_gradient(const GaussianParams& p, double x);
/// Partial derivatives with respect to (a1, mu1, sigma1, a2, mu2, sigma2).
std::array<double, 6> dual_gradient(const DualGaussianParams& p, double x);

template <typename Model>
double sum_abs_error(const Model& model, const Histogram& h) {
  double total = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double diff = model(h.centers[i]) - h.densities[i];
    total += diff < 0.0 ? -diff : diff;
  }
  return total;
}

struct FitOptions {
  LmOptions solver;
  // Dual means start at sample_mean -/+ mean_offset_stds * sample_std.
  double mean_offset_stds = 0.5;
};

/// Least-squares fit of one Gaussian to the bin-center densities, started from
/// a = 1, mu = sample_mean, sigma = sample_std. Never throws on numerical failure;
/// the report records it. Requires sample_std > 0.
FitReport fit_single(const Histogram& h, double sample_mean, double sample_std, const FitOptions& options = {});

/// Same for the two-component model, started from a1 = a2 = 1, sigma1 = sigma2 = sample_std.
FitReport fit_dual(const Histogram& h, double sample_mean, double sample_std, const FitOptions& options = {});

/// Screen applied to fitted components: a > 0, |sigma| >= bin_width / 10, and mu
/// within the histogram range widened by one bin. Returns the failed rule or "".
std::string screen_component(const GaussianParams& g, const Histogram& h);

}  // namespace threshgate
