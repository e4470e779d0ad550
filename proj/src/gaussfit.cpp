#include "threshgate/gaussfit.hpp"

#include <cmath>
#include <limits>

namespace threshgate {

double eval_gaussian(const GaussianParams& p, double x) {
  if (p.sigma == 0.0) return x == p.mu ? p.a : 0.0;
  const double z = (x - p.mu) / p.sigma;
  return p.a * std::exp(-0.5 * z * z);
}

double eval_dual(const DualGaussianParams& p, double x) { return eval_gaussian(p.g1, x) + eval_gaussian(p.g2, x); }

double eval_model(const ModelParams& p, double x) {
  return std::visit(
      [x](const auto& params) {
        if constexpr (std::is_same_v<std::decay_t<decltype(params)>, GaussianParams>) {
          return eval_gaussian(params, x);
        } else {
          return eval_dual(params, x);
        }
      },
      p);
}

std::array<double, 3> gaussian_gradient(const GaussianParams& p, double x) {
  if (p.sigma == 0.0) return {x == p.mu ? 1.0 : 0.0, 0.0, 0.0};
  const double z = (x - p.mu) / p.sigma;
  const double e = std::exp(-0.5 * z * z);
  // Valid for either sign of sigma: the model depends on sigma^2 only.
  return {e, p.a * e * z / p.sigma, p.a * e * z * z / p.sigma};
}

std::array<double, 6> dual_gradient(const DualGaussianParams& p, double x) {
  const auto g1 = gaussian_gradient(p.g1, x);
  const auto g2 = gaussian_gradient(p.g2, x);
  return {g1[0], g1[1], g1[2], g2[0], g2[1], g2[2]};
}

std::string screen_component(const GaussianParams& g, const Histogram& h) {
  if (!(g.a > 0.0)) return "amplitude not positive";
  if (!(std::abs(g.sigma) >= h.bin_width / 10.0)) return "sigma collapsed below bin_width/10";
  if (!(g.mu >= h.lo() - h.bin_width && g.mu <= h.hi() + h.bin_width)) return "mean outside histogram range";
  return {};
}

namespace {

double trace(const std::vector<double>& cov, std::size_t n) {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += cov[i * n + i];
  return t;
}

// Shared tail of both fits: covariance trace, epsilon, validity.
void finalize(FitReport& report, const LmResult& lm, std::size_t n_params, const Histogram& h) {
  report.converged = lm.converged;
  report.iterations = lm.iterations;
  report.rss = lm.rss;
  report.note = lm.stop_reason;
  report.epsilon = sum_abs_error([&](double x) { return eval_model(report.params, x); }, h);
  if (!lm.converged) {
    report.valid = false;
    report.delta = std::numeric_limits<double>::infinity();
    return;
  }
  if (lm.covariance.empty()) {
    report.delta = std::numeric_limits<double>::infinity();
    report.valid = false;
    report.note = "singular normal matrix";
    return;
  }
  report.delta = trace(lm.covariance, n_params);
  if (!std::isfinite(report.delta) || !std::isfinite(report.epsilon)) {
    report.valid = false;
    report.note = "non-finite diagnostics";
    return;
  }
  report.valid = true;
}

}  // namespace

FitReport fit_single(const Histogram& h, double sample_mean, double sample_std, const FitOptions& options) {
  const CurveModel model = [](std::span<const double> p, double x, std::span<double> grad) {
    const GaussianParams g{p[0], p[1], p[2]};
    const auto d = gaussian_gradient(g, x);
    std::copy(d.begin(), d.end(), grad.begin());
    return eval_gaussian(g, x);
  };
  const auto lm = levenberg_marquardt(model, h.centers, h.densities, {1.0, sample_mean, sample_std}, options.solver);

  FitReport report;
  report.params = GaussianParams{lm.params[0], lm.params[1], std::abs(lm.params[2])};
  finalize(report, lm, 3, h);
  if (report.valid) {
    if (auto why = screen_component(std::get<GaussianParams>(report.params), h); !why.empty()) {
      report.valid = false;
      report.note = why;
    }
  }
  return report;
}

FitReport fit_dual(const Histogram& h, double sample_mean, double sample_std, const FitOptions& options) {
  const CurveModel model = [](std::span<const double> p, double x, std::span<double> grad) {
    const DualGaussianParams g{{p[0], p[1], p[2]}, {p[3], p[4], p[5]}};
    const auto d = dual_gradient(g, x);
    std::copy(d.begin(), d.end(), grad.begin());
    return eval_dual(g, x);
  };
  const double offset = options.mean_offset_stds * sample_std;
  const auto lm = levenberg_marquardt(
      model, h.centers, h.densities,
      {1.0, sample_mean - offset, sample_std, 1.0, sample_mean + offset, sample_std}, options.solver);

  DualGaussianParams dual{{lm.params[0], lm.params[1], std::abs(lm.params[2])},
                          {lm.params[3], lm.params[4], std::abs(lm.params[5])}};
  if (dual.g2.mu < dual.g1.mu) std::swap(dual.g1, dual.g2);

  FitReport report;
  report.params = dual;
  finalize(report, lm, 6, h);
  if (report.valid) {
    for (const auto* g : {&dual.g1, &dual.g2}) {
      if (auto why = screen_component(*g, h); !why.empty()) {
        report.valid = false;
        report.note = (g == &dual.g1 ? "component 1: " : "component 2: ") + why;
        break;
      }
    }
  }
  return report;
}

}  // namespace threshgate
