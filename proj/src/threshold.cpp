#include "threshgate/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "threshgate/error.hpp"
#include "threshgate/similarity.hpp"

namespace threshgate {

double intersection_threshold(const DualGaussianParams& p) {
  const auto diff = [&](double x) { return eval_gaussian(p.g1, x) - eval_gaussian(p.g2, x); };
  double lo = std::min(p.g1.mu, p.g2.mu);
  double hi = std::max(p.g1.mu, p.g2.mu);
  double f_lo = diff(lo);
  const double f_hi = diff(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw Error(Errc::NoIntersection, "component difference keeps one sign between the means");
  }

  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = diff(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(diff(lo)) <= std::abs(diff(hi)) ? lo : hi;
}

double fallback_threshold(const GaussianParams& p, double k_std) { return p.mu - k_std * p.sigma; }

std::vector<std::string> select_images(const DistanceTable& table, double tau) {
  DistanceTable kept;
  for (const auto& e : table) {
    if (e.distance <= tau) kept.push_back(e);
  }
  kept = sort_by_distance(std::move(kept));
  std::vector<std::string> ids;
  ids.reserve(kept.size());
  for (auto& e : kept) ids.push_back(std::move(e.id));
  return ids;
}

ThresholdDecision auto_threshold(const DistanceTable& table, const ThresholdOptions& options) {
  ThresholdDecision decision;
  const auto values = distances_of(table);
  decision.moments = sample_moments(values);
  try {
    decision.histogram = build_histogram(std::span<const double>(values), options.bins);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateRange) throw;
    decision.model.variant = ModelVariant::Manual;
    decision.manual_reason = e.what();
    return decision;
  }
  const Histogram& h = *decision.histogram;
  const double mean = decision.moments.mean;
  const double stddev = decision.moments.stddev;

  const FitReport dual = fit_dual(h, mean, stddev, options.fit);
  const FitReport single = fit_single(h, mean, stddev, options.fit);
  decision.model = select_model(dual, single, options.delta_factor);

  switch (decision.model.variant) {
    case ModelVariant::Dual:
      try {
        decision.tau = intersection_threshold(std::get<DualGaussianParams>(dual.params));
      } catch (const Error& e) {
        if (e.code() != Errc::NoIntersection) throw;
        decision.dual_without_intersection = true;
        if (single.valid) {
          decision.model.variant = ModelVariant::Single;
          decision.tau = fallback_threshold(std::get<GaussianParams>(single.params), options.k_std);
        } else {
          decision.model.variant = ModelVariant::Manual;
          decision.manual_reason = "dual components do not intersect and the single fit is invalid";
        }
      }
      break;
    case ModelVariant::Single:
      decision.tau = fallback_threshold(std::get<GaussianParams>(single.params), options.k_std);
      break;
    case ModelVariant::Manual:
      decision.manual_reason = "neither fit converged to valid parameters";
      break;
  }

  if (decision.tau) {
    decision.selected_ids = select_images(table, *decision.tau);
    decision.n_selected = decision.selected_ids.size();
  }
  return decision;
}

}  // namespace threshgate
