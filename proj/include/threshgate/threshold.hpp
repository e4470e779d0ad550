#pragma once

#include <optional>
#include <string>
#include <vector>

#include "threshgate/embedding_store.hpp"
#include "threshgate/gaussfit.hpp"
#include "threshgate/histogram.hpp"
#include "threshgate/model_select.hpp"

namespace threshgate {

inline constexpr double kDefaultKStd = 2.0;

/// Crossing of the two components between their means, found by bisection on
/// g1(x) - g2(x) over [g1.mu, g2.mu] until the bracket cannot be halved further.
/// Throws Error{NoIntersection} when the difference keeps one sign on the interval.
double intersection_threshold(const DualGaussianParams& p);

/// mu - k_std * sigma
double fallback_threshold(const GaussianParams& p, double k_std = kDefaultKStd);

/// Ids with distance <= tau, ascending by (distance, id).
std::vector<std::string> select_images(const DistanceTable& table, double tau);

struct ThresholdOptions {
  std::size_t bins = kDefaultBins;
  double delta_factor = kDefaultDeltaFactor;
  double k_std = kDefaultKStd;
  FitOptions fit;
};

struct ThresholdDecision {
  std::optional<double> tau;  // empty when the outcome is Manual
  ModelChoice model;
  // Dual was chosen but its components do not cross between the means, so the
  // single-Gaussian rule supplied tau.
  bool dual_without_intersection = false;
  std::string manual_reason;
  std::vector<std::string> selected_ids;
  std::size_t n_selected = 0;
  std::optional<Histogram> histogram;
  SampleMoments moments;
};

/// Histogram, both fits, model selection, then tau and the selected subset.
/// Degenerate input (fewer than two samples or no spread) yields Manual.
ThresholdDecision auto_threshold(const DistanceTable& table, const ThresholdOptions& options = {});

}  // namespace threshgate
