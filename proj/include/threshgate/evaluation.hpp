#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "threshgate/embedding_store.hpp"

namespace threshgate {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  // Table ids without a label; excluded from the four counts above.
  std::size_t unlabeled = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct MetricsReport {
  double threshold = 0.0;
  std::size_t n_results = 0;  // tp + fp
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double specificity = 0.0;
  // Set when some metric had a zero denominator and was reported as 0.
  bool zero_denominator = false;
  ConfusionCounts counts;
};

/// Predicted positive means distance <= tau.
/// Throws Error{UnknownPositiveClass} if no label equals `positive`.
ConfusionCounts confusion(const DistanceTable& table, const LabelTable& labels, std::string_view positive, double tau);

/// f1 = 2tp / (2tp + fn + fp); metrics with a zero denominator are 0.
MetricsReport metrics(const ConfusionCounts& counts, double tau);

/// Every distinct labeled distance (plus one candidate below the minimum) is tried
/// as tau; returns the report with maximal F1, preferring the smaller tau on ties.
/// Single sorted sweep, O(n log n). Throws UnknownPositiveClass / NoPositives.
MetricsReport optimal_f1_threshold(const DistanceTable& table, const LabelTable& labels, std::string_view positive);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // ascending threshold, from (0,0) to (1,1)
  std::size_t optimum_index = 0;
  double optimum_distance = 0.0;  // Euclidean distance of the optimum from (fpr, tpr) = (1, 0)

  const RocPoint& optimum() const { return points.at(optimum_index); }
};

/// One point per threshold candidate. The optimum is the point furthest from
/// (fpr, tpr) = (1, 0), i.e. from "no true positives, only false positives";
/// ties go to the smaller threshold. Throws NoPositives / NoNegatives.
RocCurve roc_curve(const DistanceTable& table, const LabelTable& labels, std::string_view positive);

/// Trapezoidal area under the curve.
double roc_auc(const RocCurve& curve);

}  // namespace threshgate
