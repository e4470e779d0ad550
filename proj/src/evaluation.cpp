#include "threshgate/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "threshgate/error.hpp"

namespace threshgate {
namespace {

void require_known_class(const LabelTable& labels, std::string_view positive) {
  const bool known = std::any_of(labels.begin(), labels.end(), [&](const auto& kv) { return kv.second == positive; });
  if (!known) throw Error(Errc::UnknownPositiveClass, "no id is labeled '" + std::string(positive) + "'");
}

struct LabeledDistance {
  double distance;
  bool positive;
};

// Labeled entries sorted by distance, with the class totals.
struct SweepInput {
  std::vector<LabeledDistance> items;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

SweepInput prepare_sweep(const DistanceTable& table, const LabelTable& labels, std::string_view positive) {
  require_known_class(labels, positive);
  SweepInput in;
  in.items.reserve(table.size());
  for (const auto& e : table) {
    auto it = labels.find(e.id);
    if (it == labels.end()) continue;
    const bool pos = it->second == positive;
    in.items.push_back({e.distance, pos});
    (pos ? in.positives : in.negatives) += 1;
  }
  std::sort(in.items.begin(), in.items.end(),
            [](const LabeledDistance& a, const LabeledDistance& b) { return a.distance < b.distance; });
  if (in.positives == 0) throw Error(Errc::NoPositives, "no labeled '" + std::string(positive) + "' ids in table");
  return in;
}

// Calls fn(tau, tp, fp) for the below-minimum candidate, then once per distinct distance.
template <typename Fn>
void sweep(const SweepInput& in, Fn&& fn) {
  const double below = std::nextafter(in.items.front().distance, -std::numeric_limits<double>::infinity());
  fn(below, std::size_t{0}, std::size_t{0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < in.items.size()) {
    const double d = in.items[i].distance;
    while (i < in.items.size() && in.items[i].distance == d) {
      (in.items[i].positive ? tp : fp) += 1;
      ++i;
    }
    fn(d, tp, fp);
  }
}

double ratio(std::size_t num, std::size_t den, bool& zero_den) {
  if (den == 0) {
    zero_den = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts confusion(const DistanceTable& table, const LabelTable& labels, std::string_view positive,
                          double tau) {
  require_known_class(labels, positive);
  ConfusionCounts c;
  for (const auto& e : table) {
    auto it = labels.find(e.id);
    if (it == labels.end()) {
      ++c.unlabeled;
      continue;
    }
    const bool pos = it->second == positive;
    const bool selected = e.distance <= tau;
    if (selected) {
      (pos ? c.tp : c.fp) += 1;
    } else {
      (pos ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

MetricsReport metrics(const ConfusionCounts& c, double tau) {
  MetricsReport m;
  m.threshold = tau;
  m.counts = c;
  m.n_results = c.tp + c.fp;
  bool zero = false;
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fn + c.fp, zero);
  m.precision = ratio(c.tp, c.tp + c.fp, zero);
  m.recall = ratio(c.tp, c.tp + c.fn, zero);
  m.accuracy = ratio(c.tp + c.tn, c.total(), zero);
  m.specificity = ratio(c.tn, c.tn + c.fp, zero);
  m.zero_denominator = zero;
  return m;
}

MetricsReport optimal_f1_threshold(const DistanceTable& table, const LabelTable& labels, std::string_view positive) {
  const SweepInput in = prepare_sweep(table, labels, positive);
  ConfusionCounts best;
  double best_tau = 0.0;
  double best_f1 = -1.0;
  sweep(in, [&](double tau, std::size_t tp, std::size_t fp) {
    const ConfusionCounts c{tp, fp, in.negatives - fp, in.positives - tp, 0};
    bool unused = false;
    const double f1 = ratio(2 * c.tp, 2 * c.tp + c.fn + c.fp, unused);
    if (f1 > best_f1) {
      best_f1 = f1;
      best_tau = tau;
      best = c;
    }
  });
  best.unlabeled = table.size() - best.total();
  return metrics(best, best_tau);
}

RocCurve roc_curve(const DistanceTable& table, const LabelTable& labels, std::string_view positive) {
  const SweepInput in = prepare_sweep(table, labels, positive);
  if (in.negatives == 0) throw Error(Errc::NoNegatives, "every labeled id is '" + std::string(positive) + "'");
  RocCurve curve;
  double best_sq = -1.0;
  const double p = static_cast<double>(in.positives);
  const double n = static_cast<double>(in.negatives);
  sweep(in, [&](double tau, std::size_t tp, std::size_t fp) {
    const RocPoint pt{static_cast<double>(fp) / n, static_cast<double>(tp) / p, tau};
    const double sq = (pt.fpr - 1.0) * (pt.fpr - 1.0) + pt.tpr * pt.tpr;
    if (sq > best_sq) {
      best_sq = sq;
      curve.optimum_index = curve.points.size();
    }
    curve.points.push_back(pt);
  });
  curve.optimum_distance = std::sqrt(best_sq);
  return curve;
}

double roc_auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return area;
}

}  // namespace threshgate
