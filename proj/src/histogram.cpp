#include "threshgate/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "threshgate/error.hpp"

namespace threshgate {

Histogram build_histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw Error(Errc::DegenerateRange, "bin count must be positive");
  if (values.size() < 2) {
    throw Error(Errc::DegenerateRange, "need at least 2 samples, got " + std::to_string(values.size()));
  }
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) throw Error(Errc::DegenerateRange, "all samples are equal");

  Histogram h;
  h.n_samples = values.size();
  h.bin_width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + static_cast<double>(i) * h.bin_width;
  h.edges[bins] = hi;
  h.centers.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.centers[i] = lo + (static_cast<double>(i) + 0.5) * h.bin_width;

  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / h.bin_width));
    counts[std::min(idx, bins - 1)] += 1;
  }

  const double norm = static_cast<double>(h.n_samples) * h.bin_width;
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = static_cast<double>(counts[i]) / norm;
  return h;
}

Histogram build_histogram(const DistanceTable& table, std::size_t bins) {
  const auto values = distances_of(table);
  return build_histogram(std::span<const double>(values), bins);
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  if (values.empty()) return m;
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  m.min = *min_it;
  m.max = *max_it;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return m;
}

std::vector<double> distances_of(const DistanceTable& table) {
  std::vector<double> out;
  out.reserve(table.size());
  for (const auto& e : table) out.push_back(e.distance);
  return out;
}

}  // namespace threshgate
