#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "threshgate/embedding_store.hpp"

namespace threshgate {

inline constexpr std::size_t kDefaultBins = 100;

/// Equal-width histogram spanning [min, max] of the observed distances, scaled
/// to unit integral (probability density).
struct Histogram {
  std::vector<double> edges;      // bins + 1, edges.front() == min, edges.back() == max
  std::vector<double> centers;    // bins
  std::vector<double> densities;  // bins
  double bin_width = 0.0;
  std::size_t n_samples = 0;

  std::size_t bins() const noexcept { return centers.size(); }
  double lo() const noexcept { return edges.front(); }
  double hi() const noexcept { return edges.back(); }
};

/// Bin index is floor((d - min) / bin_width); d == max lands in the last bin.
/// Throws Error{DegenerateRange} for fewer than 2 samples or zero spread.
Histogram build_histogram(std::span<const double> values, std::size_t bins = kDefaultBins);
Histogram build_histogram(const DistanceTable& table, std::size_t bins = kDefaultBins);

struct SampleMoments {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population (divisor n)
};

SampleMoments sample_moments(std::span<const double> values);

std::vector<double> distances_of(const DistanceTable& table);

}  // namespace threshgate
