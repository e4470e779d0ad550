#pragma once

#include <span>
#include <string>
#include <vector>

#include "threshgate/embedding_store.hpp"

namespace threshgate {

/// Query embedding for one prompt. The prompt text is carried only as provenance.
struct QueryVector {
  std::string prompt;
  std::vector<float> vector;
};

/// 1 - <u,v> / (|u| |v|), clamped to [0, 2]. Dot product and norms are accumulated
/// in double precision in ascending index order, so the result is deterministic.
/// Throws Error{LengthMismatch} or Error{ZeroNorm}.
double cosine_distance(std::span<const float> u, std::span<const float> v);
double cosine_distance(std::span<const double> u, std::span<const double> v);

/// One entry per store record, in store order. ZeroNorm names the offending id.
DistanceTable compute_distances(const EmbeddingStore& store, const QueryVector& query);

/// Ascending by distance, ties by ascending id.
DistanceTable sort_by_distance(DistanceTable table);

}  // namespace threshgate
