#include "threshgate/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "threshgate/error.hpp"

namespace threshgate {
namespace {

template <typename T>
double cosine_distance_impl(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (!(uu > 0.0) || !(vv > 0.0)) throw Error(Errc::ZeroNorm, "vector with zero norm");
  const double d = 1.0 - dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(d, 0.0, 2.0);
}

}  // namespace

double cosine_distance(std::span<const float> u, std::span<const float> v) {
  return cosine_distance_impl(u, v);
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  return cosine_distance_impl(u, v);
}

DistanceTable compute_distances(const EmbeddingStore& store, const QueryVector& query) {
  if (query.vector.size() != store.dim) {
    throw Error(Errc::LengthMismatch, "query has dim " + std::to_string(query.vector.size()) +
                                          ", store has dim " + std::to_string(store.dim));
  }
  const bool query_nonzero = std::any_of(query.vector.begin(), query.vector.end(), [](float x) { return x != 0.0f; });
  if (!query_nonzero) throw Error(Errc::ZeroNorm, "query vector");

  DistanceTable table;
  table.reserve(store.records.size());
  for (const auto& rec : store.records) {
    try {
      table.push_back({rec.id, cosine_distance(std::span<const float>(rec.vector), std::span<const float>(query.vector))});
    } catch (const Error& e) {
      if (e.code() == Errc::ZeroNorm) throw Error(Errc::ZeroNorm, "record '" + rec.id + "'");
      throw;
    }
  }
  return table;
}

DistanceTable sort_by_distance(DistanceTable table) {
  std::sort(table.begin(), table.end(), [](const DistanceEntry& a, const DistanceEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
  });
  return table;
}

}  // namespace threshgate
