#include "threshgate/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "threshgate/error.hpp"

namespace threshgate {
namespace {

double cosd(std::vector<double> u, std::vector<double> v) {
  return cosine_distance(std::span<const double>(u), std::span<const double>(v));
}

TEST(CosineDistance, AnalyticCases) {
  EXPECT_EQ(cosd({1, 0}, {1, 0}), 0.0);
  EXPECT_EQ(cosd({1, 0}, {0, 1}), 1.0);
  EXPECT_EQ(cosd({1, 0}, {-1, 0}), 2.0);
  EXPECT_NEAR(cosd({1, 1}, {1, 0}), 1.0 - std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(cosd({1, 1}, {1, 0}), 0.2928932, 1e-7);
}

TEST(CosineDistance, Errors) {
  EXPECT_THROW(cosd({0, 0}, {1, 0}), Error);
  EXPECT_THROW(cosd({1, 0, 0}, {1, 0}), Error);
  try {
    cosd({1, 0}, {0, 0});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroNorm);
  }
}

TEST(CosineDistance, ScaleInvariantAndInRange) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> u(64), v(64);
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    const double d = cosd(u, v);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    const double alpha = scale(rng), beta = scale(rng);
    auto us = u, vs = v;
    for (auto& x : us) x *= alpha;
    for (auto& x : vs) x *= beta;
    EXPECT_NEAR(cosd(us, vs), d, 1e-12);
  }
}

TEST(ComputeDistances, KeepsStoreOrder) {
  const EmbeddingStore store{2, {{"a", {1.0f, 0.0f}}, {"b", {0.0f, 1.0f}}}};
  const DistanceTable t = compute_distances(store, {"query", {1.0f, 0.0f}});
  EXPECT_EQ(t, (DistanceTable{{"a", 0.0}, {"b", 1.0}}));

  const EmbeddingStore one{3, {{"x", {0.2f, -0.4f, 0.9f}}}};
  const DistanceTable self = compute_distances(one, {"q", {0.2f, -0.4f, 0.9f}});
  ASSERT_EQ(self.size(), 1u);
  EXPECT_NEAR(self[0].distance, 0.0, 1e-15);
}

TEST(ComputeDistances, PositiveScalingLeavesTableUnchanged) {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  EmbeddingStore store{128, {}};
  for (int i = 0; i < 50; ++i) {
    EmbeddingRecord r{"r" + std::to_string(i), std::vector<float>(128)};
    for (auto& x : r.vector) x = normal(rng);
    store.records.push_back(std::move(r));
  }
  QueryVector q{"q", std::vector<float>(128)};
  for (auto& x : q.vector) x = normal(rng);
  const DistanceTable base = compute_distances(store, q);

  // Power-of-two factors keep the float inputs exact; the others exercise rounding.
  for (float factor : {0.25f, 8.0f, 3.7f, 0.013f}) {
    EmbeddingStore scaled = store;
    for (auto& r : scaled.records) {
      for (auto& x : r.vector) x *= factor;
    }
    QueryVector qs = q;
    for (auto& x : qs.vector) x *= 1.0f / factor;
    const DistanceTable t = compute_distances(scaled, qs);
    const double tol = (factor == 0.25f || factor == 8.0f) ? 1e-12 : 1e-6;
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i].distance, base[i].distance, tol);
  }
}

TEST(ComputeDistances, NamesZeroNormRecord) {
  const EmbeddingStore store{2, {{"ok", {1.0f, 0.0f}}, {"blank", {0.0f, 0.0f}}}};
  try {
    compute_distances(store, {"q", {1.0f, 1.0f}});
    FAIL() << "expected ZeroNorm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroNorm);
    EXPECT_NE(std::string(e.what()).find("blank"), std::string::npos);
  }
  EXPECT_THROW(compute_distances(store, {"q", {1.0f}}), Error);
}

TEST(SortByDistance, AscendingWithIdTieBreak) {
  EXPECT_EQ(sort_by_distance({{"b", 0.3}, {"a", 0.1}}), (DistanceTable{{"a", 0.1}, {"b", 0.3}}));
  EXPECT_EQ(sort_by_distance({{"b", 0.3}, {"a", 0.3}}), (DistanceTable{{"a", 0.3}, {"b", 0.3}}));
  const DistanceTable sorted{{"a", 0.1}, {"c", 0.2}, {"b", 0.2}};
  EXPECT_EQ(sort_by_distance(sorted), (DistanceTable{{"a", 0.1}, {"b", 0.2}, {"c", 0.2}}));
}

TEST(SortByDistance, IdempotentPermutation) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    DistanceTable t;
    const int n = 1 + static_cast<int>(rng() % 100);
    for (int i = 0; i < n; ++i) t.push_back({"id" + std::to_string(rng() % 1000) + "_" + std::to_string(i),
                                             static_cast<double>(rng() % 20) / 10.0});
    const DistanceTable once = sort_by_distance(t);
    EXPECT_EQ(sort_by_distance(once), once);
    EXPECT_TRUE(std::is_permutation(once.begin(), once.end(), t.begin(), t.end()));
    for (std::size_t i = 1; i < once.size(); ++i) {
      EXPECT_TRUE(once[i - 1].distance < once[i].distance ||
                  (once[i - 1].distance == once[i].distance && once[i - 1].id < once[i].id));
    }
  }
}

}  // namespace
}  // namespace threshgate
