#include "threshgate/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "threshgate/error.hpp"

namespace threshgate {
namespace {

using testing::closed_form_intersection;
using testing::make_table;
using testing::normal_samples;

DistanceTable bimodal_table(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto v = normal_samples(rng, 900, 0.70, 0.015);
  v.reserve(8000);
  const auto rest = normal_samples(rng, 7100, 0.78, 0.020);
  v.insert(v.end(), rest.begin(), rest.end());
  std::shuffle(v.begin(), v.end(), rng);
  return make_table(v);
}

DistanceTable unimodal_table(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_table(normal_samples(rng, 8000, 0.78, 0.02));
}

// Random parameter sets with mu1 < mu2 and exactly one bracketed crossing.
std::vector<DualGaussianParams> random_crossing_params(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.2, 10.0), mean(0.3, 1.2), gap(0.01, 0.2), sd(0.01, 0.06);
  std::vector<DualGaussianParams> out;
  while (out.size() < n) {
    const double m1 = mean(rng);
    const DualGaussianParams p{{amp(rng), m1, sd(rng)}, {amp(rng), m1 + gap(rng), sd(rng)}};
    const double lo = eval_gaussian(p.g1, p.g1.mu) - eval_gaussian(p.g2, p.g1.mu);
    const double hi = eval_gaussian(p.g1, p.g2.mu) - eval_gaussian(p.g2, p.g2.mu);
    if (lo * hi < 0 && closed_form_intersection(p)) out.push_back(p);
  }
  return out;
}

TEST(Intersection, SymmetricMidpoint) {
  EXPECT_NEAR(intersection_threshold({{1, 0.7, 0.02}, {1, 0.8, 0.02}}), 0.75, 1e-12);
}

TEST(Intersection, UnequalAmplitudes) {
  const DualGaussianParams p{{2, 0.7, 0.02}, {1, 0.8, 0.02}};
  const double tau = intersection_threshold(p);
  EXPECT_NEAR(tau, 0.75 + 0.0004 * std::log(2.0) / 0.1, 1e-12);
  EXPECT_NEAR(tau, 0.7527726, 1e-7);
  EXPECT_NEAR(tau, *closed_form_intersection(p), 1e-12);
}

TEST(Intersection, DominatedComponentHasNoCrossing) {
  const DualGaussianParams p{{1, 0.7, 0.02}, {1e-9, 0.8, 0.0005}};
  for (double x : {0.7, 0.75, 0.8}) EXPECT_GT(eval_gaussian(p.g1, x) - eval_gaussian(p.g2, x), 0.0);
  try {
    intersection_threshold(p);
    FAIL() << "expected NoIntersection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoIntersection);
  }
}

TEST(Intersection, MatchesClosedFormAndBalancesComponents) {
  for (const auto& p : random_crossing_params(71, 1000)) {
    const double tau = intersection_threshold(p);
    EXPECT_NEAR(tau, *closed_form_intersection(p), 1e-9);
    EXPECT_GE(tau, p.g1.mu);
    EXPECT_LE(tau, p.g2.mu);
    EXPECT_LT(std::abs(eval_gaussian(p.g1, tau) - eval_gaussian(p.g2, tau)), 1e-12 * std::max(p.g1.a, p.g2.a));
  }
}

TEST(Fallback, Examples) {
  EXPECT_NEAR(fallback_threshold({1, 0.8, 0.01}), 0.78, 1e-15);
  EXPECT_EQ(fallback_threshold({1, 0.8, 0.01}, 0.0), 0.8);
  EXPECT_NEAR(fallback_threshold({1, 0.75, 0.05}), 0.65, 1e-15);
}

TEST(SelectImages, Examples) {
  const DistanceTable t{{"b", 0.9}, {"a", 0.1}};
  EXPECT_EQ(select_images(t, 0.5), std::vector<std::string>{"a"});
  EXPECT_TRUE(select_images(t, 0.05).empty());
  EXPECT_EQ(select_images(t, 0.9), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(select_images({{"z", 0.2}, {"y", 0.2}}, 0.2), (std::vector<std::string>{"y", "z"}));
}

TEST(SelectImages, MonotoneInTau) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> v(300);
  for (auto& x : v) x = u(rng);
  const DistanceTable t = make_table(v);
  for (int trial = 0; trial < 100; ++trial) {
    double t1 = u(rng), t2 = u(rng);
    if (t1 > t2) std::swap(t1, t2);
    auto s1 = select_images(t, t1), s2 = select_images(t, t2);
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    EXPECT_TRUE(std::includes(s2.begin(), s2.end(), s1.begin(), s1.end()));
  }
}

TEST(AutoThreshold, BimodalChoosesDual) {
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    const DistanceTable t = bimodal_table(seed);
    const ThresholdDecision d = auto_threshold(t);
    ASSERT_EQ(d.model.variant, ModelVariant::Dual);
    ASSERT_TRUE(d.tau.has_value());
    EXPECT_FALSE(d.dual_without_intersection);
    const auto& fitted = std::get<DualGaussianParams>(d.model.dual_report->params);
    const auto oracle = closed_form_intersection(fitted);
    ASSERT_TRUE(oracle.has_value());
    EXPECT_LE(std::abs(*d.tau - *oracle), 0.005);
    EXPECT_GT(*d.tau, 0.70);
    EXPECT_LT(*d.tau, 0.78);

    std::vector<std::string> expected;
    for (const auto& e : t) {
      if (e.distance <= *d.tau) expected.push_back(e.id);
    }
    auto got = d.selected_ids;
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expected);
    EXPECT_EQ(d.n_selected, expected.size());
  }
}

TEST(AutoThreshold, UnimodalFallsBackToSingle) {
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    const ThresholdDecision d = auto_threshold(unimodal_table(seed));
    ASSERT_EQ(d.model.variant, ModelVariant::Single);
    ASSERT_TRUE(d.tau.has_value());
    const auto& g = std::get<GaussianParams>(d.model.single_report->params);
    EXPECT_NEAR(*d.tau, g.mu - 2 * g.sigma, 1e-9);
    EXPECT_NEAR(*d.tau, 0.74, 0.002);
  }
}

TEST(AutoThreshold, ConstantDistancesNeedManualAnalysis) {
  const ThresholdDecision d = auto_threshold(make_table(std::vector<double>(500, 0.77)));
  EXPECT_EQ(d.model.variant, ModelVariant::Manual);
  EXPECT_FALSE(d.tau.has_value());
  EXPECT_FALSE(d.manual_reason.empty());
  EXPECT_TRUE(d.selected_ids.empty());

  const ThresholdDecision empty = auto_threshold({});
  EXPECT_EQ(empty.model.variant, ModelVariant::Manual);
}

TEST(AutoThreshold, IsDeterministic) {
  const DistanceTable t = bimodal_table(404);
  const ThresholdDecision a = auto_threshold(t);
  const ThresholdDecision b = auto_threshold(t);
  EXPECT_EQ(a.tau, b.tau);
  EXPECT_EQ(a.selected_ids, b.selected_ids);
  EXPECT_EQ(a.model.dual_report, b.model.dual_report);
  EXPECT_EQ(a.model.single_report, b.model.single_report);
}

}  // namespace
}  // namespace threshgate
