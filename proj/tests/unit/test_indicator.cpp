#include <gtest/gtest.h>

#include "tailkit/exact.hpp"
#include "tailkit/indicator.hpp"

using namespace tailkit;

namespace {

IndicatorFamily overlapping_pair() { return IndicatorFamily(GroundSet({0.5, 0.5, 0.5}), {{0, 1}, {1, 2}}); }

}  // namespace

TEST(GroundSet, RejectsProbabilitiesOutsideUnitInterval) {
  EXPECT_THROW(GroundSet({0.5, 1.5}), Error);
  EXPECT_THROW(GroundSet({-0.1}), Error);
  EXPECT_THROW(GroundSet({std::nan("")}), Error);
}

TEST(IndicatorFamily, RejectsOutOfRangeElements) {
  EXPECT_THROW(IndicatorFamily(GroundSet({0.5}), {{0, 1}}), Error);
}

TEST(IndicatorFamily, SortsAndDeduplicatesMembers) {
  IndicatorFamily f(GroundSet({0.5, 0.5, 0.5}), {{2, 0, 2}});
  EXPECT_EQ(f.member(0), (Member{0, 2}));
}

TEST(Stats, OverlappingPair) {
  const auto s = compute_stats(overlapping_pair());
  EXPECT_DOUBLE_EQ(s.mu, 0.5);
  EXPECT_DOUBLE_EQ(s.pi, 0.25);
  EXPECT_DOUBLE_EQ(s.lambda, 0.75);
  ASSERT_TRUE(s.delta.has_value());
  EXPECT_DOUBLE_EQ(*s.delta, 0.5);
  EXPECT_EQ(s.ordered_overlap_pairs, 2u);
}

TEST(Stats, EmptyFamilyHasNoDelta) {
  const auto s = compute_stats(IndicatorFamily(GroundSet({0.5}), {}));
  EXPECT_EQ(s.mu, 0.0);
  EXPECT_EQ(s.lambda, 0.0);
  EXPECT_FALSE(s.delta.has_value());
}

TEST(Stats, IndependentFamilyHasZeroDelta) {
  IndicatorFamily f(GroundSet(std::vector<double>(4, 0.3)), {{0}, {1}, {2}, {3}});
  const auto s = compute_stats(f);
  EXPECT_NEAR(s.mu, 1.2, 1e-15);
  EXPECT_NEAR(*s.delta, 0.0, 1e-15);
}

TEST(Stats, EmptyMemberIsAlwaysOn) {
  IndicatorFamily f(GroundSet({0.5}), {{}, {0}});
  const auto s = compute_stats(f);
  EXPECT_DOUBLE_EQ(s.pi, 1.0);
  EXPECT_DOUBLE_EQ(s.mu, 1.5);
}

TEST(Threshold, ExactForDyadicInputs) {
  const auto t = lower_tail_threshold(overlapping_pair(), 0.5);
  EXPECT_TRUE(t.exact);
  EXPECT_DOUBLE_EQ(t.threshold, 0.25);
  EXPECT_EQ(t.le_cutoff, 0);
  EXPECT_EQ(t.lt_cutoff, 0);
}

TEST(Threshold, IntegerThresholdSplitsStrictAndWeak) {
  IndicatorFamily f(GroundSet({0.5, 0.5, 0.5, 0.5}), {{0}, {1}, {2}, {3}});
  const auto t = lower_tail_threshold(f, 0.5);
  EXPECT_EQ(t.le_cutoff, 1);
  EXPECT_EQ(t.lt_cutoff, 0);
}

TEST(Threshold, SlackAbsorbsRoundingForNonDyadicInputs) {
  IndicatorFamily f(GroundSet(std::vector<double>(10, 0.1)), {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
  const auto t = lower_tail_threshold(f, 0.7);  // (1 - 0.7) * 1 = 0.3
  EXPECT_FALSE(t.exact);
  EXPECT_EQ(t.le_cutoff, 0);
  const auto u = lower_tail_threshold(f, 1.0 - 1.0 / 3.0);
  EXPECT_EQ(u.le_cutoff, 0);
}

TEST(Exact, OverlappingPairDistribution) {
  const auto d = exact_distribution(overlapping_pair());
  EXPECT_DOUBLE_EQ(d.at(0), 5.0 / 8);
  EXPECT_DOUBLE_EQ(d.at(1), 1.0 / 4);
  EXPECT_DOUBLE_EQ(d.at(2), 1.0 / 8);
  EXPECT_DOUBLE_EQ(d.variance(), 0.5);
  EXPECT_NEAR(std::exp(d.log_laplace(1.0)), 0.73388677069743716689, 1e-15);
}

TEST(Exact, TailsOnOverlappingPair) {
  EXPECT_DOUBLE_EQ(exact_lower_tail(overlapping_pair(), 0.5), 5.0 / 8);
  EXPECT_DOUBLE_EQ(exact_lower_tail(overlapping_pair(), 0.0), 5.0 / 8);  // X <= mu = 1/2
  EXPECT_DOUBLE_EQ(exact_strict_lower_tail(overlapping_pair(), 1.0), 0.0);
}

TEST(Exact, MatchesBinomialForSingletons) {
  IndicatorFamily f(GroundSet(std::vector<double>(10, 0.1)), {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
  EXPECT_NEAR(exact_strict_lower_tail(f, 0.5), 0.3486784401000001, 1e-15);
}

TEST(Exact, DegenerateProbabilities) {
  IndicatorFamily f(GroundSet({0.0, 1.0}), {{0}, {1}, {0, 1}});
  const auto d = exact_distribution(f);
  EXPECT_DOUBLE_EQ(d.at(1), 1.0);
}

TEST(Exact, RefusesLargeGroundSets) {
  IndicatorFamily f(GroundSet(std::vector<double>(40, 0.5)), {{0}});
  EXPECT_THROW(exact_distribution(f), Error);
}
