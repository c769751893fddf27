#include <gtest/gtest.h>

#include "tailkit/exact.hpp"
#include "tailkit/monte_carlo.hpp"

using namespace tailkit;

namespace {

IndicatorFamily pair_family() { return IndicatorFamily(GroundSet({0.5, 0.5, 0.5}), {{0, 1}, {1, 2}}); }

}  // namespace

TEST(Wilson, ContainsPointAndStaysInUnitInterval) {
  for (std::uint64_t hits : {0ULL, 1ULL, 50ULL, 99ULL, 100ULL}) {
    const auto ci = wilson_interval(hits, 100);
    const double p = hits / 100.0;
    EXPECT_LE(ci.low, p);
    EXPECT_GE(ci.high, p);
    EXPECT_GE(ci.low, 0.0);
    EXPECT_LE(ci.high, 1.0);
  }
}

TEST(Wilson, KnownValue) {
  // 50 of 100 at z = 1.96: centre 0.5, half width 0.0960...
  const auto ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.low, 0.40383, 1e-5);
  EXPECT_NEAR(ci.high, 0.59617, 1e-5);
}

TEST(MonteCarlo, SameSeedSameResult) {
  const auto a = mc_lower_tail(pair_family(), 0.5, 20000, 42);
  const auto b = mc_lower_tail(pair_family(), 0.5, 20000, 42);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(MonteCarlo, WorkerCountIsPartOfTheStreamButDeterministic) {
  MCOptions opts{4};
  const auto a = mc_lower_tail(pair_family(), 0.5, 20000, 9, opts);
  const auto b = mc_lower_tail(pair_family(), 0.5, 20000, 9, opts);
  EXPECT_EQ(a.hits, b.hits);
}

TEST(MonteCarlo, AgreesWithExact) {
  const auto e = mc_lower_tail(pair_family(), 0.5, 100000, 3);
  EXPECT_NEAR(e.point, 0.625, 0.01);
  EXPECT_LE(e.ci_low, e.point);
  EXPECT_GE(e.ci_high, e.point);
}

TEST(MonteCarlo, ZeroSamplesRejected) { EXPECT_THROW(mc_lower_tail(pair_family(), 0.5, 0, 1), Error); }

TEST(MonteCarlo, HistogramSumsToSamples) {
  const auto h = mc_histogram(pair_family(), 5000, 11);
  std::uint64_t total = 0;
  for (auto c : h) total += c;
  EXPECT_EQ(total, 5000u);
}

TEST(MonteCarlo, SubstreamSeedsDiffer) {
  EXPECT_NE(substream_seed(1, 0), substream_seed(1, 1));
  EXPECT_NE(substream_seed(1, 0), substream_seed(2, 0));
}
