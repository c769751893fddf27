#include <gtest/gtest.h>

#include "random_family.hpp"
#include "tailkit/bounds.hpp"
#include "tailkit/exact.hpp"

using namespace tailkit;

namespace {

IndicatorFamily singletons(std::size_t n, double p) {
  std::vector<Member> m;
  for (std::size_t i = 0; i < n; ++i) m.push_back({static_cast<Element>(i)});
  return IndicatorFamily(GroundSet(std::vector<double>(n, p)), std::move(m));
}

IndicatorFamily overlapping_pair() { return IndicatorFamily(GroundSet({0.5, 0.5, 0.5}), {{0, 1}, {1, 2}}); }

}  // namespace

TEST(Janson, OverlappingPair) {
  const auto b = janson_upper(compute_stats(overlapping_pair()), 0.5);
  EXPECT_NEAR(b.log_value, -0.1534264097200273452913839 / 3.0, 1e-15);
  EXPECT_EQ(b.direction, Direction::upper_on_tail);
  EXPECT_TRUE(b.applicable);
}

TEST(Harris, ProductAndExponential) {
  const auto h = harris_lower(overlapping_pair());
  EXPECT_NEAR(h.product.value(), 0.5625, 1e-15);
  EXPECT_NEAR(h.exponential.log_value, -0.5 / 0.75, 1e-15);
  EXPECT_EQ(h.product.event, TailEvent::zero);
}

TEST(Harris, CertainMemberMakesExponentialInapplicable) {
  IndicatorFamily f(GroundSet({1.0, 0.5}), {{0}, {1}});
  const auto h = harris_lower(f);
  EXPECT_FALSE(h.exponential.applicable);
  EXPECT_EQ(h.product.value(), 0.0);
}

TEST(LtMain, GateFailsForLargePi) {
  const auto b = lt_main(compute_stats(overlapping_pair()), 0.5);
  EXPECT_FALSE(b.applicable);
  EXPECT_FALSE(b.condition("max{Pi,1{eps<1}delta}<=2^-14"));
}

TEST(LtMain, ApplicableInChernoffRegime) {
  const auto f = singletons(1u << 16, std::ldexp(1.0, -15));  // mu = 2, Pi = 2^-15
  const auto b = lt_main(compute_stats(f), 1.0);
  EXPECT_TRUE(b.applicable);
  EXPECT_NEAR(b.constants.at("xi"), 135.0 * std::pow(std::ldexp(1.0, -15), 0.125), 1e-12);
}

TEST(Lt2, KConstant) {
  const auto s = compute_stats(overlapping_pair());
  const auto b = lt2(s, 0.5);
  EXPECT_NEAR(b.constants.at("K"), 5000.0 / std::pow(0.75, 5), 1e-9);
  EXPECT_EQ(b.constants.at("delta_star"), 0.0);
}

TEST(Lt3, FrozenXi) {
  // mu = 8, Pi = 1/8, delta = 0, eps = 1/2: (1-eps) eps^2 mu = 1, xi = 135 / sqrt(e)
  const auto b = lt3(compute_stats(singletons(64, 0.125)), 0.5);
  EXPECT_NEAR(b.constants.at("xi"), 81.881639061205512187, 1e-12);
  EXPECT_TRUE(b.condition("e(1-eps)eps^2*mu>=1"));
  EXPECT_FALSE(b.condition("eps<=1-4max{Pi^1/4,delta^1/4}"));
  EXPECT_EQ(b.event, TailEvent::below);
}

TEST(Lt4, RangeGate) {
  const auto s = compute_stats(overlapping_pair());
  EXPECT_FALSE(lt4(s, 0.5).applicable);
  const auto b = lt4(s, 1.0);
  EXPECT_TRUE(b.applicable);
  EXPECT_NEAR(b.constants.at("zeta"), 10.0 * (0.25 / 0.75), 1e-15);
}

TEST(AllBounds, OrderAndNames) {
  const auto f = overlapping_pair();
  const auto v = all_bounds(f, compute_stats(f), 0.5);
  const std::vector<std::string> names{"janson_upper", "harris_product", "harris_exponential", "lt_main",
                                       "lt2",          "lt3",            "lt4"};
  ASSERT_EQ(v.size(), names.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i].name, names[i]);
}

TEST(AllBounds, RejectsBadEps) {
  EXPECT_THROW(janson_upper(compute_stats(overlapping_pair()), 1.5), Error);
  EXPECT_THROW(lt_main(compute_stats(overlapping_pair()), -0.1), Error);
}

TEST(Sandwich, RandomFamilies) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const auto f = fuzz::random_family(rng, 10, 1 + trial % 8, 1, 4);
    const auto s = compute_stats(f);
    const auto dist = exact_distribution(f);
    for (double eps : {0.1, 0.4, 0.7, 1.0}) {
      const auto t = lower_tail_threshold(f, eps);
      const double le = exact_lower_tail(dist, t, false);
      const double lt = exact_lower_tail(dist, t, true);
      for (const auto& b : all_bounds(f, s, eps)) {
        if (!b.applicable) continue;
        const double truth = b.event == TailEvent::at_most ? le : b.event == TailEvent::below ? lt : dist.at(0);
        const double lt_log = truth > 0 ? std::log(truth) : kNegInf;
        if (b.direction == Direction::upper_on_tail) {
          EXPECT_LE(lt_log, b.log_value + 1e-10) << b.name << " trial " << trial;
        } else {
          EXPECT_LE(b.log_value, lt_log + 1e-10) << b.name << " trial " << trial;
        }
      }
    }
  }
}

TEST(Laplace, LowerBoundHoldsOnRandomFamilies) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = fuzz::random_family(rng, 9, 6, 1, 3);
    const auto s = compute_stats(f);
    const auto dist = exact_distribution(f);
    for (double sv : {0.1, 0.5, 1.0, 2.0}) {
      if (s.pi * -std::expm1(-sv) >= 1.0) continue;
      EXPECT_LE(laplace_lower(s, sv), dist.log_laplace(sv) + 1e-12);
    }
    for (auto [r, t] : {std::pair{0.1, 0.5}, std::pair{0.5, 2.0}, std::pair{0.0, 1.0}}) {
      EXPECT_LE(laplace_ratio_lower(s, r, t), dist.log_laplace(r) - dist.log_laplace(t) + 1e-12);
    }
  }
}

TEST(Laplace, Preconditions) {
  const auto s = compute_stats(overlapping_pair());
  EXPECT_THROW(laplace_lower(s, -1.0), Error);
  EXPECT_THROW(laplace_ratio_lower(s, 2.0, 1.0), Error);
  IndicatorFamily certain(GroundSet({1.0}), {{0}});
  EXPECT_THROW(laplace_lower(compute_stats(certain), 50.0), Error);
}

TEST(Holder, DecompositionHoldsOnRandomFamilies) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = fuzz::random_family(rng, 10, 5, 1, 3);
    for (double eps : {0.2, 0.6}) {
      const auto h = holder_report(f, eps, 0.5, 0.5);
      EXPECT_TRUE(h.holder_holds) << trial;
      if (h.bc_bound_applicable) {
        EXPECT_TRUE(h.bc_bound_holds) << trial;
      }
    }
  }
}

TEST(Holder, OverlappingPairFactors) {
  const auto h = holder_report(overlapping_pair(), 0.5, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(h.p_holder, 2.0);
  EXPECT_DOUBLE_EQ(h.q_holder, 2.0);
  EXPECT_NEAR(h.z, std::log(2.0), 1e-15);
  EXPECT_TRUE(h.holder_holds);
  EXPECT_LE(h.log_product(), h.log_strict_tail + 1e-12);
}

TEST(Holder, Preconditions) {
  EXPECT_THROW(holder_report(overlapping_pair(), 1.0, 0.5, 0.5), Error);
  EXPECT_THROW(holder_report(overlapping_pair(), 0.5, 0.0, 0.5), Error);
}
