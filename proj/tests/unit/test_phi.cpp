#include <gtest/gtest.h>

#include "tailkit/phi.hpp"

using namespace tailkit;

TEST(Phi, FrozenValues) {
  EXPECT_NEAR(phi_lower(0.5), 0.1534264097200273452913839, 1e-16);
  EXPECT_NEAR(phi_lower(0.3), 0.050327539242887330801, 1e-16);
  EXPECT_NEAR(phi_lower(0.8), 0.47811241751317999655, 1e-15);
  EXPECT_NEAR(phi_lower(1.0 - std::exp(-1.0)), 0.26424111765711534438, 1e-15);
  EXPECT_DOUBLE_EQ(phi_lower(1.0), 1.0);
  EXPECT_DOUBLE_EQ(phi_lower(0.0), 0.0);
}

TEST(Phi, TinyArgumentsKeepRelativePrecision) {
  const double x = 1e-9;
  EXPECT_NEAR(phi(x) / (x * x / 2), 1.0, 1e-6);
  EXPECT_GT(phi_lower(1e-9), 0.0);
}

TEST(Phi, DomainErrors) {
  EXPECT_THROW(phi(-1.5), Error);
  EXPECT_THROW(phi_value(1.5), Error);
}

TEST(VarphiBounds, HoldAcrossTheUnitInterval) {
  for (int i = 0; i <= 1000; ++i) {
    const double eps = i / 1000.0;
    EXPECT_TRUE(varphi_bounds_check(eps).all()) << eps;
  }
}

TEST(Varphi2, RangeAndValues) {
  EXPECT_TRUE(varphi2_check(1.0).all());
  EXPECT_TRUE(varphi2_check(varphi2_min_eps()).all());
  EXPECT_THROW(varphi2_check(0.5), Error);
}

TEST(Varphi3, SecondBranchFrozenExample) {
  // eps = 0.1, A = 1.04: factor 1 + sqrt(0.04) = 1.2
  const auto r = varphi3_factor(0.1, 1.04);
  ASSERT_TRUE(r.second.has_value());
  EXPECT_NEAR(r.second->factor, 1.2, 1e-12);
  EXPECT_NEAR(r.second->lhs, 0.0056058800575429043987, 1e-15);
  EXPECT_NEAR(r.second->rhs, 0.0062106430895475951463, 1e-15);
  EXPECT_TRUE(r.second->holds);
}

TEST(Varphi3, FirstBranchNeedsSmallProduct) {
  EXPECT_THROW(varphi3_factor(0.9, 2.0), Error);
  const auto r = varphi3_factor(0.3, 2.0);
  ASSERT_TRUE(r.first.has_value());
  EXPECT_TRUE(r.first->holds);
}
