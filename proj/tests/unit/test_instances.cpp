#include <gtest/gtest.h>

#include "tailkit/decomposition.hpp"
#include "tailkit/exact.hpp"
#include "tailkit/instances.hpp"
#include "tailkit/kgraph.hpp"

using namespace tailkit;

TEST(KGraph, Validation) {
  EXPECT_THROW(KGraph(2, 3, {{0, 0}}), Error);
  EXPECT_THROW(KGraph(2, 3, {{0, 5}}), Error);
  EXPECT_THROW(KGraph(2, 3, {{0, 1, 2}}), Error);
  EXPECT_THROW(KGraph(1, 3, {}), Error);
}

TEST(KGraph, Named) {
  EXPECT_EQ(named_kgraph("K4").e(), 6u);
  EXPECT_EQ(named_kgraph("P3").e(), 2u);
  EXPECT_EQ(named_kgraph("C4").e(), 4u);
  EXPECT_EQ(named_kgraph("edge").e(), 1u);
  EXPECT_THROW(named_kgraph("Q7"), Error);
}

TEST(KGraph, AutomorphismsAndIsomorphism) {
  EXPECT_EQ(automorphism_count(named_kgraph("K3")), 6u);
  EXPECT_EQ(automorphism_count(named_kgraph("P3")), 2u);
  EXPECT_EQ(automorphism_count(named_kgraph("C4")), 8u);
  EXPECT_EQ(automorphism_count(complete_kgraph(3, 4)), 24u);
  EXPECT_TRUE(isomorphic(KGraph(2, 3, {{0, 1}, {0, 2}}), named_kgraph("P3")));
  EXPECT_FALSE(isomorphic(named_kgraph("P4"), named_kgraph("C4")));
}

TEST(KGraph, Chromatic) {
  EXPECT_EQ(chromatic_number(named_kgraph("K3")), 3u);
  EXPECT_EQ(chromatic_number(named_kgraph("C4")), 2u);
  EXPECT_EQ(chromatic_number(named_kgraph("C5")), 3u);
}

TEST(Copies, CountsMatchClosedForm) {
  EXPECT_EQ(copy_count(named_kgraph("K3"), 6), 20u);
  EXPECT_EQ(copy_count(named_kgraph("K4"), 6), 15u);
  EXPECT_EQ(copy_count(named_kgraph("P3"), 5), 30u);
  EXPECT_EQ(enumerate_copies(named_kgraph("C4"), 5).size(), copy_count(named_kgraph("C4"), 5));
  EXPECT_EQ(enumerate_copies(named_kgraph("P3"), 5).size(), 30u);
}

TEST(Copies, ThreeUniform) {
  const KGraph loose(3, 5, {{0, 1, 2}, {2, 3, 4}});
  EXPECT_EQ(automorphism_count(loose), 8u);
  EXPECT_EQ(enumerate_copies(loose, 6).size(), copy_count(loose, 6));
}

TEST(Copies, TooSmallHost) { EXPECT_THROW(enumerate_copies(named_kgraph("K4"), 3), Error); }

TEST(SubgraphFamily, K3Stats) {
  const auto inst = subgraph_family(named_kgraph("K3"), 5, 0.5);
  EXPECT_EQ(inst.copies, 10u);
  EXPECT_EQ(inst.family.ground().size(), 10u);
  const auto s = compute_stats(inst.family);
  EXPECT_DOUBLE_EQ(s.mu, 1.25);
  EXPECT_DOUBLE_EQ(s.lambda, 3.125);
  EXPECT_NEAR(lambda_asymptotic(inst), 4.0625, 1e-12);
  EXPECT_DOUBLE_EQ(exact_distribution(inst.family).at(0), 0.37890625);
}

TEST(SubgraphFamily, K3ZeroProbabilityAtN4) {
  const auto inst = subgraph_family(named_kgraph("K3"), 4, 0.5);
  EXPECT_DOUBLE_EQ(exact_distribution(inst.family).at(0), 41.0 / 64);
}

TEST(SubgraphFamily, PhiH) {
  // K3 at n = 5, p = 1/2: min over J of E X_J is the edge count 10 * 1/2 = 5 vs triangle count 1.25.
  const auto inst = subgraph_family(named_kgraph("K3"), 5, 0.5);
  EXPECT_DOUBLE_EQ(inst.phi_h_no_isolated, 1.25);
}

TEST(MK, KnownValues) {
  EXPECT_EQ(m_k(named_kgraph("K3")), boost::rational<long long>(2));
  EXPECT_EQ(m_k(named_kgraph("K4")), boost::rational<long long>(5, 2));
  EXPECT_EQ(m_k(named_kgraph("P3")), boost::rational<long long>(1));
}

TEST(IH, K4Classes) {
  const auto ih = ih_family(named_kgraph("K4"));
  std::map<std::size_t, std::uint64_t> by_edges;
  for (const auto& e : ih) {
    by_edges[e.cls.graph.e()] = e.cls.copies_in_h;
    EXPECT_TRUE(e.copies_induced);
  }
  EXPECT_EQ(by_edges[1], 6u);
  EXPECT_EQ(by_edges[3], 4u);
  EXPECT_EQ(by_edges[6], 1u);
}

TEST(Decomposition, ApKappaExact) {
  EXPECT_EQ(*kappa(ap_family(3, 5, 0.5).decomposition).exact, Rational(1));
  EXPECT_EQ(*kappa(ap_family(3, 9, 0.5).decomposition).exact, Rational(1, 3));
  EXPECT_EQ(*kappa(ap_family(3, 8, 0.5).decomposition).exact, Rational(0));
  EXPECT_FALSE(kappa(ap_family(3, 3, 0.5).decomposition).defined());
}

TEST(Decomposition, SchurKappaExact) {
  EXPECT_EQ(*kappa(schur_family(12, 0.5).decomposition).exact, Rational(2, 9));
  EXPECT_EQ(*kappa(schur_family(4, 0.5).decomposition).exact, Rational(2));
  EXPECT_THROW(schur_family(2, 0.5), Error);
}

TEST(Decomposition, Reconstruction) {
  for (std::uint64_t n : {5, 8}) {
    const auto ap = ap_family(3, n, 0.3);
    EXPECT_TRUE(check_reconstruction(ap.decomposition, ap.family).holds);
    const auto sc = schur_family(n, 0.3);
    EXPECT_TRUE(check_reconstruction(sc.decomposition, sc.family).holds);
  }
}

TEST(Decomposition, DetectsWrongTarget) {
  const auto ap = ap_family(3, 6, 0.5);
  const auto sc = schur_family(6, 0.5);
  EXPECT_FALSE(check_reconstruction(ap.decomposition, sc.family).holds);
}

TEST(Turan, SmallNumbers) {
  EXPECT_EQ(turan_number(named_kgraph("K3"), 5), 6u);
  EXPECT_EQ(turan_number(named_kgraph("K3"), 4), 4u);
  EXPECT_EQ(turan_number(named_kgraph("C4"), 5), 6u);
  EXPECT_DOUBLE_EQ(turan_density(named_kgraph("K4")), 2.0 / 3.0);
}

TEST(Turan, LowerBoundIsBelowExactZeroProbability) {
  const auto h = named_kgraph("K3");
  const auto data = turan_data(h, 5);
  for (double p : {0.2, 0.5, 0.8}) {
    const auto b = turan_lower_bound(h, 5, p, data);
    const auto inst = subgraph_family(h, 5, p);
    EXPECT_LE(b.value(), exact_distribution(inst.family).at(0));
    EXPECT_NEAR(b.value(), std::pow(1 - p, 4), 1e-14);
  }
}
