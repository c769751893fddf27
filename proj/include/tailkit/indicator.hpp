#pragma once

// Indicator families over binomial random subsets.
//
// A ground set of N elements is sampled with independent inclusion
// probabilities p_i. Each member alpha of a family carries a subset Q(alpha)
// of the ground set and contributes I_alpha = 1{Q(alpha) inside the sample}
// to the count X = sum_alpha I_alpha.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailkit/numeric.hpp"

namespace tailkit {

using Element = std::uint32_t;
using Member = std::vector<Element>;  // sorted, no duplicates

class GroundSet {
 public:
  GroundSet() = default;

  explicit GroundSet(std::vector<double> probs) : probs_(std::move(probs)) {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const double p = probs_[i];
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error("ground set: probability of element " + std::to_string(i) + " is outside [0,1]");
      }
    }
  }

  static GroundSet uniform(std::size_t size, double p) { return GroundSet(std::vector<double>(size, p)); }

  std::size_t size() const { return probs_.size(); }
  double prob(Element i) const { return probs_.at(i); }
  std::span<const double> probs() const { return probs_; }

  bool is_uniform() const {
    return std::adjacent_find(probs_.begin(), probs_.end(), std::not_equal_to<>()) == probs_.end();
  }

  /// Common probability of a uniform ground set (0 for an empty one).
  double uniform_prob() const {
    if (!is_uniform()) throw Error("ground set: probabilities are not uniform");
    return probs_.empty() ? 0.0 : probs_.front();
  }

 private:
  std::vector<double> probs_;
};

class IndicatorFamily {
 public:
  IndicatorFamily() = default;

  IndicatorFamily(GroundSet ground, std::vector<Member> members, std::vector<std::string> labels = {})
      : ground_(std::move(ground)), members_(std::move(members)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != members_.size()) {
      throw Error("indicator family: label count does not match member count");
    }
    for (auto& m : members_) {
      std::sort(m.begin(), m.end());
      m.erase(std::unique(m.begin(), m.end()), m.end());
      if (!m.empty() && m.back() >= ground_.size()) {
        throw Error("indicator family: member references element " + std::to_string(m.back()) +
                    " outside a ground set of size " + std::to_string(ground_.size()));
      }
    }
  }

  const GroundSet& ground() const { return ground_; }
  std::span<const Member> members() const { return members_; }
  const Member& member(std::size_t alpha) const { return members_.at(alpha); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const std::string> labels() const { return labels_; }

  std::size_t min_member_size() const {
    std::size_t best = members_.empty() ? 0 : members_.front().size();
    for (const auto& m : members_) best = std::min(best, m.size());
    return best;
  }

 private:
  GroundSet ground_;
  std::vector<Member> members_;
  std::vector<std::string> labels_;
};

/// E I_alpha = prod_{i in Q(alpha)} p_i.
inline double expect_indicator(const IndicatorFamily& family, std::size_t alpha) {
  if (alpha >= family.size()) {
    throw Error("expect_indicator: member index " + std::to_string(alpha) + " out of range (family has " +
                std::to_string(family.size()) + " members)");
  }
  double value = 1.0;
  for (Element i : family.member(alpha)) value *= family.ground().prob(i);
  return value;
}

/// Dependency statistics mu, Pi, Lambda, delta.
///
/// Lambda sums E I_a I_b over ORDERED pairs (a, b) with a != b whose sets
/// intersect, so every unordered overlapping pair contributes twice.
struct FamilyStats {
  double mu = 0.0;
  double pi = 0.0;
  double lambda = 0.0;
  std::optional<double> delta;  // empty when mu == 0
  std::size_t n_members = 0;
  std::uint64_t ordered_overlap_pairs = 0;

  /// delta, read as 0 when undefined (mu == 0 forces Lambda == 0).
  double delta_or_zero() const { return delta.value_or(0.0); }
};

inline FamilyStats compute_stats(const IndicatorFamily& family) {
  FamilyStats stats;
  const std::size_t m = family.size();
  const std::size_t n = family.ground().size();
  stats.n_members = m;
  if (m == 0) {
    stats.delta.reset();
    return stats;
  }

  std::vector<double> means(m);
  std::vector<std::vector<std::uint32_t>> incidence(n);
  CompensatedSum mu;
  for (std::size_t a = 0; a < m; ++a) {
    means[a] = expect_indicator(family, a);
    mu.add(means[a]);
    stats.pi = std::max(stats.pi, means[a]);
    for (Element i : family.member(a)) incidence[i].push_back(static_cast<std::uint32_t>(a));
  }

  // Stamps are a + 1 so zero-initialised arrays start unmarked.
  std::vector<std::size_t> member_stamp(m, 0);
  std::vector<std::size_t> element_stamp(n, 0);
  CompensatedSum overlap;
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t stamp = a + 1;
    const auto& qa = family.member(a);
    for (Element i : qa) element_stamp[i] = stamp;
    member_stamp[a] = stamp;
    for (Element i : qa) {
      for (std::uint32_t b : incidence[i]) {
        if (member_stamp[b] == stamp) continue;
        member_stamp[b] = stamp;
        double joint = means[a];
        for (Element j : family.member(b)) {
          if (element_stamp[j] != stamp) joint *= family.ground().prob(j);
        }
        overlap.add(joint);
        ++stats.ordered_overlap_pairs;
      }
    }
  }

  stats.mu = mu.value();
  stats.lambda = stats.mu + overlap.value();
  if (stats.mu > 0.0) {
    stats.delta = stats.lambda / stats.mu - 1.0;
  }
  return stats;
}

/// Integer cut-offs for the lower-tail events {X <= (1-eps) mu} and {X < (1-eps) mu}.
struct TailThreshold {
  double eps = 0.0;
  double threshold = 0.0;   // (1 - eps) * mu
  std::int64_t le_cutoff = 0;  // largest integer v with v <= threshold (-1 if none)
  std::int64_t lt_cutoff = 0;  // largest integer v with v < threshold (-1 if none)
  bool exact = false;          // decided in rational arithmetic
};

namespace detail {

inline constexpr std::size_t kExactThresholdMemberLimit = 100000;

inline bool dyadic_inputs(const IndicatorFamily& family, double eps) {
  if (!is_small_dyadic(eps)) return false;
  if (family.size() > kExactThresholdMemberLimit) return false;
  for (double p : family.ground().probs()) {
    if (!is_small_dyadic(p)) return false;
  }
  return true;
}

inline Rational exact_mean(const IndicatorFamily& family) {
  std::vector<Rational> probs;
  probs.reserve(family.ground().size());
  for (double p : family.ground().probs()) probs.push_back(exact_rational(p));
  Rational mu = 0;
  for (const auto& q : family.members()) {
    Rational term = 1;
    for (Element i : q) term *= probs[i];
    mu += term;
  }
  return mu;
}

}  // namespace detail

/// Cut-offs for the lower tail at relative deviation eps.
///
/// When eps and every p_i are dyadic rationals with denominator at most 2^32,
/// mu and the threshold are formed exactly; otherwise the comparison uses a
/// relative slack of 1e-12 so that lattice points are not misclassified.
inline TailThreshold lower_tail_threshold(const IndicatorFamily& family, double mu, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error("lower tail: eps must lie in [0,1]");
  TailThreshold t;
  t.eps = eps;
  t.threshold = (1.0 - eps) * mu;
  if (detail::dyadic_inputs(family, eps)) {
    const Rational exact = (Rational(1) - exact_rational(eps)) * detail::exact_mean(family);
    t.le_cutoff = rational_floor(exact);
    t.lt_cutoff = rational_ceil(exact) - 1;
    t.exact = true;
  } else {
    t.le_cutoff = floor_with_slack(t.threshold);
    t.lt_cutoff = below_with_slack(t.threshold);
  }
  return t;
}

inline TailThreshold lower_tail_threshold(const IndicatorFamily& family, double eps) {
  return lower_tail_threshold(family, compute_stats(family).mu, eps);
}

}  // namespace tailkit
