#pragma once

// Brute-force ground truth: the full distribution of X over all 2^N outcomes.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tailkit/indicator.hpp"
#include "tailkit/numeric.hpp"

namespace tailkit {

struct ExactOptions {
  std::size_t max_ground = 26;
};

struct ExactDistribution {
  std::vector<std::int64_t> support;  // sorted distinct values of X
  std::vector<double> pmf;            // probability of each support value
  std::size_t source_size = 0;        // N of the 2^N enumeration

  double mean() const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < support.size(); ++i) acc.add(static_cast<double>(support[i]) * pmf[i]);
    return acc.value();
  }

  double variance() const {
    const double m = mean();
    CompensatedSum acc;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const double d = static_cast<double>(support[i]) - m;
      acc.add(d * d * pmf[i]);
    }
    return acc.value();
  }

  /// Pr(X <= cutoff).
  double cdf(std::int64_t cutoff) const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < support.size() && support[i] <= cutoff; ++i) acc.add(pmf[i]);
    return acc.value();
  }

  /// Pr(X = value).
  double at(std::int64_t value) const {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] == value) return pmf[i];
    }
    return 0.0;
  }

  /// log E e^{-sX}, computed in log space.
  double log_laplace(double s) const {
    std::vector<double> terms;
    terms.reserve(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (pmf[i] > 0.0) terms.push_back(std::log(pmf[i]) - s * static_cast<double>(support[i]));
    }
    return log_sum_exp(terms);
  }

  /// log E[e^{-sX} 1{X <= cutoff}].
  double log_truncated_laplace(double s, std::int64_t cutoff) const {
    std::vector<double> terms;
    for (std::size_t i = 0; i < support.size() && support[i] <= cutoff; ++i) {
      if (pmf[i] > 0.0) terms.push_back(std::log(pmf[i]) - s * static_cast<double>(support[i]));
    }
    return log_sum_exp(terms);
  }
};

namespace detail {

inline void check_enumerable(std::size_t n, const ExactOptions& options) {
  if (n > options.max_ground || n > 62) {
    throw Error("exact enumeration refused: ground set has N = " + std::to_string(n) +
                " elements, above the cap of " + std::to_string(std::min<std::size_t>(options.max_ground, 62)));
  }
}

inline std::uint64_t member_mask(const Member& q) {
  std::uint64_t mask = 0;
  for (Element i : q) mask |= std::uint64_t{1} << i;
  return mask;
}

// Outcome weights prod_{i in S} p_i prod_{i not in S} (1 - p_i) for the
// elements [offset, offset + width).
inline std::vector<double> half_weights(std::span<const double> probs, std::size_t offset, std::size_t width) {
  std::vector<double> w(std::size_t{1} << width, 1.0);
  for (std::size_t s = 0; s < w.size(); ++s) {
    double v = 1.0;
    for (std::size_t b = 0; b < width; ++b) {
      const double p = probs[offset + b];
      v *= ((s >> b) & 1U) ? p : 1.0 - p;
    }
    w[s] = v;
  }
  return w;
}

/// Walks all outcomes S of an N-element ground set in Gray-code order and
/// calls visit(S, weight, X(S)) where X counts members with Q(alpha) inside S.
template <class Visit>
void for_each_outcome(const IndicatorFamily& family, const ExactOptions& options, Visit&& visit) {
  const std::size_t n = family.ground().size();
  check_enumerable(n, options);

  std::vector<std::uint64_t> masks;
  masks.reserve(family.size());
  std::vector<std::vector<std::uint32_t>> containing(n);
  std::int64_t empties = 0;
  for (std::size_t a = 0; a < family.size(); ++a) {
    const auto& q = family.member(a);
    masks.push_back(member_mask(q));
    if (q.empty()) ++empties;
    for (Element i : q) containing[i].push_back(static_cast<std::uint32_t>(a));
  }

  const std::size_t lo_bits = n / 2;
  const std::size_t hi_bits = n - lo_bits;
  const auto lo = half_weights(family.ground().probs(), 0, lo_bits);
  const auto hi = half_weights(family.ground().probs(), lo_bits, hi_bits);
  const std::uint64_t lo_mask = (std::uint64_t{1} << lo_bits) - 1;

  std::uint64_t outcome = 0;
  std::int64_t count = empties;
  const std::uint64_t total = std::uint64_t{1} << n;
  visit(outcome, lo[0] * hi[0], count);
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto bit = static_cast<unsigned>(__builtin_ctzll(step));
    const std::uint64_t flip = std::uint64_t{1} << bit;
    const bool adding = (outcome & flip) == 0;
    const std::uint64_t after = outcome ^ flip;
    const std::uint64_t with_bit = adding ? after : outcome;
    for (std::uint32_t a : containing[bit]) {
      if ((masks[a] & ~with_bit) == 0) count += adding ? 1 : -1;
    }
    outcome = after;
    visit(outcome, lo[outcome & lo_mask] * hi[outcome >> lo_bits], count);
  }
}

}  // namespace detail

inline ExactDistribution exact_distribution(const IndicatorFamily& family, const ExactOptions& options = {}) {
  std::vector<CompensatedSum> mass(family.size() + 1);
  std::vector<char> seen(family.size() + 1, 0);
  detail::for_each_outcome(family, options, [&](std::uint64_t, double weight, std::int64_t x) {
    if (weight > 0.0) {
      mass[static_cast<std::size_t>(x)].add(weight);
      seen[static_cast<std::size_t>(x)] = 1;
    }
  });
  ExactDistribution dist;
  dist.source_size = family.ground().size();
  for (std::size_t v = 0; v < mass.size(); ++v) {
    if (!seen[v]) continue;
    dist.support.push_back(static_cast<std::int64_t>(v));
    dist.pmf.push_back(mass[v].value());
  }
  return dist;
}

inline double exact_lower_tail(const ExactDistribution& dist, const TailThreshold& t, bool strict = false) {
  return dist.cdf(strict ? t.lt_cutoff : t.le_cutoff);
}

/// Exact Pr(X <= (1 - eps) mu).
inline double exact_lower_tail(const IndicatorFamily& family, double eps, const ExactOptions& options = {}) {
  const auto threshold = lower_tail_threshold(family, eps);
  return exact_lower_tail(exact_distribution(family, options), threshold, false);
}

/// Exact Pr(X < (1 - eps) mu).
inline double exact_strict_lower_tail(const IndicatorFamily& family, double eps, const ExactOptions& options = {}) {
  const auto threshold = lower_tail_threshold(family, eps);
  return exact_lower_tail(exact_distribution(family, options), threshold, true);
}

/// E e^{-sX} for s >= 0.
inline double exact_laplace(const IndicatorFamily& family, double s, const ExactOptions& options = {}) {
  if (!(s >= 0.0)) throw Error("exact_laplace: s must be nonnegative");
  return std::exp(exact_distribution(family, options).log_laplace(s));
}

inline double exact_variance(const IndicatorFamily& family, const ExactOptions& options = {}) {
  return exact_distribution(family, options).variance();
}

}  // namespace tailkit
