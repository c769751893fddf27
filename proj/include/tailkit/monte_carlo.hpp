#pragma once

// Plain Monte Carlo estimates of lower-tail probabilities.
//
// Sampling is deterministic in (seed, samples, workers): worker w draws its
// share of the samples from an mt19937_64 stream seeded by a SplitMix64 mix of
// (seed, w), and per-worker histograms are merged in worker order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "tailkit/indicator.hpp"

namespace tailkit {

struct MCEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct MCOptions {
  unsigned workers = 1;
};

/// Two-sided 95% normal quantile used for Wilson intervals.
inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

inline Interval wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = kWilsonZ95) {
  if (samples == 0) return {0.0, 1.0};
  const double n = static_cast<double>(samples);
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::clamp(std::min(centre - half, phat), 0.0, 1.0), std::clamp(std::max(centre + half, phat), 0.0, 1.0)};
}

inline MCEstimate make_estimate(std::uint64_t hits, std::uint64_t samples, std::uint64_t seed) {
  MCEstimate e;
  e.hits = hits;
  e.samples = samples;
  e.seed = seed;
  e.point = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
  const auto ci = wilson_interval(hits, samples);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  return e;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream used by worker `worker` for master seed `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t worker) {
  return splitmix64(splitmix64(seed) ^ splitmix64(worker + 0x632be59bd9b4e019ULL));
}

namespace detail {

// Element i is included iff a uniform 64-bit draw is below thresholds[i];
// always_in marks p_i == 1.
struct InclusionRule {
  std::vector<std::uint64_t> thresholds;
  std::vector<char> always_in;

  explicit InclusionRule(std::span<const double> probs) : thresholds(probs.size()), always_in(probs.size(), 0) {
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] >= 1.0) {
        always_in[i] = 1;
      } else {
        thresholds[i] = static_cast<std::uint64_t>(std::ldexp(probs[i], 64));
      }
    }
  }

  bool draw(std::size_t i, std::mt19937_64& rng) const {
    const std::uint64_t u = rng();
    return always_in[i] || u < thresholds[i];
  }
};

inline void sample_histogram(const IndicatorFamily& family, std::uint64_t count, std::uint64_t stream_seed,
                             std::vector<std::uint64_t>& histogram) {
  const std::size_t n = family.ground().size();
  const InclusionRule rule(family.ground().probs());
  std::mt19937_64 rng(stream_seed);
  if (n <= 64) {
    std::vector<std::uint64_t> masks;
    masks.reserve(family.size());
    for (const auto& q : family.members()) {
      std::uint64_t m = 0;
      for (Element i : q) m |= std::uint64_t{1} << i;
      masks.push_back(m);
    }
    for (std::uint64_t s = 0; s < count; ++s) {
      std::uint64_t outcome = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (rule.draw(i, rng)) outcome |= std::uint64_t{1} << i;
      }
      std::size_t x = 0;
      for (std::uint64_t m : masks) x += (m & ~outcome) == 0;
      ++histogram[x];
    }
    return;
  }
  std::vector<char> present(n);
  for (std::uint64_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < n; ++i) present[i] = rule.draw(i, rng);
    std::size_t x = 0;
    for (const auto& q : family.members()) {
      x += std::all_of(q.begin(), q.end(), [&](Element i) { return present[i] != 0; });
    }
    ++histogram[x];
  }
}

}  // namespace detail

/// Histogram of X over `samples` independent realizations: entry v counts samples with X = v.
inline std::vector<std::uint64_t> mc_histogram(const IndicatorFamily& family, std::uint64_t samples,
                                               std::uint64_t seed, const MCOptions& options = {}) {
  const unsigned workers = std::max(1U, options.workers);
  std::vector<std::vector<std::uint64_t>> parts(workers, std::vector<std::uint64_t>(family.size() + 1, 0));
  auto share = [&](unsigned w) { return samples * (w + 1) / workers - samples * w / workers; };
  if (workers == 1) {
    detail::sample_histogram(family, samples, substream_seed(seed, 0), parts[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(
          [&, w] { detail::sample_histogram(family, share(w), substream_seed(seed, w), parts[w]); });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> total(family.size() + 1, 0);
  for (const auto& part : parts) {
    for (std::size_t v = 0; v < total.size(); ++v) total[v] += part[v];
  }
  return total;
}

/// Estimate of Pr(X <= cutoff) (or Pr(X < threshold) when a strict cutoff is passed).
inline MCEstimate estimate_from_histogram(std::span<const std::uint64_t> histogram, std::int64_t cutoff,
                                          std::uint64_t seed) {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  for (std::size_t v = 0; v < histogram.size(); ++v) {
    samples += histogram[v];
    if (static_cast<std::int64_t>(v) <= cutoff) hits += histogram[v];
  }
  return make_estimate(hits, samples, seed);
}

/// Monte Carlo estimate of Pr(X <= (1 - eps) mu) with a 95% Wilson interval.
inline MCEstimate mc_lower_tail(const IndicatorFamily& family, double eps, std::uint64_t samples, std::uint64_t seed,
                                const MCOptions& options = {}) {
  if (samples == 0) throw Error("mc_lower_tail: samples must be positive");
  const auto threshold = lower_tail_threshold(family, eps);
  const auto histogram = mc_histogram(family, samples, seed, options);
  return estimate_from_histogram(histogram, threshold.le_cutoff, seed);
}

/// One sampling pass shared by several eps values.
inline std::vector<MCEstimate> mc_lower_tails(const IndicatorFamily& family, std::span<const double> eps,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const MCOptions& options = {}) {
  if (samples == 0) throw Error("mc_lower_tails: samples must be positive");
  const double mu = compute_stats(family).mu;
  const auto histogram = mc_histogram(family, samples, seed, options);
  std::vector<MCEstimate> out;
  out.reserve(eps.size());
  for (double e : eps) {
    out.push_back(estimate_from_histogram(histogram, lower_tail_threshold(family, mu, e).le_cutoff, seed));
  }
  return out;
}

}  // namespace tailkit
