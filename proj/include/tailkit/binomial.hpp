#pragma once

// Binomial and Poisson-binomial lower tails in log space.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tailkit/numeric.hpp"

namespace tailkit {

/// log Pr(Bin(n, p) <= m), summed term by term from k = 0 with the ratio
/// recurrence pmf(k+1)/pmf(k) = (n-k)/(k+1) * p/(1-p).
inline double log_binomial_cdf(std::uint64_t n, double p, std::int64_t m) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("log_binomial_cdf: p must lie in [0,1]");
  if (m < 0) return kNegInf;
  if (static_cast<std::uint64_t>(m) >= n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return kNegInf;  // all mass at n > m
  const double log_odds = std::log(p) - std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(m) + 1);
  double log_pmf = static_cast<double>(n) * std::log1p(-p);
  terms.push_back(log_pmf);
  for (std::int64_t k = 0; k < m; ++k) {
    const auto kk = static_cast<double>(k);
    log_pmf += std::log((static_cast<double>(n) - kk) / (kk + 1.0)) + log_odds;
    terms.push_back(log_pmf);
  }
  return std::min(0.0, log_sum_exp(terms));
}

/// log Pr(S <= m) for a sum S of independent Bernoulli(p_i), by exact convolution.
inline double log_poisson_binomial_cdf(std::span<const double> probs, std::int64_t m) {
  if (m < 0) return kNegInf;
  if (static_cast<std::size_t>(m) >= probs.size()) return 0.0;
  const auto width = static_cast<std::size_t>(m) + 1;
  // dist[v] = Pr(partial sum = v) for v <= m; mass above m is dropped.
  std::vector<double> dist(width, 0.0);
  dist[0] = 1.0;
  for (double p : probs) {
    for (std::size_t v = width; v-- > 0;) {
      dist[v] = dist[v] * (1.0 - p) + (v > 0 ? dist[v - 1] * p : 0.0);
    }
  }
  CompensatedSum acc;
  for (double d : dist) acc.add(d);
  const double total = acc.value();
  return total > 0.0 ? std::min(0.0, std::log(total)) : kNegInf;
}

}  // namespace tailkit
