#pragma once

// Symmetric decompositions X = sum_beta I_beta X_beta with
// X_beta = sum_alpha w_{alpha,beta} I_{Q(alpha) \ Q(beta)}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailkit/exact.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/numeric.hpp"

namespace tailkit {

struct WeightedSet {
  double weight = 0.0;
  Member set;  // Q(alpha); the difference with Q(beta) is taken on evaluation
};

struct SymmetricDecomposition {
  IndicatorFamily y_family;                    // the beta's, over the same ground set as X
  std::vector<std::vector<WeightedSet>> parts;  // parts[beta] lists (w_{alpha,beta}, Q(alpha)) with w > 0
};

inline void validate(const SymmetricDecomposition& d) {
  if (d.parts.size() != d.y_family.size()) {
    throw Error("decomposition: " + std::to_string(d.parts.size()) + " part lists for " +
                std::to_string(d.y_family.size()) + " beta members");
  }
  const std::size_t n = d.y_family.ground().size();
  for (const auto& part : d.parts) {
    for (const auto& ws : part) {
      if (!(ws.weight >= 0.0 && std::isfinite(ws.weight))) throw Error("decomposition: weights must be finite and >= 0");
      for (Element i : ws.set) {
        if (i >= n) throw Error("decomposition: set references element " + std::to_string(i) + " outside the ground set");
      }
    }
  }
}

namespace detail {

inline Member set_difference(const Member& a, const Member& b) {
  Member out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline Member sorted_unique(Member m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

}  // namespace detail

/// E X_beta for every beta.
inline std::vector<double> part_means(const SymmetricDecomposition& d) {
  validate(d);
  const auto probs = d.y_family.ground().probs();
  std::vector<double> out;
  out.reserve(d.parts.size());
  for (std::size_t b = 0; b < d.parts.size(); ++b) {
    CompensatedSum acc;
    for (const auto& ws : d.parts[b]) {
      double term = ws.weight;
      for (Element i : detail::set_difference(detail::sorted_unique(ws.set), d.y_family.member(b))) term *= probs[i];
      acc.add(term);
    }
    out.push_back(acc.value());
  }
  return out;
}

/// Symmetry defect kappa = max_beta E X_beta / min_beta E X_beta - 1.
struct KappaValue {
  double value = 0.0;            // +inf when min_beta E X_beta = 0
  std::optional<Rational> exact; // set when every probability and weight is dyadic
  double min_part_mean = 0.0;
  double max_part_mean = 0.0;

  bool defined() const { return std::isfinite(value); }
};

inline KappaValue kappa(const SymmetricDecomposition& d) {
  const auto means = part_means(d);
  KappaValue k;
  if (means.empty()) return k;
  k.min_part_mean = *std::min_element(means.begin(), means.end());
  k.max_part_mean = *std::max_element(means.begin(), means.end());

  bool dyadic = true;
  for (double p : d.y_family.ground().probs()) dyadic = dyadic && is_small_dyadic(p);
  for (const auto& part : d.parts) {
    for (const auto& ws : part) dyadic = dyadic && is_small_dyadic(ws.weight);
  }
  if (dyadic) {
    std::vector<Rational> probs;
    for (double p : d.y_family.ground().probs()) probs.push_back(exact_rational(p));
    std::optional<Rational> lo, hi;
    for (std::size_t b = 0; b < d.parts.size(); ++b) {
      Rational mean = 0;
      for (const auto& ws : d.parts[b]) {
        Rational term = exact_rational(ws.weight);
        for (Element i : detail::set_difference(detail::sorted_unique(ws.set), d.y_family.member(b))) term *= probs[i];
        mean += term;
      }
      if (!lo || mean < *lo) lo = mean;
      if (!hi || mean > *hi) hi = mean;
    }
    if (*lo == 0) {
      k.value = *hi == 0 ? 0.0 : kInf;
      if (*hi == 0) k.exact = Rational(0);
    } else {
      k.exact = *hi / *lo - 1;
      k.value = static_cast<double>(*k.exact);
    }
    return k;
  }
  if (k.min_part_mean == 0.0) {
    k.value = k.max_part_mean == 0.0 ? 0.0 : kInf;
  } else {
    k.value = k.max_part_mean / k.min_part_mean - 1.0;
  }
  return k;
}

struct ReconstructionCheck {
  bool holds = true;
  std::uint64_t outcomes = 0;
  double max_error = 0.0;
  std::optional<std::uint64_t> first_failure;  // outcome bitmask
};

/// Checks sum_beta I_beta X_beta == X on every outcome of the ground set.
inline ReconstructionCheck check_reconstruction(const SymmetricDecomposition& d, const IndicatorFamily& target,
                                                const ExactOptions& options = {}, double tol = 1e-9) {
  validate(d);
  if (d.y_family.ground().size() != target.ground().size()) {
    throw Error("reconstruction: decomposition and target use different ground sets");
  }
  struct Term {
    double weight;
    std::uint64_t mask;
  };
  std::vector<std::uint64_t> beta_masks;
  std::vector<std::vector<Term>> terms(d.parts.size());
  for (std::size_t b = 0; b < d.parts.size(); ++b) {
    beta_masks.push_back(detail::member_mask(d.y_family.member(b)));
    for (const auto& ws : d.parts[b]) {
      terms[b].push_back({ws.weight, detail::member_mask(detail::sorted_unique(ws.set)) & ~beta_masks[b]});
    }
  }
  ReconstructionCheck check;
  detail::for_each_outcome(target, options, [&](std::uint64_t outcome, double, std::int64_t x) {
    double total = 0.0;
    for (std::size_t b = 0; b < terms.size(); ++b) {
      if ((beta_masks[b] & ~outcome) != 0) continue;
      for (const auto& t : terms[b]) {
        if ((t.mask & ~outcome) == 0) total += t.weight;
      }
    }
    const double err = std::abs(total - static_cast<double>(x));
    check.max_error = std::max(check.max_error, err);
    if (err > tol && check.holds) {
      check.holds = false;
      check.first_failure = outcome;
    }
    ++check.outcomes;
  });
  return check;
}

}  // namespace tailkit
