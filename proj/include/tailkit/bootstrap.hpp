#pragma once

// Transfer bounds: lower tails of X obtained from lower tails of simpler
// variables (the sample size |Gamma_p|, a symmetric decomposition's Y, or the
// count of a subgraph G on half of the vertices), plus the conditional correlation checks
// used along the way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "tailkit/binomial.hpp"
#include "tailkit/bounds.hpp"
#include "tailkit/decomposition.hpp"
#include "tailkit/exact.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/instances.hpp"
#include "tailkit/monte_carlo.hpp"

namespace tailkit {

/// Pr(Z >= E Z + t) <= v / (v + t^2) whenever Var Z <= v.
inline double one_sided_chebyshev(double v, double t) {
  if (!(t > 0.0)) throw Error("one_sided_chebyshev: t must be positive");
  if (!(v >= 0.0)) throw Error("one_sided_chebyshev: v must be nonnegative");
  return v / (v + t * t);
}

/// Moments of X given |Gamma_p| = j, for a uniform probability vector.
template <class Scalar>
struct SizeConditional {
  std::size_t j = 0;
  Scalar cond_mean{};
  Scalar cond_var{};
};

namespace detail {

inline void require_uniform(const IndicatorFamily& family, const char* who) {
  if (!family.ground().is_uniform()) throw Error(std::string(who) + ": requires a uniform probability vector");
}

// Pr_j(q fixed elements all present) = j (j-1) ... (j-q+1) / (N (N-1) ... (N-q+1)).
template <class Scalar>
Scalar hypergeometric_all(std::size_t n, std::size_t j, std::size_t q) {
  if (q > j) return Scalar(0);
  Scalar r(1);
  for (std::size_t i = 0; i < q; ++i) r = r * Scalar(static_cast<long long>(j - i)) / Scalar(static_cast<long long>(n - i));
  return r;
}

// union_counts[u] = number of ordered pairs (a, b), a == b allowed, with |Q(a) u Q(b)| = u.
inline std::vector<std::uint64_t> union_size_histogram(const IndicatorFamily& family) {
  const std::size_t n = family.ground().size();
  const std::size_t m = family.size();
  std::size_t max_size = 0;
  for (const auto& q : family.members()) max_size = std::max(max_size, q.size());
  std::vector<std::uint64_t> size_count(max_size + 1, 0);
  for (const auto& q : family.members()) ++size_count[q.size()];
  std::vector<std::vector<std::uint32_t>> incidence(n);
  for (std::size_t a = 0; a < m; ++a) {
    for (Element i : family.member(a)) incidence[i].push_back(static_cast<std::uint32_t>(a));
  }
  std::vector<std::uint64_t> hist(2 * max_size + 1, 0);
  std::vector<std::size_t> shared(m, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint64_t> overlapping_by_size(max_size + 1, 0);
  for (std::size_t a = 0; a < m; ++a) {
    const auto& qa = family.member(a);
    touched.clear();
    for (Element i : qa) {
      for (std::uint32_t b : incidence[i]) {
        if (shared[b]++ == 0) touched.push_back(b);
      }
    }
    std::fill(overlapping_by_size.begin(), overlapping_by_size.end(), 0);
    for (std::uint32_t b : touched) {
      const std::size_t sb = family.member(b).size();
      ++hist[qa.size() + sb - shared[b]];
      ++overlapping_by_size[sb];
      shared[b] = 0;
    }
    for (std::size_t s = 0; s <= max_size; ++s) hist[qa.size() + s] += size_count[s] - overlapping_by_size[s];
  }
  return hist;
}

}  // namespace detail

/// E_j(X) and Var_j(X) from the hypergeometric formula.
template <class Scalar = double>
SizeConditional<Scalar> conditional_moments_given_size(const IndicatorFamily& family, std::size_t j) {
  detail::require_uniform(family, "conditional_moments_given_size");
  const std::size_t n = family.ground().size();
  if (j > n) throw Error("conditional_moments_given_size: j exceeds N");
  SizeConditional<Scalar> out;
  out.j = j;
  Scalar mean(0);
  for (const auto& q : family.members()) mean += detail::hypergeometric_all<Scalar>(n, j, q.size());
  const auto hist = detail::union_size_histogram(family);
  Scalar second(0);
  for (std::size_t u = 0; u < hist.size(); ++u) {
    if (hist[u] == 0) continue;
    second += Scalar(static_cast<long long>(hist[u])) * detail::hypergeometric_all<Scalar>(n, j, u);
  }
  out.cond_mean = mean;
  out.cond_var = second - mean * mean;
  if constexpr (std::is_floating_point_v<Scalar>) out.cond_var = std::max(out.cond_var, Scalar(0));
  return out;
}

/// E_j(X) and Var_j(X) by direct enumeration of all j-subsets.
template <class Scalar = Rational>
SizeConditional<Scalar> conditional_moments_by_enumeration(const IndicatorFamily& family, std::size_t j,
                                                           std::uint64_t max_subsets = 1'000'000) {
  const std::size_t n = family.ground().size();
  if (j > n) throw Error("conditional_moments_by_enumeration: j exceeds N");
  if (n > 62) throw Error("conditional_moments_by_enumeration: ground set too large");
  const std::uint64_t total = choose(n, j);
  if (total > max_subsets) throw Error("conditional_moments_by_enumeration: C(N,j) exceeds the cap");
  std::vector<std::uint64_t> masks;
  for (const auto& q : family.members()) masks.push_back(detail::member_mask(q));
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  detail::for_each_subset(n, static_cast<unsigned>(j), [&](const std::vector<Vertex>& subset) {
    std::uint64_t s = 0;
    for (Vertex i : subset) s |= std::uint64_t{1} << i;
    std::uint64_t x = 0;
    for (std::uint64_t m : masks) x += (m & ~s) == 0;
    sum += x;
    sum_sq += x * x;
  });
  SizeConditional<Scalar> out;
  out.j = j;
  const Scalar count(static_cast<long long>(total));
  out.cond_mean = Scalar(static_cast<long long>(sum)) / count;
  out.cond_var = Scalar(static_cast<long long>(sum_sq)) / count - out.cond_mean * out.cond_mean;
  return out;
}

namespace detail {

inline bool all_dyadic(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return is_small_dyadic(v); });
}

// floor of a threshold, exact when the inputs are dyadic, with slack otherwise.
template <class Exact>
std::int64_t lattice_floor(bool dyadic, double approx, Exact&& exact) {
  if (dyadic) return rational_floor(exact());
  return floor_with_slack(approx);
}

inline double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace detail

struct RsizeOptions {
  std::size_t moment_check_max_members = 5000;  // run the E_j / Var_j check when the family is this small
  double moment_check_tol = 1e-9;
};

/// Lower bound on Pr(X <= (1-eps) mu) from Pr(Bin(N,p) <= (1-eps) N p).
inline BoundResult rsize_transfer(const IndicatorFamily& family, double eps, const RsizeOptions& options = {}) {
  detail::require_uniform(family, "rsize_transfer");
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("rsize_transfer: eps must lie in (0,1]");
  const auto stats = compute_stats(family);
  const std::size_t n = family.ground().size();
  const double p = family.ground().uniform_prob();
  BoundResult r;
  r.name = "rsize";
  r.event = TailEvent::at_most;
  r.conditions.push_back({"min|Q|>=2", family.empty() || family.min_member_size() >= 2});
  const double ind = eps < 1.0 ? 1.0 : 0.0;
  r.conditions.push_back({"(eps*mu)^2>=1{eps<1}Lambda", std::pow(eps * stats.mu, 2) >= ind * stats.lambda});

  const double c = eps == 1.0 ? 1.0 : 0.5;
  const double approx = (1.0 - eps) * static_cast<double>(n) * p;
  const std::int64_t m = detail::lattice_floor(detail::all_dyadic({eps, p}), approx, [&] {
    return (Rational(1) - exact_rational(eps)) * Rational(static_cast<long long>(n)) * exact_rational(p);
  });
  r.constants["c"] = c;
  r.constants["m"] = static_cast<double>(m);
  r.log_value = std::log(c) + log_binomial_cdf(n, p, m);

  if (family.size() <= options.moment_check_max_members && m >= 0) {
    bool holds = true;
    const double mean_cap = (1.0 - eps) * (1.0 - eps) * stats.mu;
    const double var_cap = (1.0 - eps) * (1.0 - eps) * stats.lambda;
    for (std::size_t j = 0; j <= std::min<std::size_t>(static_cast<std::size_t>(m), n); ++j) {
      const auto mom = conditional_moments_given_size<double>(family, j);
      holds = holds && detail::leq(mom.cond_mean, mean_cap, options.moment_check_tol) &&
              detail::leq(mom.cond_var, var_cap, options.moment_check_tol);
    }
    r.constants["moment_check"] = holds ? 1.0 : 0.0;
    if (!holds) r.notes.push_back("E_j(X) <= (1-eps)^2 mu or Var_j(X) <= (1-eps)^2 Lambda fails for some j <= m");
  }
  detail::finish(r);
  return r;
}

/// Lower bound on Pr(X <= (1-eps) mu) from Pr(Bin(N,p) <= (1 - (1+tau) eps / k) N p).
inline BoundResult rsize2_transfer(const IndicatorFamily& family, double eps, double tau,
                                   std::optional<std::size_t> k = std::nullopt) {
  detail::require_uniform(family, "rsize2_transfer");
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("rsize2_transfer: eps must lie in (0,1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw Error("rsize2_transfer: tau must lie in (0,1]");
  const std::size_t kk = k.value_or(family.empty() ? 1 : family.min_member_size());
  if (kk < 1) throw Error("rsize2_transfer: k must be at least 1");
  const auto stats = compute_stats(family);
  const std::size_t n = family.ground().size();
  const double p = family.ground().uniform_prob();
  BoundResult r;
  r.name = "rsize2";
  r.event = TailEvent::at_most;
  r.conditions.push_back({"min|Q|>=k", family.empty() || family.min_member_size() >= kk});
  r.conditions.push_back({"tau>=1{k>1}6eps", tau >= (kk > 1 ? 6.0 * eps : 0.0)});
  r.conditions.push_back({"(eps*mu)^2>=4tau^-2Lambda", std::pow(eps * stats.mu, 2) >= 4.0 / (tau * tau) * stats.lambda});
  const double shrink = (1.0 + tau) * eps / static_cast<double>(kk);
  const double approx = (1.0 - shrink) * static_cast<double>(n) * p;
  const std::int64_t m = detail::lattice_floor(detail::all_dyadic({eps, tau, p}), approx, [&] {
    const Rational s = (Rational(1) + exact_rational(tau)) * exact_rational(eps) / Rational(static_cast<long long>(kk));
    return (Rational(1) - s) * Rational(static_cast<long long>(n)) * exact_rational(p);
  });
  r.constants["k"] = static_cast<double>(kk);
  r.constants["m"] = static_cast<double>(m);
  r.constants["c"] = 0.5;
  r.log_value = std::log(0.5) + log_binomial_cdf(n, p, m);
  detail::finish(r);
  return r;
}

/// How the lower tail of Y is evaluated in rcor_transfer.
struct YTailOptions {
  std::size_t exact_max_ground = 26;
  std::uint64_t mc_samples = 100000;
  std::uint64_t mc_seed = 1;
};

struct YTail {
  double probability = 0.0;
  std::string method;  // "exact", "poisson-binomial" or "mc-wilson-low"
};

namespace detail {

inline bool distinct_singletons(const IndicatorFamily& y) {
  std::vector<char> seen(y.ground().size(), 0);
  for (const auto& q : y.members()) {
    if (q.size() != 1 || seen[q[0]]) return false;
    seen[q[0]] = 1;
  }
  return true;
}

}  // namespace detail

/// Pr(Y <= cutoff): exact when Y's ground set is enumerable, Poisson-binomial for
/// distinct singletons, otherwise the lower end of a Monte Carlo Wilson interval.
inline YTail y_lower_tail(const IndicatorFamily& y, std::int64_t cutoff, const YTailOptions& options = {}) {
  if (cutoff < 0) return {0.0, "empty-event"};
  if (y.ground().size() <= options.exact_max_ground) {
    return {exact_distribution(y, {options.exact_max_ground}).cdf(cutoff), "exact"};
  }
  if (detail::distinct_singletons(y)) {
    std::vector<double> probs;
    for (const auto& q : y.members()) probs.push_back(y.ground().prob(q[0]));
    return {std::exp(log_poisson_binomial_cdf(probs, cutoff)), "poisson-binomial"};
  }
  const auto hist = mc_histogram(y, options.mc_samples, options.mc_seed);
  return {estimate_from_histogram(hist, cutoff, options.mc_seed).ci_low, "mc-wilson-low"};
}

/// Lower bound c gamma eps Pr(Y <= (1 - (1+gamma) eps) E Y) with c = 1/2.
inline BoundResult rcor_transfer(const SymmetricDecomposition& decomp, double eps, double gamma,
                                 const YTailOptions& options = {}) {
  validate(decomp);
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("rcor_transfer: eps must lie in (0,1]");
  if (!(gamma > 0.0)) throw Error("rcor_transfer: gamma must be positive");
  const auto k = kappa(decomp);
  const auto& y = decomp.y_family;
  const double ey = compute_stats(y).mu;
  BoundResult r;
  r.name = "rcor";
  r.event = TailEvent::at_most;
  const bool gate_kappa = k.exact && is_small_dyadic(gamma) && is_small_dyadic(eps)
                              ? exact_rational(gamma) * exact_rational(eps) >= 2 * *k.exact
                              : gamma * eps >= 2.0 * k.value;
  r.conditions.push_back({"gamma*eps>=2kappa", gate_kappa});
  r.conditions.push_back({"1{EY=0}gamma*eps<=2", ey > 0.0 || gamma * eps <= 2.0});
  bool dyadic = is_small_dyadic(eps) && is_small_dyadic(gamma) && y.size() <= detail::kExactThresholdMemberLimit;
  for (double p : y.ground().probs()) dyadic = dyadic && is_small_dyadic(p);
  const double approx = (1.0 - (1.0 + gamma) * eps) * ey;
  const std::int64_t cutoff = detail::lattice_floor(dyadic, approx, [&] {
    return (Rational(1) - (Rational(1) + exact_rational(gamma)) * exact_rational(eps)) * detail::exact_mean(y);
  });
  const auto tail = y_lower_tail(y, cutoff, options);
  r.constants["kappa"] = k.value;
  r.constants["c"] = 0.5;
  r.constants["EY"] = ey;
  r.constants["y_cutoff"] = static_cast<double>(cutoff);
  r.constants["y_tail"] = tail.probability;
  r.notes.push_back("Y tail by " + tail.method);
  r.log_value = std::log(0.5 * gamma * eps) + detail::log_or_neg_inf(tail.probability);
  detail::finish(r);
  return r;
}

/// Pr(X = 0) >= Pr(Y = 0) for a decomposition X = sum_beta I_beta X_beta.
inline BoundResult rcor_zero(const SymmetricDecomposition& decomp, const YTailOptions& options = {}) {
  validate(decomp);
  BoundResult r;
  r.name = "rcor_zero";
  r.event = TailEvent::zero;
  const auto tail = y_lower_tail(decomp.y_family, 0, options);
  r.notes.push_back("Y tail by " + tail.method);
  r.log_value = detail::log_or_neg_inf(tail.probability);
  detail::finish(r);
  return r;
}

/// Exact record of Pr(I1 n I2 | D) <= Pr(I1) Pr(I2 | D) and of the stronger
/// Pr(I1 n I2 | D) <= Pr(I1 | D) Pr(I2 | D), which need not hold.
template <class Scalar>
struct ConditionalCorrelation {
  Scalar pr_d{};
  Scalar pr_i1{};
  Scalar pr_i1_given_d{};
  Scalar pr_i2_given_d{};
  Scalar pr_both_given_d{};
  Scalar valid_rhs{};  // Pr(I1) Pr(I2 | D)
  Scalar naive_rhs{};  // Pr(I1 | D) Pr(I2 | D)
  bool valid_holds = false;
  bool valid_equality = false;
  bool naive_holds = false;
};

/// Outcomes are bitmasks over at most 30 ground elements; I1 and I2 are the
/// increasing events "all of the given elements are present"; D must be decreasing.
template <class Scalar>
ConditionalCorrelation<Scalar> harris_conditional_check(const std::vector<Scalar>& probs, const Member& i1,
                                                        const Member& i2,
                                                        const std::function<bool(std::uint64_t)>& d) {
  const std::size_t n = probs.size();
  if (n > 30) throw Error("harris_conditional_check: at most 30 ground elements");
  for (Element i : i1) {
    if (i >= n) throw Error("harris_conditional_check: I1 element out of range");
  }
  for (Element i : i2) {
    if (i >= n) throw Error("harris_conditional_check: I2 element out of range");
  }
  const std::uint64_t m1 = detail::member_mask(i1);
  const std::uint64_t m2 = detail::member_mask(i2);
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<char> in_d(total);
  for (std::uint64_t s = 0; s < total; ++s) in_d[s] = d(s) ? 1 : 0;
  for (std::uint64_t s = 0; s < total; ++s) {
    if (!in_d[s]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if ((s >> i & 1U) && !in_d[s & ~(std::uint64_t{1} << i)]) {
        throw Error("harris_conditional_check: D is not decreasing");
      }
    }
  }
  Scalar pr_d(0), pr_i1(0), pr_i1_d(0), pr_i2_d(0), pr_both_d(0);
  for (std::uint64_t s = 0; s < total; ++s) {
    Scalar w(1);
    for (std::size_t i = 0; i < n; ++i) w *= (s >> i & 1U) ? probs[i] : Scalar(1) - probs[i];
    const bool a = (m1 & ~s) == 0;
    const bool b = (m2 & ~s) == 0;
    if (a) pr_i1 += w;
    if (!in_d[s]) continue;
    pr_d += w;
    if (a) pr_i1_d += w;
    if (b) pr_i2_d += w;
    if (a && b) pr_both_d += w;
  }
  if (pr_d == Scalar(0)) throw Error("harris_conditional_check: Pr(D) = 0");
  ConditionalCorrelation<Scalar> c;
  c.pr_d = pr_d;
  c.pr_i1 = pr_i1;
  c.pr_i1_given_d = pr_i1_d / pr_d;
  c.pr_i2_given_d = pr_i2_d / pr_d;
  c.pr_both_given_d = pr_both_d / pr_d;
  c.valid_rhs = c.pr_i1 * c.pr_i2_given_d;
  c.naive_rhs = c.pr_i1_given_d * c.pr_i2_given_d;
  c.valid_holds = c.pr_both_given_d <= c.valid_rhs;
  c.valid_equality = c.pr_both_given_d == c.valid_rhs;
  c.naive_holds = c.pr_both_given_d <= c.naive_rhs;
  return c;
}

/// The counterexample on n >= 3 elements: I1 = {element 0 present}, I2 = {element 1 present},
/// D = {at most one element present} u {exactly elements 0 and 1 present}.
inline bool counterexample_event(std::uint64_t outcome) {
  return __builtin_popcountll(outcome) <= 1 || outcome == 0b11;
}

template <class Scalar>
ConditionalCorrelation<Scalar> correlation_counterexample(std::size_t n, const Scalar& p) {
  if (n < 3) throw Error("correlation_counterexample: need n >= 3");
  return harris_conditional_check<Scalar>(std::vector<Scalar>(n, p), Member{0}, Member{1}, counterexample_event);
}

struct VxsymOptions {
  double ell = 1.0;  // allowed deviation of |U| from n/2
  YTailOptions y_tail;
  CopyOptions copies;
};

/// Lower bound c Pr(Y_G <= (1 - lambda eps) E Y_G) on Pr(X_H <= (1-eps) E X_H),
/// lambda = 2^{v_H + 3}, log c = -(4^{v_G^2} + 2) log 2, Y_G the G-count inside U.
inline BoundResult vxsym_transfer(const KGraph& h, const KGraph& g, std::uint64_t n, double p, double eps,
                                  const std::vector<Vertex>& u, const VxsymOptions& options = {}) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("vxsym_transfer: eps must lie in (0,1]");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("vxsym_transfer: p must lie in [0,1]");
  if (g.k() != h.k()) throw Error("vxsym_transfer: G and H have different uniformity");
  std::vector<Vertex> uu(u);
  std::sort(uu.begin(), uu.end());
  uu.erase(std::unique(uu.begin(), uu.end()), uu.end());
  if (!uu.empty() && uu.back() >= n) throw Error("vxsym_transfer: U contains a vertex outside [n]");

  BoundResult r;
  r.name = "vxsym";
  r.event = TailEvent::at_most;
  const double lambda = std::ldexp(1.0, static_cast<int>(h.v()) + 3);
  const double log2_c = -(std::pow(4.0, static_cast<double>(g.v() * g.v())) + 2.0);
  r.constants["lambda"] = lambda;
  r.constants["log2_c"] = log2_c;
  r.constants["ell"] = options.ell;

  const bool contained = count_copies_in(g, h) > 0;
  r.conditions.push_back({"G_subgraph_of_H", contained});
  r.conditions.push_back({"copies_of_G_in_H_induced", contained && copies_are_induced(g, h)});
  r.conditions.push_back(
      {"||U|-n/2|<=ell", std::abs(static_cast<double>(uu.size()) - static_cast<double>(n) / 2.0) <= options.ell});
  const auto xh = subgraph_family(h, n, p, options.copies);
  const auto sh = compute_stats(xh.family);
  r.conditions.push_back({"(eps*EX_H)^2>=Lambda(X_H)", std::pow(eps * sh.mu, 2) >= sh.lambda});
  r.notes.push_back("the theorem also needs n >= n0(H, G); n0 is not explicit and is not checked");

  if (lambda * eps > 1.0) {
    r.constants["vacuous"] = 1.0;
    r.notes.push_back("lambda * eps > 1: the Y_G threshold is negative and the bound is vacuous");
    r.log_value = kNegInf;
    detail::finish(r);
    return r;
  }
  if (uu.size() < g.v()) throw Error("vxsym_transfer: U has fewer vertices than G");
  const auto yg = subgraph_family(g, uu.size(), p, options.copies);
  const double ey = compute_stats(yg.family).mu;
  const double approx = (1.0 - lambda * eps) * ey;
  const bool dyadic = is_small_dyadic(eps) && is_small_dyadic(p) && yg.family.size() <= detail::kExactThresholdMemberLimit;
  const std::int64_t cutoff = detail::lattice_floor(dyadic, approx, [&] {
    return (Rational(1) - exact_rational(lambda) * exact_rational(eps)) * detail::exact_mean(yg.family);
  });
  const auto tail = y_lower_tail(yg.family, cutoff, options.y_tail);
  r.constants["EY_G"] = ey;
  r.constants["y_cutoff"] = static_cast<double>(cutoff);
  r.constants["y_tail"] = tail.probability;
  r.notes.push_back("Y_G tail by " + tail.method);
  r.log_value = log2_c * std::log(2.0) + detail::log_or_neg_inf(tail.probability);
  detail::finish(r);
  return r;
}

}  // namespace tailkit
