#pragma once

// Closed-form lower-tail bounds with their explicit constants.
//
// Every evaluator returns a BoundResult in natural-log space. Bounds whose
// hypotheses fail are still evaluated formally and flagged inapplicable, so
// callers can compare a formula against the region where it is guaranteed.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tailkit/exact.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/numeric.hpp"
#include "tailkit/phi.hpp"

namespace tailkit {

/// Constants appearing in the bound statements, in one place.
namespace bound_constants {
inline constexpr double kMainGate = 0x1p-14;       // max{Pi, 1{eps<1} delta} <= 2^-14
inline constexpr double kMainXiScale = 135.0;      // xi = 135 max{...}
inline constexpr double kMainPiRoot = 8.0;         // Pi^{1/8}, delta^{1/8}
inline constexpr double kMainMeanRoot = 4.0;       // (eps^2 mu)^{-1/4}
inline constexpr double kWeakKNumerator = 5000.0;  // K = 5000 / (1 - Pi)^5
inline constexpr double kWeakKPower = 5.0;
inline constexpr double kWeakSmallEps = 1.0 / 50.0;  // delta* = 1{eps < 1/50} delta
inline constexpr double kStrictXiScale = 135.0;    // xi = 135 max{Pi^{1/4}, delta^{1/4}, [e(1-eps)eps^2 mu]^{-1/2}}
inline constexpr double kStrictGateScale = 4.0;    // eps <= 1 - 4 max{Pi^{1/4}, delta^{1/4}}
inline constexpr double kStrictRoot = 4.0;
inline constexpr double kNearOneZetaScale = 10.0;  // zeta = 10 max{sqrt(1-eps), Pi/(1-Pi)}
inline constexpr double kNeglNumerator = 4.0;      // 4p / (tau sigma^3 (1-eps)^p eps^4 mu^2)
inline constexpr double kBcBoundHalf = 0.5;     // Pi (1 - e^{-s}) <= 1/2
}  // namespace bound_constants

enum class Direction { upper_on_tail, lower_on_tail };

/// Which event a bound is about.
enum class TailEvent {
  at_most,  // X <= (1 - eps) mu
  below,    // X <  (1 - eps) mu
  zero,     // X = 0
};

inline std::string_view to_string(Direction d) {
  return d == Direction::upper_on_tail ? "upper-bound-on-tail" : "lower-bound-on-tail";
}

inline std::string_view to_string(TailEvent e) {
  switch (e) {
    case TailEvent::at_most: return "le";
    case TailEvent::below: return "lt";
    case TailEvent::zero: return "zero";
  }
  return "le";
}

struct Condition {
  std::string name;
  bool holds = false;
};

struct BoundResult {
  std::string name;
  Direction direction = Direction::lower_on_tail;
  TailEvent event = TailEvent::at_most;
  double log_value = 0.0;
  bool applicable = true;
  std::vector<Condition> conditions;
  std::map<std::string, double> constants;
  std::vector<std::string> notes;

  double value() const { return std::exp(log_value); }

  bool condition(std::string_view condition_name) const {
    for (const auto& c : conditions) {
      if (c.name == condition_name) return c.holds;
    }
    throw Error("bound " + name + " has no condition named " + std::string(condition_name));
  }
};

namespace detail {

// coefficient * base, with 0 * inf read as 0 (the exponent vanishes when phi(-eps) mu does).
inline double scaled_exponent(double coefficient, double base) {
  if (base == 0.0) return 0.0;
  return coefficient * base;
}

inline void finish(BoundResult& r) {
  r.applicable = std::all_of(r.conditions.begin(), r.conditions.end(), [](const Condition& c) { return c.holds; });
  if (std::isnan(r.log_value)) throw Error("bound " + r.name + " evaluated to NaN");
  r.log_value = std::min(r.log_value, 0.0);
}

inline void require_eps(double eps, const char* who) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(std::string(who) + ": eps must lie in [0,1]");
}

inline double indicator(bool b) { return b ? 1.0 : 0.0; }

}  // namespace detail

/// Upper bound Pr(X <= (1-eps) mu) <= exp{-phi(-eps) mu^2 / Lambda}.
inline BoundResult janson_upper(const FamilyStats& stats, double eps) {
  detail::require_eps(eps, "janson_upper");
  BoundResult r;
  r.name = "janson_upper";
  r.direction = Direction::upper_on_tail;
  r.event = TailEvent::at_most;
  const double ratio = stats.lambda > 0.0 ? stats.mu * stats.mu / stats.lambda : 0.0;
  r.constants["phi"] = phi_lower(eps);
  r.constants["mu2_over_lambda"] = ratio;
  r.log_value = -phi_lower(eps) * ratio;
  detail::finish(r);
  return r;
}

struct HarrisBounds {
  BoundResult product;      // prod_alpha (1 - E I_alpha)
  BoundResult exponential;  // exp{-mu / (1 - Pi)}
};

/// Lower bounds on Pr(X = 0) from positive correlation of the decreasing events {I_alpha = 0}.
inline HarrisBounds harris_lower(const IndicatorFamily& family) {
  const auto stats = compute_stats(family);
  HarrisBounds h;
  h.product.name = "harris_product";
  h.product.event = TailEvent::zero;
  CompensatedSum log_product;
  bool certain_member = false;
  for (std::size_t a = 0; a < family.size(); ++a) {
    const double m = expect_indicator(family, a);
    if (m >= 1.0) certain_member = true;
    else log_product.add(std::log1p(-m));
  }
  h.product.log_value = certain_member ? kNegInf : log_product.value();
  detail::finish(h.product);

  h.exponential.name = "harris_exponential";
  h.exponential.event = TailEvent::zero;
  h.exponential.conditions.push_back({"Pi<1", stats.pi < 1.0});
  h.exponential.constants["Pi"] = stats.pi;
  h.exponential.log_value = stats.pi < 1.0 ? -stats.mu / (1.0 - stats.pi) : kNegInf;
  detail::finish(h.exponential);
  return h;
}

/// Lower bound exp{-(1 + xi) phi(-eps) mu} for nearly independent indicators.
inline BoundResult lt_main(const FamilyStats& stats, double eps) {
  using namespace bound_constants;
  detail::require_eps(eps, "lt_main");
  BoundResult r;
  r.name = "lt_main";
  r.event = TailEvent::at_most;
  const double ind = detail::indicator(eps < 1.0);
  const double delta = stats.delta_or_zero();
  const double spread = eps * eps * stats.mu;
  r.conditions.push_back({"max{Pi,1{eps<1}delta}<=2^-14", std::max(stats.pi, ind * delta) <= kMainGate});
  r.conditions.push_back({"eps^2*mu>=1{eps<1}", spread >= ind});
  double xi = std::pow(stats.pi, 1.0 / kMainPiRoot);
  if (eps < 1.0) {
    xi = std::max(xi, std::pow(delta, 1.0 / kMainPiRoot));
    xi = std::max(xi, spread > 0.0 ? std::pow(spread, -1.0 / kMainMeanRoot) : kInf);
  }
  xi *= kMainXiScale;
  r.constants["xi"] = xi;
  r.constants["phi"] = phi_lower(eps);
  r.log_value = -detail::scaled_exponent(1.0 + xi, phi_lower(eps) * stats.mu);
  detail::finish(r);
  return r;
}

/// Lower bound exp{-K phi(-eps) mu (1 + delta*)} for weakly dependent indicators.
inline BoundResult lt2(const FamilyStats& stats, double eps) {
  using namespace bound_constants;
  detail::require_eps(eps, "lt2");
  BoundResult r;
  r.name = "lt2";
  r.event = TailEvent::at_most;
  const double delta = stats.delta_or_zero();
  const bool small = eps < kWeakSmallEps;
  r.conditions.push_back({"Pi<1", stats.pi < 1.0});
  r.conditions.push_back(
      {"eps^2*mu>=1{eps<1/50}(1+delta)^-1/2", eps * eps * stats.mu >= detail::indicator(small) / std::sqrt(1.0 + delta)});
  const double k = stats.pi < 1.0 ? kWeakKNumerator / std::pow(1.0 - stats.pi, kWeakKPower) : kInf;
  const double delta_star = small ? delta : 0.0;
  r.constants["K"] = k;
  r.constants["delta_star"] = delta_star;
  r.constants["phi"] = phi_lower(eps);
  r.log_value = -detail::scaled_exponent(k * (1.0 + delta_star), phi_lower(eps) * stats.mu);
  r.constants["log_weaker_form"] =
      std::min(0.0, -detail::scaled_exponent(k * (1.0 + delta_star), eps * eps * stats.mu));
  detail::finish(r);
  return r;
}

/// Lower bound on the strict tail Pr(X < (1-eps) mu) away from eps = 1.
inline BoundResult lt3(const FamilyStats& stats, double eps) {
  using namespace bound_constants;
  detail::require_eps(eps, "lt3");
  BoundResult r;
  r.name = "lt3";
  r.event = TailEvent::below;
  const double delta = stats.delta_or_zero();
  const double spread = std::exp(1.0) * (1.0 - eps) * eps * eps * stats.mu;
  const double root = std::max(std::pow(stats.pi, 1.0 / kStrictRoot), std::pow(delta, 1.0 / kStrictRoot));
  r.conditions.push_back({"e(1-eps)eps^2*mu>=1", spread >= 1.0});
  r.conditions.push_back({"eps<=1-4max{Pi^1/4,delta^1/4}", eps <= 1.0 - kStrictGateScale * root});
  const double xi = kStrictXiScale * std::max(root, spread > 0.0 ? 1.0 / std::sqrt(spread) : kInf);
  r.constants["xi"] = xi;
  r.constants["phi"] = phi_lower(eps);
  r.log_value = -detail::scaled_exponent(1.0 + xi, phi_lower(eps) * stats.mu);
  detail::finish(r);
  return r;
}

/// Lower bound exp{-(1 + zeta) phi(-eps) mu} near eps = 1; also bounds Pr(X = 0).
inline BoundResult lt4(const FamilyStats& stats, double eps) {
  using namespace bound_constants;
  detail::require_eps(eps, "lt4");
  BoundResult r;
  r.name = "lt4";
  r.event = TailEvent::at_most;
  r.conditions.push_back({"1-1/e<=eps<=1", eps >= varphi2_min_eps()});
  r.conditions.push_back({"Pi<1", stats.pi < 1.0});
  const double zeta =
      kNearOneZetaScale * std::max(std::sqrt(1.0 - eps), stats.pi < 1.0 ? stats.pi / (1.0 - stats.pi) : kInf);
  r.constants["zeta"] = zeta;
  r.constants["phi"] = phi_lower(eps);
  r.notes.push_back("also a lower bound on Pr(X=0)");
  r.log_value = -detail::scaled_exponent(1.0 + zeta, phi_lower(eps) * stats.mu);
  detail::finish(r);
  return r;
}

/// All six tail bounds at one eps, in a fixed order.
inline std::vector<BoundResult> all_bounds(const IndicatorFamily& family, const FamilyStats& stats, double eps) {
  auto harris = harris_lower(family);
  return {janson_upper(stats, eps), std::move(harris.product), std::move(harris.exponential),
          lt_main(stats, eps),      lt2(stats, eps),           lt3(stats, eps),
          lt4(stats, eps)};
}

/// log of the lower bound on E e^{-sX}:
/// -mu (1 - e^{-s}) - mu Pi (1 - e^{-s})^2 / (2 (1 - lambda)), lambda = Pi (1 - e^{-s}).
inline double laplace_lower(const FamilyStats& stats, double s) {
  if (!(s >= 0.0)) throw Error("laplace_lower: s must be nonnegative");
  const double drop = -std::expm1(-s);
  const double lambda = stats.pi * drop;
  if (!(lambda < 1.0)) throw Error("laplace_lower: requires Pi (1 - e^{-s}) < 1");
  if (stats.mu == 0.0) return 0.0;
  return -stats.mu * drop - stats.mu * stats.pi * drop * drop / (2.0 * (1.0 - lambda));
}

/// log of the lower bound on E e^{-rX} / E e^{-tX}:
/// (mu / (1 + delta)) (e^{-(1+delta) r} - e^{-(1+delta) t}).
inline double laplace_ratio_lower(const FamilyStats& stats, double r, double t) {
  if (!(r >= 0.0)) throw Error("laplace_ratio_lower: r must be nonnegative");
  if (r > t) throw Error("laplace_ratio_lower: requires t >= r");
  if (stats.mu == 0.0) return 0.0;
  const double rate = 1.0 + stats.delta_or_zero();
  return stats.mu / rate * (std::exp(-rate * r) - std::exp(-rate * t));
}

/// Exact evaluation of the three-factor Hoelder lower bound on Pr(X < (1-eps) mu).
///
/// With p = 1 + sigma, q = 1 + 1/sigma, z = -log(1 - eps), s = p z:
///   A = (E[e^{-sX}; X < (1-eps)mu] / E e^{-sX})^{p/(p-1)}
///   B = (E e^{-sX} / E e^{-psX})^{1/(p-1)}
///   C = E e^{-sX}
/// and Pr(X < (1-eps) mu) >= A B C.
struct HolderReport {
  double eps = 0.0;
  double sigma = 0.0;
  double tau = 0.0;
  double p_holder = 0.0;
  double q_holder = 0.0;
  double z = 0.0;
  double s = 0.0;
  double lambda = 0.0;  // Pi (1 - e^{-s})
  double log_factor_a = 0.0;
  double log_factor_b = 0.0;
  double log_factor_c = 0.0;
  double log_strict_tail = 0.0;
  bool holder_holds = false;

  double eta = 0.0;
  bool bc_bound_applicable = false;
  double bc_bound_rhs = 0.0;  // log of exp{-(1 + eta) phi(-eps) mu}
  bool bc_bound_holds = false;

  bool a_bound_applicable = false;
  double a_bound_rhs = 0.0;  // log of the bound on factor A
  bool a_bound_holds = false;

  double log_product() const { return log_factor_a + log_factor_b + log_factor_c; }

  bool all() const {
    return holder_holds && (!bc_bound_applicable || bc_bound_holds) &&
           (!a_bound_applicable || a_bound_holds);
  }
};

inline constexpr double kLogSlack = 1e-10;

inline HolderReport holder_report(const IndicatorFamily& family, const ExactDistribution& dist,
                                  const FamilyStats& stats, double eps, double sigma, double tau) {
  using namespace bound_constants;
  if (!(eps > 0.0 && eps < 1.0)) throw Error("holder_report: eps must lie in (0,1)");
  if (!(tau > 0.0 && tau < 1.0)) throw Error("holder_report: tau must lie in (0,1)");
  if (!(sigma > 0.0 && std::isfinite(sigma))) throw Error("holder_report: sigma must be positive");

  HolderReport h;
  h.eps = eps;
  h.sigma = sigma;
  h.tau = tau;
  h.p_holder = 1.0 + sigma;
  h.q_holder = 1.0 + 1.0 / sigma;
  h.z = -std::log1p(-eps);
  h.s = h.p_holder * h.z;
  h.lambda = stats.pi * -std::expm1(-h.s);
  const double p = h.p_holder;
  const double mu = stats.mu;
  const double delta = stats.delta_or_zero();
  const double phi_eps = phi_lower(eps);

  const auto threshold = lower_tail_threshold(family, mu, eps);
  const double log_c = dist.log_laplace(h.s);
  const double log_ps = dist.log_laplace(p * h.s);
  const double log_truncated = dist.log_truncated_laplace(h.s, threshold.lt_cutoff);
  h.log_factor_c = log_c;
  h.log_factor_b = (log_c - log_ps) / sigma;
  h.log_factor_a = log_truncated == kNegInf ? kNegInf : p / sigma * (log_truncated - log_c);
  const double strict_tail = exact_lower_tail(dist, threshold, true);
  h.log_strict_tail = strict_tail > 0.0 ? std::log(strict_tail) : kNegInf;
  h.holder_holds = h.log_product() <= h.log_strict_tail + kLogSlack;

  h.eta = 2.0 * p * p * (sigma + p * delta + stats.pi) + 2.0 * p * sigma;
  h.bc_bound_applicable = h.lambda <= kBcBoundHalf;
  h.bc_bound_rhs = -(1.0 + h.eta) * phi_eps * mu;
  h.bc_bound_holds = h.bc_bound_rhs <= h.log_factor_b + h.log_factor_c + kLogSlack;

  const double damped = std::pow(1.0 - eps, p);
  h.a_bound_applicable =
      h.lambda < 1.0 &&
      (1.0 - tau) * sigma * sigma * damped >= p * p * stats.pi / (1.0 - h.lambda) + delta / (1.0 + delta);
  if (mu > 0.0) {
    const double coefficient = kNeglNumerator * p / (tau * sigma * sigma * sigma * damped * std::pow(eps, 4) * mu * mu);
    h.a_bound_rhs = -coefficient * phi_eps * mu;
  } else {
    h.a_bound_rhs = kNegInf;
  }
  h.a_bound_holds = h.a_bound_rhs <= h.log_factor_a + kLogSlack || h.a_bound_rhs == kNegInf;
  return h;
}

inline HolderReport holder_report(const IndicatorFamily& family, double eps, double sigma, double tau,
                                  const ExactOptions& options = {}) {
  const auto dist = exact_distribution(family, options);
  return holder_report(family, dist, compute_stats(family), eps, sigma, tau);
}

}  // namespace tailkit
