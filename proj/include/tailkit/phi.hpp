#pragma once

// The Poisson rate function phi(x) = (1 + x) log(1 + x) - x and the
// elementary inequalities relating phi(-eps) to eps^2 and log^2(1 - eps).

#include <cmath>
#include <optional>

#include "tailkit/numeric.hpp"

namespace tailkit {

/// phi(x) for x >= -1, with phi(-1) = 1.
inline double phi(double x) {
  if (std::isnan(x) || x < -1.0) throw Error("phi: argument must be >= -1");
  if (x == -1.0) return 1.0;
  if (std::abs(x) < 1e-4) {
    // sum_{n>=2} (-1)^n x^n / (n (n - 1))
    double term = x * x;
    double sum = 0.0;
    for (int n = 2; n <= 8; ++n) {
      sum += term / (n * (n - 1.0));
      term *= -x;
    }
    return sum;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

/// phi(-eps), the exponent density of the lower tail at relative deviation eps.
inline double phi_lower(double eps) { return phi(-eps); }

struct PhiValue {
  double eps = 0.0;
  double value = 0.0;
};

inline PhiValue phi_value(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error("phi_value: eps must lie in [0,1]");
  return {eps, phi_lower(eps)};
}

namespace detail {

inline bool leq(double a, double b, double tol) { return a <= b + tol * std::max(1.0, std::abs(b)); }

// (1 - eps) log^k (1 - eps) with the convention 0 log^k 0 = 0.
inline double weighted_log_power(double eps, int k) {
  if (eps == 1.0) return 0.0;
  return (1.0 - eps) * std::pow(std::log1p(-eps), k);
}

}  // namespace detail

/// max{(1-eps) log^2(1-eps), eps^2} <= 2 phi(-eps) <= min{log^2(1-eps), 2 eps^2}.
struct VarphiBoundsCheck {
  double eps = 0.0;
  double left_log = 0.0;    // (1 - eps) log^2(1 - eps)
  double left_square = 0.0; // eps^2
  double two_phi = 0.0;
  double right_log = 0.0;   // log^2(1 - eps); +inf at eps = 1
  double right_square = 0.0;// 2 eps^2
  bool left_log_holds = false;
  bool left_square_holds = false;
  bool right_log_holds = false;
  bool right_square_holds = false;

  bool all() const { return left_log_holds && left_square_holds && right_log_holds && right_square_holds; }
};

inline VarphiBoundsCheck varphi_bounds_check(double eps, double tol = 1e-12) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error("varphi_bounds_check: eps must lie in [0,1]");
  VarphiBoundsCheck c;
  c.eps = eps;
  c.left_log = detail::weighted_log_power(eps, 2);
  c.left_square = eps * eps;
  c.two_phi = 2.0 * phi_lower(eps);
  c.right_log = eps == 1.0 ? kInf : std::pow(std::log1p(-eps), 2);
  c.right_square = 2.0 * eps * eps;
  c.left_log_holds = detail::leq(c.left_log, c.two_phi, tol);
  c.left_square_holds = detail::leq(c.left_square, c.two_phi, tol);
  c.right_log_holds = detail::leq(c.two_phi, c.right_log, tol);
  c.right_square_holds = detail::leq(c.two_phi, c.right_square, tol);
  return c;
}

/// phi(-eps) <= 1 <= (1 + 5 sqrt(1 - eps)) phi(-eps) on [1 - 1/e, 1].
struct Varphi2Check {
  double eps = 0.0;
  double phi = 0.0;
  double scaled = 0.0;  // (1 + 5 sqrt(1 - eps)) phi(-eps)
  bool upper_holds = false;
  bool lower_holds = false;

  bool all() const { return upper_holds && lower_holds; }
};

inline double varphi2_min_eps() { return 1.0 - std::exp(-1.0); }

inline Varphi2Check varphi2_check(double eps, double tol = 1e-12) {
  if (!(eps >= varphi2_min_eps() && eps <= 1.0)) throw Error("varphi2_check: eps must lie in [1 - 1/e, 1]");
  Varphi2Check c;
  c.eps = eps;
  c.phi = phi_lower(eps);
  c.scaled = (1.0 + 5.0 * std::sqrt(1.0 - eps)) * c.phi;
  c.upper_holds = detail::leq(c.phi, 1.0, tol);
  c.lower_holds = detail::leq(1.0, c.scaled, tol);
  return c;
}

/// One branch of the bound phi(-A eps) <= factor * phi(-eps).
struct Varphi3Branch {
  double factor = 0.0;
  double lhs = 0.0;  // phi(-A eps)
  double rhs = 0.0;  // factor * phi(-eps)
  bool holds = false;
};

/// Branch 1 applies when A eps <= 1 with factor (1 + A eps) A^2; branch 2
/// applies when 0 <= 3 sqrt(A - 1) <= 1 - eps with factor 1 + sqrt(A - 1).
struct Varphi3Result {
  double eps = 0.0;
  double a = 0.0;
  std::optional<Varphi3Branch> first;
  std::optional<Varphi3Branch> second;

  /// The tighter of the applicable branches.
  const Varphi3Branch& best() const {
    if (first && second) return first->factor <= second->factor ? *first : *second;
    return first ? *first : *second;
  }
};

inline Varphi3Result varphi3_factor(double eps, double a, double tol = 1e-12) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error("varphi3_factor: eps must lie in [0,1]");
  if (!(a >= 0.0)) throw Error("varphi3_factor: A must be nonnegative");
  Varphi3Result r;
  r.eps = eps;
  r.a = a;
  const double base = phi_lower(eps);
  auto make = [&](double factor) {
    Varphi3Branch b;
    b.factor = factor;
    b.lhs = phi_lower(std::min(1.0, a * eps));
    b.rhs = factor * base;
    b.holds = eps == 0.0 || detail::leq(b.lhs, b.rhs, tol);
    return b;
  };
  if (a * eps <= 1.0) r.first = make((1.0 + a * eps) * a * a);
  const double gamma = a - 1.0;
  if (gamma >= 0.0 && 3.0 * std::sqrt(gamma) <= 1.0 - eps) r.second = make(1.0 + std::sqrt(gamma));
  if (!r.first && !r.second) {
    throw Error("varphi3_factor: neither branch applies (need A eps <= 1 or 0 <= 3 sqrt(A - 1) <= 1 - eps)");
  }
  return r;
}

}  // namespace tailkit
