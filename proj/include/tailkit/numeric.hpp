#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tailkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative slack used when comparing an integer count against a real threshold.
inline constexpr double kThresholdSlack = 1e-12;

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(sum_i exp(v_i)); returns -inf for an empty or all -inf input.
inline double log_sum_exp(std::span<const double> values) {
  double hi = kNegInf;
  for (double v : values) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  CompensatedSum acc;
  for (double v : values) acc.add(std::exp(v - hi));
  return hi + std::log(acc.value());
}

/// Largest integer v with v <= t, absorbing rounding of t by a relative slack.
inline std::int64_t floor_with_slack(double t) {
  if (!std::isfinite(t)) {
    if (t > 0) return std::numeric_limits<std::int64_t>::max();
    return -1;
  }
  const double widened = t >= 0 ? t * (1.0 + kThresholdSlack) : t * (1.0 - kThresholdSlack);
  return static_cast<std::int64_t>(std::floor(widened));
}

/// Largest integer v with v < t, with the same slack as floor_with_slack.
inline std::int64_t below_with_slack(double t) {
  if (!std::isfinite(t)) {
    if (t > 0) return std::numeric_limits<std::int64_t>::max();
    return -1;
  }
  const double narrowed = t >= 0 ? t * (1.0 - kThresholdSlack) : t * (1.0 + kThresholdSlack);
  return static_cast<std::int64_t>(std::ceil(narrowed)) - 1;
}

/// True when x is a multiple of 2^-bits, i.e. a dyadic rational with small denominator.
inline bool is_small_dyadic(double x, int bits = 32) {
  if (!std::isfinite(x)) return false;
  const double scaled = std::ldexp(x, bits);
  return std::abs(scaled) < 0x1p62 && scaled == std::floor(scaled);
}

/// Exact rational value of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw Error("exact_rational: non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);
  // mantissa * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r{boost::multiprecision::cpp_int(scaled)};
  if (exponent > 0) {
    r *= Rational{boost::multiprecision::cpp_int(1) << exponent};
  } else if (exponent < 0) {
    r /= Rational{boost::multiprecision::cpp_int(1) << (-exponent)};
  }
  return r;
}

inline std::int64_t rational_floor(const Rational& r) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  cpp_int q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return static_cast<std::int64_t>(q);
}

inline std::int64_t rational_ceil(const Rational& r) { return -rational_floor(-r); }

}  // namespace tailkit
