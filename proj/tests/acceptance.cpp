// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tailkit/tailkit.hpp"

using namespace tailkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double>& k3_ps() {
  static const std::vector<double> v{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  return v;
}

const std::vector<double>& k3_eps() {
  static const std::vector<double> v{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return v;
}

double log_of(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// 1. phi inequalities on a 10^4-point grid of valid (eps, A).
Outcome phi_inequalities() {
  const auto t0 = Clock::now();
  std::size_t points = 0;
  std::size_t failures = 0;
  for (int i = 0; i < 100; ++i) {
    const double eps = i / 99.0;
    for (int j = 0; j < 100; ++j) {
      double a;
      if (j < 70) {
        a = j / 69.0 * (eps > 0.05 ? 1.0 / eps : 20.0);
      } else {
        const double g = (1.0 - eps) / 3.0;
        a = 1.0 + g * g * (j - 70) / 29.0;
      }
      ++points;
      const auto r = varphi3_factor(eps, a, 1e-12);
      const bool ok = (!r.first || r.first->holds) && (!r.second || r.second->holds);
      failures += !ok;
    }
  }
  for (int i = 0; i < 10000; ++i) {
    const double eps = i / 9999.0;
    failures += !varphi_bounds_check(eps, 1e-12).all();
    const double e2 = varphi2_min_eps() + (1.0 - varphi2_min_eps()) * i / 9999.0;
    failures += !varphi2_check(e2, 1e-12).all();
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 1.0,
          fmt("%zu (eps,A) points plus 2x10^4 eps points, %zu failures, %.3fs", points, failures, secs)};
}

// 2. Exact sandwich for K3.
Outcome exact_sandwich() {
  const auto t0 = Clock::now();
  const auto h = named_kgraph("K3");
  std::size_t rows = 0, checks = 0, violations = 0;
  std::string first;
  for (std::uint64_t n : {4, 5, 6}) {
    const auto turan = turan_data(h, n);
    for (double p : k3_ps()) {
      const auto inst = subgraph_family(h, n, p);
      const auto stats = compute_stats(inst.family);
      const auto dist = exact_distribution(inst.family);
      for (double eps : k3_eps()) {
        ++rows;
        const auto t = lower_tail_threshold(inst.family, eps);
        const double le = log_of(exact_lower_tail(dist, t, false));
        const double lt = log_of(exact_lower_tail(dist, t, true));
        const double zero = log_of(dist.at(0));
        auto bounds = all_bounds(inst.family, stats, eps);
        bounds.push_back(rsize_transfer(inst.family, eps));
        bounds.push_back(turan_lower_bound(h, n, p, turan));
        for (const auto& b : bounds) {
          if (!b.applicable) continue;
          ++checks;
          const double truth = b.event == TailEvent::at_most ? le : b.event == TailEvent::below ? lt : zero;
          const bool ok = b.direction == Direction::upper_on_tail ? truth <= b.log_value + 1e-10
                                                                   : b.log_value <= truth + 1e-10;
          if (!ok) {
            if (violations++ == 0) first = fmt(" first: %s n=%llu p=%g eps=%g", b.name.c_str(), (unsigned long long)n, p, eps);
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 120.0,
          fmt("%zu rows, %zu applicable bound checks, %zu violations, %.2fs", rows, checks, violations, secs) + first};
}

// 3. Chernoff regime: 2^20 independent singletons at p = 2^-15.
Outcome chernoff_regime() {
  const std::size_t n = std::size_t{1} << 20;
  const double p = std::ldexp(1.0, -15);
  std::vector<Member> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<Element>(i)};
  const IndicatorFamily f(GroundSet(std::vector<double>(n, p)), std::move(members));
  const auto stats = compute_stats(f);
  bool ok = true;
  std::string detail;
  for (double eps : {0.25, 0.5, 1.0}) {
    const auto t = lower_tail_threshold(f, eps);
    const double truth = log_binomial_cdf(n, p, t.le_cutoff);
    const auto b = lt_main(stats, eps);
    ok = ok && b.applicable && b.log_value <= truth + 1e-10;
    detail += fmt("eps=%g tail=%.6g bound=%.6g%s; ", eps, truth, b.log_value, b.applicable ? "" : " (inapplicable)");
  }
  const double at_one = log_binomial_cdf(n, p, 0);
  const double closed = static_cast<double>(n) * std::log1p(-p);
  const bool equal = std::abs(at_one - closed) <= 1e-10;
  detail += fmt("eps=1 vs (1-p)^N gap %.2e", std::abs(at_one - closed));
  return {ok && equal, detail};
}

// 4. Hypergeometric conditional moments against direct enumeration.
Outcome conditional_moments() {
  std::mt19937_64 rng(4);
  std::size_t cases = 0, mismatches = 0, inequality_failures = 0, j_checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + trial % 9;  // 4..12
    const Rational p(1 + static_cast<long long>(rng() % 15), 16);
    const Rational eps(1 + static_cast<long long>(rng() % 8), 8);
    std::uniform_int_distribution<std::size_t> count(1, 10), size(2, std::min<std::size_t>(4, n));
    std::vector<Element> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Element>(i);
    std::vector<Member> members;
    for (std::size_t a = count(rng); a > 0; --a) {
      std::shuffle(all.begin(), all.end(), rng);
      members.emplace_back(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(size(rng)));
    }
    const IndicatorFamily f(GroundSet(std::vector<double>(n, static_cast<double>(p))), members);
    ++cases;
    // mu and Lambda in exact arithmetic
    Rational mu(0), lambda(0);
    auto power = [&](std::size_t k) {
      Rational r(1);
      for (std::size_t i = 0; i < k; ++i) r *= p;
      return r;
    };
    for (std::size_t a = 0; a < f.size(); ++a) {
      mu += power(f.member(a).size());
      for (std::size_t b = 0; b < f.size(); ++b) {
        Member u;
        std::set_union(f.member(a).begin(), f.member(a).end(), f.member(b).begin(), f.member(b).end(),
                       std::back_inserter(u));
        if (u.size() < f.member(a).size() + f.member(b).size()) lambda += power(u.size());
      }
    }
    const std::int64_t m = rational_floor((1 - eps) * Rational(static_cast<long long>(n)) * p);
    const Rational shrink = (1 - eps) * (1 - eps);
    for (std::size_t j = 0; j <= n; ++j) {
      const auto formula = conditional_moments_given_size<Rational>(f, j);
      const auto direct = conditional_moments_by_enumeration<Rational>(f, j);
      mismatches += formula.cond_mean != direct.cond_mean || formula.cond_var != direct.cond_var;
      if (static_cast<std::int64_t>(j) <= m) {
        ++j_checked;
        inequality_failures += !(formula.cond_mean <= shrink * mu && formula.cond_var <= shrink * lambda);
      }
    }
  }
  return {mismatches == 0 && inequality_failures == 0,
          fmt("%zu families, %zu moment mismatches, %zu (j<=m) inequality checks, %zu failures", cases, mismatches,
              j_checked, inequality_failures)};
}

// 5. Conditional correlation counterexample.
Outcome correlation() {
  const auto c = correlation_counterexample<Rational>(3, Rational(1, 2));
  bool ok = c.pr_both_given_d == Rational(1, 5) && c.valid_rhs == Rational(1, 5) && c.valid_equality &&
            c.naive_rhs == Rational(4, 25) && !c.naive_holds;
  std::size_t fuzz = 0, violated = 0;
  for (std::size_t n : {3, 4, 5}) {
    for (const Rational& p : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
      ++fuzz;
      violated += !correlation_counterexample<Rational>(n, p).valid_holds;
    }
  }
  return {ok && violated == 0,
          "n=3 p=1/2: Pr(I1 I2|D)=" + rational_string(c.pr_both_given_d) + " Pr(I1)Pr(I2|D)=" +
              rational_string(c.valid_rhs) + " Pr(I1|D)Pr(I2|D)=" + rational_string(c.naive_rhs) +
              fmt("; %zu fuzz cases, %zu violations", fuzz, violated)};
}

// 6. Decomposition reconstruction and kappa decay.
Outcome decompositions() {
  std::size_t recon = 0, recon_fail = 0;
  auto reconstruct = [&](const DecomposedInstance& inst) {
    ++recon;
    recon_fail += !check_reconstruction(inst.decomposition, inst.family).holds;
  };
  std::vector<std::pair<std::uint64_t, Rational>> ap, schur;
  for (std::uint64_t n = 3; n <= 16; ++n) {
    const auto inst = ap_family(3, n, 0.5);
    reconstruct(inst);
    const auto k = kappa(inst.decomposition);
    if (k.defined()) ap.emplace_back(n, *k.exact);
  }
  for (std::uint64_t n = 3; n <= 14; ++n) {
    const auto inst = schur_family(n, 0.5);
    reconstruct(inst);
    // n = 3 holds the single triple {1,2,3}; the kappa trend starts at n = 4.
    if (n >= 4) schur.emplace_back(n, *kappa(inst.decomposition).exact);
  }
  auto trend = [](const std::vector<std::pair<std::uint64_t, Rational>>& v, std::size_t stride, Rational& c) {
    std::size_t start = 0;
    while (start < v.size() && v[start].second == 0) ++start;
    if (start == v.size()) return false;
    c = v[start].second * Rational(static_cast<long long>(v[start].first));
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      ok = ok && v[i].second <= c / Rational(static_cast<long long>(v[i].first));
      if (i + stride < v.size() && v[i].first >= v[start].first) ok = ok && v[i + stride].second <= v[i].second;
    }
    return ok;
  };
  Rational c_ap, c_schur;
  // AP kappa vanishes for even n, so non-increase is checked within each parity class.
  const bool ap_ok = trend(ap, 2, c_ap);
  const bool schur_ok = trend(schur, 1, c_schur);
  return {recon_fail == 0 && ap_ok && schur_ok,
          fmt("%zu decompositions reconstructed on all outcomes, %zu failures; ", recon, recon_fail) +
              "AP C=" + rational_string(c_ap) + (ap_ok ? " ok" : " FAILED") + ", Schur C=" + rational_string(c_schur) +
              (schur_ok ? " ok" : " FAILED")};
}

// 7. Double counting N(n,H) C_{J,H} = N(n,J) lambda_{J,H}(n).
Outcome double_counting() {
  std::size_t checks = 0, failures = 0;
  for (const char* name : {"K3", "P3", "K4"}) {
    const auto h = named_kgraph(name);
    for (const auto& entry : ih_family(h)) {
      for (std::uint64_t n : {6, 8, 10}) {
        ++checks;
        const unsigned __int128 lhs = static_cast<unsigned __int128>(copy_count(h, n)) * entry.cls.copies_in_h;
        const unsigned __int128 rhs =
            static_cast<unsigned __int128>(copy_count(entry.cls.graph, n)) * copies_containing(h, entry.cls.graph, n);
        failures += lhs != rhs;
      }
    }
  }
  return {failures == 0 && checks > 0, fmt("%zu (H, J, n) identities, %zu failures", checks, failures)};
}

// 8. Lambda asymptotics for K3 at p = n^{-1/2}.
Outcome lambda_trend() {
  const auto t0 = Clock::now();
  const std::vector<double> frozen{0.0882353, 0.0405405, 0.0194805};
  std::vector<double> gaps;
  bool matches = true;
  for (std::uint64_t n : {10, 20, 40}) {
    const auto inst = subgraph_family(named_kgraph("K3"), n, 1.0 / std::sqrt(static_cast<double>(n)));
    const double exact = compute_stats(inst.family).lambda;
    gaps.push_back(std::abs(exact / lambda_asymptotic(inst) - 1.0));
    matches = matches && std::abs(gaps.back() - frozen[gaps.size() - 1]) < 1e-6;
  }
  const bool decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  const double secs = seconds_since(t0);
  return {decreasing && gaps[2] < 0.5 && matches && secs < 60.0,
          fmt("gaps %.6g, %.6g, %.6g, %.2fs", gaps[0], gaps[1], gaps[2], secs)};
}

// 9. Monte Carlo against exact truth on the enumerable instances.
Outcome mc_consistency() {
  const auto t0 = Clock::now();
  std::vector<IndicatorFamily> families;
  for (std::uint64_t n : {4, 5, 6}) {
    for (double p : k3_ps()) families.push_back(subgraph_family(named_kgraph("K3"), n, p).family);
  }
  families.push_back(IndicatorFamily(GroundSet({0.5, 0.5, 0.5}), {{0, 1}, {1, 2}}));
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::size_t pairs = 0, failed_pairs = 0, strict_failed_pairs = 0;
  std::size_t worst_hits = 100;
  for (const auto& f : families) {
    const auto dist = exact_distribution(f);
    std::vector<TailThreshold> thresholds;
    for (double eps : k3_eps()) thresholds.push_back(lower_tail_threshold(f, eps));
    std::vector<std::size_t> within(thresholds.size(), 0), strict(thresholds.size(), 0);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto hist = mc_histogram(f, 100000, seed, {workers});
      for (std::size_t e = 0; e < thresholds.size(); ++e) {
        const auto est = estimate_from_histogram(hist, thresholds[e].le_cutoff, seed);
        const double exact = exact_lower_tail(dist, thresholds[e], false);
        const double width = est.ci_high - est.ci_low;
        within[e] += std::abs(est.point - exact) <= 3.0 * width / 2.0;
        strict[e] += std::abs(est.point - exact) <= 3.0 * width / (2.0 * kWilsonZ95) + 1e-15;
      }
    }
    for (std::size_t e = 0; e < thresholds.size(); ++e) {
      ++pairs;
      failed_pairs += within[e] < 99;
      strict_failed_pairs += strict[e] < 99;
      worst_hits = std::min(worst_hits, within[e]);
    }
  }
  return {failed_pairs == 0,
          fmt("%zu (instance, eps) pairs x 100 seeds x 10^5 samples; worst pair %zu/100 within 3(ci_high-ci_low)/2; "
              "%zu pairs below 99/100 (at z=3 exactly: %zu); %.1fs",
              pairs, worst_hits, failed_pairs, strict_failed_pairs, seconds_since(t0))};
}

// 10. Turan number and the zero-probability lower bound.
Outcome turan() {
  const auto h = named_kgraph("K3");
  const auto ex = turan_number(h, 5);
  const auto data = turan_data(h, 5);
  bool ok = ex == 6;
  std::string detail = fmt("ex(5,K3)=%llu", (unsigned long long)ex);
  for (double p : {0.2, 0.5, 0.8}) {
    const auto b = turan_lower_bound(h, 5, p, data);
    const double exact = exact_distribution(subgraph_family(h, 5, p).family).at(0);
    ok = ok && b.applicable && b.value() <= exact;
    detail += fmt("; p=%g bound=%.6g exact=%.6g", p, b.value(), exact);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"phi inequality grid", phi_inequalities},
      {"exact sandwich K3", exact_sandwich},
      {"Chernoff regime", chernoff_regime},
      {"conditional moments", conditional_moments},
      {"correlation counterexample", correlation},
      {"decomposition reconstruction", decompositions},
      {"double counting", double_counting},
      {"Lambda trend", lambda_trend},
      {"Monte Carlo consistency", mc_consistency},
      {"Turan bound", turan},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
