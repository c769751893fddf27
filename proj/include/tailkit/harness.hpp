#pragma once

// Experiment runner: bounds against exact or Monte Carlo truth over an eps
// grid, and normalised rate-function trends over a growing n grid.
//
// Config JSON (run):
//   {"instance": {"kind": "subgraph", "H": "K3" | "H_file": "h.kg", "n": 6, "p": 0.5 | [..]}
//              | {"kind": "ap", "k": 3, "n": 18, "p": ..}
//              | {"kind": "schur", "n": 12, "p": ..}
//              | {"kind": "family", "path": "x.family"},
//    "eps": [..], "bounds": [..] (default all),
//    "truth": {"mode": "exact"} | {"mode": "mc", "samples": S, "seed": K, "workers": W},
//    "output": "prefix"}                      -> prefix.csv and prefix.json
// Config JSON (trend): the same, with "n" a list, "eps" a number, and either
// "p" or "p_exponent" (p = n^p_exponent) in the instance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailkit/bounds.hpp"
#include "tailkit/exact.hpp"
#include "tailkit/family_io.hpp"
#include "tailkit/instances.hpp"
#include "tailkit/json_io.hpp"
#include "tailkit/monte_carlo.hpp"

namespace tailkit {

inline constexpr const char* kCsvVersion = "# tailkit-experiment-csv v1";
inline constexpr const char* kJsonVersion = "tailkit-experiment-json v1";
inline constexpr double kSandwichSlack = 1e-10;
inline constexpr double kMcFloor = 1e-4;  // smallest tail Monte Carlo truth is trusted for
inline constexpr double kBandLimit = 10.0;

inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names{"janson_upper", "harris_product", "harris_exponential", "lt_main",
                                              "lt2",          "lt3",            "lt4"};
  return names;
}

struct InstanceSpec {
  std::string kind;
  std::string h_name;
  std::string h_file;
  std::vector<std::uint64_t> n;
  unsigned k = 3;
  std::vector<double> p;
  std::optional<double> p_exponent;
  std::string path;
};

struct TruthSpec {
  std::string mode = "exact";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct ExperimentConfig {
  InstanceSpec instance;
  std::vector<double> eps;
  std::vector<std::string> bounds;
  TruthSpec truth;
  std::string output;
};

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

inline InstanceSpec parse_instance(const json& j, const std::filesystem::path& base) {
  InstanceSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (s.kind == "family") {
    s.path = resolve(base, j.at("path").get<std::string>()).string();
    return s;
  }
  if (s.kind != "subgraph" && s.kind != "ap" && s.kind != "schur") {
    throw Error("config: unknown instance kind '" + s.kind + "'");
  }
  s.n = scalar_or_list<std::uint64_t>(j.at("n"));
  if (j.contains("p")) s.p = scalar_or_list<double>(j.at("p"));
  if (j.contains("p_exponent")) s.p_exponent = j.at("p_exponent").get<double>();
  if (s.p.empty() && !s.p_exponent) throw Error("config: instance needs 'p' or 'p_exponent'");
  if (s.kind == "ap") s.k = j.value("k", 3U);
  if (s.kind == "subgraph") {
    if (j.contains("H_file")) {
      s.h_file = resolve(base, j.at("H_file").get<std::string>()).string();
    } else {
      s.h_name = j.at("H").get<std::string>();
    }
  }
  for (double p : s.p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("config: p must lie in [0,1]");
  }
  return s;
}

inline TruthSpec parse_truth(const json& j) {
  TruthSpec t;
  t.mode = j.value("mode", std::string("exact"));
  if (t.mode != "exact" && t.mode != "mc") throw Error("config: truth mode must be 'exact' or 'mc'");
  t.samples = j.value("samples", t.samples);
  t.seed = j.value("seed", t.seed);
  t.workers = j.value("workers", t.workers);
  if (t.mode == "mc" && t.samples < 1) throw Error("config: mc truth needs samples >= 1");
  return t;
}

inline unsigned capped_workers(unsigned requested) {
  unsigned w = std::max(1U, requested);
  if (const char* env = std::getenv("TAILKIT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) w = std::min(w, static_cast<unsigned>(cap));
  }
  return w;
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const json& j, const std::filesystem::path& base = ".") {
  try {
    ExperimentConfig c;
    c.instance = detail::parse_instance(j.at("instance"), base);
    c.eps = j.contains("eps") ? detail::scalar_or_list<double>(j.at("eps")) : std::vector<double>{};
    for (double e : c.eps) {
      if (!(e >= 0.0 && e <= 1.0)) throw Error("config: eps values must lie in [0,1]");
    }
    c.bounds = j.contains("bounds") ? j.at("bounds").get<std::vector<std::string>>() : bound_names();
    for (const auto& b : c.bounds) {
      if (std::find(bound_names().begin(), bound_names().end(), b) == bound_names().end()) {
        throw Error("config: unknown bound '" + b + "'");
      }
    }
    if (j.contains("truth")) c.truth = detail::parse_truth(j.at("truth"));
    if (j.contains("output")) c.output = detail::resolve(base, j.at("output").get<std::string>()).string();
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_json_file(path), std::filesystem::path(path).parent_path());
}

/// One concrete family built from an InstanceSpec.
struct BuiltInstance {
  std::string id;
  IndicatorFamily family;
  std::uint64_t n = 0;
  double p = std::nan("");
  double phi_h = std::nan("");  // subgraph counts only
  double psi_k = std::nan("");  // progressions only: min{n^2 p^k, n p}
};

inline std::vector<BuiltInstance> build_instances(const InstanceSpec& spec) {
  std::vector<BuiltInstance> out;
  if (spec.kind == "family") {
    BuiltInstance b;
    b.id = "family:" + std::filesystem::path(spec.path).filename().string();
    b.family = read_family(spec.path);
    b.n = b.family.ground().size();
    out.push_back(std::move(b));
    return out;
  }
  std::optional<KGraph> h;
  std::string h_label;
  if (spec.kind == "subgraph") {
    h = spec.h_file.empty() ? named_kgraph(spec.h_name) : read_kgraph(spec.h_file);
    h_label = spec.h_file.empty() ? spec.h_name : std::filesystem::path(spec.h_file).filename().string();
  }
  for (std::uint64_t n : spec.n) {
    std::vector<double> ps = spec.p;
    if (spec.p_exponent) ps = {std::pow(static_cast<double>(n), *spec.p_exponent)};
    for (double p : ps) {
      BuiltInstance b;
      b.n = n;
      b.p = p;
      if (spec.kind == "subgraph") {
        auto inst = subgraph_family(*h, n, p);
        b.id = "subgraph:" + h_label + ":n=" + std::to_string(n) + ":p=" + format_double(p);
        b.phi_h = inst.phi_h;
        b.family = std::move(inst.family);
      } else if (spec.kind == "ap") {
        b.id = "ap:k=" + std::to_string(spec.k) + ":n=" + std::to_string(n) + ":p=" + format_double(p);
        b.family = ap_family(spec.k, n, p).family;
        const double nn = static_cast<double>(n);
        b.psi_k = std::min(nn * nn * std::pow(p, spec.k), nn * p);
      } else {
        b.id = "schur:n=" + std::to_string(n) + ":p=" + format_double(p);
        b.family = schur_family(n, p).family;
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

/// Truth for one event: the probability and, for Monte Carlo, its Wilson interval.
struct TruthValue {
  double point = std::nan("");
  double ci_low = std::nan("");
  double ci_high = std::nan("");
};

struct BoundCell {
  std::string name;
  bool evaluated = false;
  double log_value = std::nan("");
  bool applicable = false;
  TailEvent event = TailEvent::at_most;
  Direction direction = Direction::lower_on_tail;
};

struct ExperimentRow {
  std::string instance_id;
  std::uint64_t n = 0;
  double p = std::nan("");
  double eps = 0.0;
  std::string truth_mode;
  TruthValue tail_le;
  TruthValue tail_lt;
  TruthValue tail_zero;
  bool mc_out_of_reach = false;
  FamilyStats stats;
  double phi = 0.0;
  double phi_h = std::nan("");
  double psi_k = std::nan("");
  std::vector<BoundCell> bounds;
  double ratio_phi_h = std::nan("");
  double ratio_mu2_over_lambda = std::nan("");
  double ratio_psi_k = std::nan("");

  const TruthValue& truth(TailEvent e) const {
    switch (e) {
      case TailEvent::at_most: return tail_le;
      case TailEvent::below: return tail_lt;
      case TailEvent::zero: return tail_zero;
    }
    return tail_le;
  }
};

namespace detail {

inline double log_of(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// -log(tail) / (phi * scale), NaN when undefined.
inline double normalised_rate(double tail, double phi, double scale) {
  if (!(phi > 0.0) || !(scale > 0.0) || std::isnan(tail)) return std::nan("");
  return -log_of(tail) / (phi * scale);
}

inline void check_exact_row(const ExperimentRow& row) {
  for (const auto& b : row.bounds) {
    if (!b.evaluated) continue;
    std::ostringstream why;
    if (b.direction == Direction::upper_on_tail) {
      const double truth = log_of(row.tail_le.point);
      if (truth > b.log_value + kSandwichSlack) {
        why << "upper bound " << b.name << " = " << format_double(b.log_value) << " below log truth "
            << format_double(truth);
      }
    } else if (b.applicable) {
      const double truth = log_of(row.truth(b.event).point);
      if (b.log_value > truth + kSandwichSlack) {
        why << "applicable lower bound " << b.name << " = " << format_double(b.log_value) << " above log truth "
            << format_double(truth) << " (event " << to_string(b.event) << ")";
      }
    }
    if (!why.str().empty()) {
      throw Error("sandwich violation on " + row.instance_id + " at eps=" + format_double(row.eps) + ": " + why.str());
    }
  }
}

inline void check_mc_row(const ExperimentRow& row) {
  for (const auto& b : row.bounds) {
    if (!b.evaluated) continue;
    const auto& t = row.truth(b.direction == Direction::upper_on_tail ? TailEvent::at_most : b.event);
    if (!(t.point >= kMcFloor)) continue;
    const double sigma = (t.ci_high - t.ci_low) / (2.0 * kWilsonZ95);
    const double value = std::exp(b.log_value);
    bool bad = false;
    if (b.direction == Direction::upper_on_tail) {
      bad = t.point - 3.0 * sigma > value * (1.0 + kSandwichSlack);
    } else if (b.applicable) {
      bad = value * (1.0 - kSandwichSlack) > t.point + 3.0 * sigma;
    }
    if (bad) {
      throw Error("Monte Carlo inconsistency on " + row.instance_id + " at eps=" + format_double(row.eps) +
                  ": bound " + b.name + " = " + format_double(value) + " vs estimate " + format_double(t.point) +
                  " +- 3 sigma (" + format_double(sigma) + ")");
    }
  }
}

inline std::vector<BoundCell> evaluate_bounds(const IndicatorFamily& family, const FamilyStats& stats, double eps,
                                              const std::vector<std::string>& selected) {
  std::vector<BoundCell> cells;
  for (const auto& r : all_bounds(family, stats, eps)) {
    BoundCell c;
    c.name = r.name;
    c.evaluated = std::find(selected.begin(), selected.end(), r.name) != selected.end();
    if (c.evaluated) {
      c.log_value = r.log_value;
      c.applicable = r.applicable;
    }
    c.event = r.event;
    c.direction = r.direction;
    cells.push_back(std::move(c));
  }
  return cells;
}

inline TruthValue mc_truth(std::span<const std::uint64_t> hist, std::int64_t cutoff, std::uint64_t seed) {
  const auto e = estimate_from_histogram(hist, cutoff, seed);
  return {e.point, e.ci_low, e.ci_high};
}

}  // namespace detail

/// Rows for one built instance, in eps order.
inline std::vector<ExperimentRow> experiment_rows(const BuiltInstance& inst, const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  if (config.eps.empty()) return rows;
  const auto stats = compute_stats(inst.family);
  std::optional<ExactDistribution> dist;
  std::vector<std::uint64_t> hist;
  if (config.truth.mode == "exact") {
    dist = exact_distribution(inst.family);
  } else {
    hist = mc_histogram(inst.family, config.truth.samples, config.truth.seed, {detail::capped_workers(config.truth.workers)});
  }
  for (double eps : config.eps) {
    ExperimentRow row;
    row.instance_id = inst.id;
    row.n = inst.n;
    row.p = inst.p;
    row.eps = eps;
    row.truth_mode = config.truth.mode;
    row.stats = stats;
    row.phi = phi_lower(eps);
    row.phi_h = inst.phi_h;
    row.psi_k = inst.psi_k;
    const auto t = lower_tail_threshold(inst.family, stats.mu, eps);
    if (dist) {
      row.tail_le.point = exact_lower_tail(*dist, t, false);
      row.tail_lt.point = exact_lower_tail(*dist, t, true);
      row.tail_zero.point = dist->at(0);
    } else {
      row.tail_le = detail::mc_truth(hist, t.le_cutoff, config.truth.seed);
      row.tail_lt = detail::mc_truth(hist, t.lt_cutoff, config.truth.seed);
      row.tail_zero = detail::mc_truth(hist, 0, config.truth.seed);
      row.mc_out_of_reach = row.tail_le.point < kMcFloor;
    }
    row.bounds = detail::evaluate_bounds(inst.family, stats, eps, config.bounds);
    if (!row.mc_out_of_reach) {
      const double ratio_scale = stats.lambda > 0.0 ? stats.mu * stats.mu / stats.lambda : std::nan("");
      row.ratio_phi_h = detail::normalised_rate(row.tail_le.point, row.phi, inst.phi_h);
      row.ratio_mu2_over_lambda = detail::normalised_rate(row.tail_le.point, row.phi, ratio_scale);
      row.ratio_psi_k = detail::normalised_rate(row.tail_le.point, row.phi, inst.psi_k);
    }
    if (dist) {
      detail::check_exact_row(row);
    } else {
      detail::check_mc_row(row);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<ExperimentRow> run_experiment_rows(const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  for (const auto& inst : build_instances(config.instance)) {
    auto part = experiment_rows(inst, config);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvVersion << '\n';
  out << "instance,n,p,eps,truth,tail_le,tail_lt,tail_zero,ci_le_low,ci_le_high,mc_out_of_reach,mu,pi,lambda,delta,phi";
  for (const auto& name : bound_names()) out << ',' << name << "_log," << name << "_ok";
  out << ",ratio_phi_h,ratio_mu2_over_lambda,ratio_psi_k\n";
  auto num = [](double x) { return format_double(x); };
  for (const auto& r : rows) {
    out << r.instance_id << ',' << r.n << ',' << num(r.p) << ',' << num(r.eps) << ',' << r.truth_mode << ','
        << num(r.tail_le.point) << ',' << num(r.tail_lt.point) << ',' << num(r.tail_zero.point) << ','
        << num(r.tail_le.ci_low) << ',' << num(r.tail_le.ci_high) << ',' << (r.mc_out_of_reach ? 1 : 0) << ','
        << num(r.stats.mu) << ',' << num(r.stats.pi) << ',' << num(r.stats.lambda) << ','
        << num(r.stats.delta.value_or(std::nan(""))) << ',' << num(r.phi);
    for (const auto& b : r.bounds) {
      if (b.evaluated) {
        out << ',' << num(b.log_value) << ',' << (b.applicable ? 1 : 0);
      } else {
        out << ",,";
      }
    }
    out << ',' << num(r.ratio_phi_h) << ',' << num(r.ratio_mu2_over_lambda) << ',' << num(r.ratio_psi_k) << '\n';
  }
}

inline json to_json(const TruthValue& t) {
  return {{"point", number(t.point)}, {"ci_low", number(t.ci_low)}, {"ci_high", number(t.ci_high)}};
}

inline json to_json(const ExperimentRow& r) {
  json bounds = json::array();
  for (const auto& b : r.bounds) {
    if (!b.evaluated) continue;
    bounds.push_back({{"name", b.name},
                      {"log_value", number(b.log_value)},
                      {"applicable", b.applicable},
                      {"event", std::string(to_string(b.event))},
                      {"direction", std::string(to_string(b.direction))}});
  }
  return {{"instance", r.instance_id},
          {"n", r.n},
          {"p", number(r.p)},
          {"eps", r.eps},
          {"truth", r.truth_mode},
          {"tail_le", to_json(r.tail_le)},
          {"tail_lt", to_json(r.tail_lt)},
          {"tail_zero", to_json(r.tail_zero)},
          {"mc_out_of_reach", r.mc_out_of_reach},
          {"stats", to_json(r.stats)},
          {"phi", number(r.phi)},
          {"phi_H", number(r.phi_h)},
          {"psi_k", number(r.psi_k)},
          {"bounds", bounds},
          {"ratio_phi_h", number(r.ratio_phi_h)},
          {"ratio_mu2_over_lambda", number(r.ratio_mu2_over_lambda)},
          {"ratio_psi_k", number(r.ratio_psi_k)}};
}

inline json rows_json(const std::vector<ExperimentRow>& rows) {
  json out = {{"format", kJsonVersion}, {"rows", json::array()}};
  for (const auto& r : rows) out["rows"].push_back(to_json(r));
  return out;
}

/// Runs the experiment and writes <output>.csv and <output>.json when an output prefix is set.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  auto rows = run_experiment_rows(config);
  if (!config.output.empty()) {
    const auto parent = std::filesystem::path(config.output).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream csv(config.output + ".csv");
    if (!csv) throw Error("cannot write " + config.output + ".csv");
    write_csv(csv, rows);
    std::ofstream js(config.output + ".json");
    if (!js) throw Error("cannot write " + config.output + ".json");
    js << rows_json(rows).dump(2) << '\n';
  }
  return rows;
}

struct TrendRow {
  std::string instance_id;
  std::uint64_t n = 0;
  double p = 0.0;
  double tail = 0.0;
  double phi = 0.0;
  double phi_h = std::nan("");
  double mu2_over_lambda = std::nan("");
  double psi_k = std::nan("");
  double ratio_phi_h = std::nan("");
  double ratio_mu2_over_lambda = std::nan("");
  double ratio_psi_k = std::nan("");
};

struct TrendBand {
  std::string scale;
  std::size_t points = 0;
  double band = std::nan("");  // max ratio / min ratio over the n grid
  bool within_band = false;
};

struct TrendReport {
  double eps = 0.0;
  std::vector<TrendRow> rows;
  std::vector<TrendBand> bands;
};

namespace detail {

inline TrendBand band_of(const std::string& scale, const std::vector<double>& ratios) {
  TrendBand b;
  b.scale = scale;
  double lo = kInf;
  double hi = 0.0;
  for (double r : ratios) {
    if (!(std::isfinite(r) && r > 0.0)) continue;
    ++b.points;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (b.points > 0) {
    b.band = hi / lo;
    b.within_band = b.band < kBandLimit;
  }
  return b;
}

}  // namespace detail

/// -log Pr(X <= (1-eps) mu) / (phi(-eps) * scale) across the n grid.
inline TrendReport rate_function_trend(const ExperimentConfig& config) {
  if (config.eps.size() != 1) throw Error("trend: give exactly one eps value");
  TrendReport report;
  report.eps = config.eps.front();
  const double phi = phi_lower(report.eps);
  for (const auto& inst : build_instances(config.instance)) {
    const auto stats = compute_stats(inst.family);
    const auto t = lower_tail_threshold(inst.family, stats.mu, report.eps);
    TrendRow row;
    row.instance_id = inst.id;
    row.n = inst.n;
    row.p = inst.p;
    row.phi = phi;
    row.phi_h = inst.phi_h;
    row.psi_k = inst.psi_k;
    row.mu2_over_lambda = stats.lambda > 0.0 ? stats.mu * stats.mu / stats.lambda : std::nan("");
    if (config.truth.mode == "exact") {
      row.tail = exact_distribution(inst.family).cdf(t.le_cutoff);
    } else {
      const auto hist = mc_histogram(inst.family, config.truth.samples, config.truth.seed,
                                     {detail::capped_workers(config.truth.workers)});
      row.tail = estimate_from_histogram(hist, t.le_cutoff, config.truth.seed).point;
      if (row.tail < kMcFloor) {
        throw Error("trend: Monte Carlo tail " + format_double(row.tail) + " on " + inst.id +
                    " is below the 1e-4 reach of plain sampling; use exact truth or a smaller instance");
      }
    }
    row.ratio_phi_h = detail::normalised_rate(row.tail, phi, row.phi_h);
    row.ratio_mu2_over_lambda = detail::normalised_rate(row.tail, phi, row.mu2_over_lambda);
    row.ratio_psi_k = detail::normalised_rate(row.tail, phi, row.psi_k);
    report.rows.push_back(row);
  }
  std::vector<double> a, b, c;
  for (const auto& r : report.rows) {
    a.push_back(r.ratio_phi_h);
    b.push_back(r.ratio_mu2_over_lambda);
    c.push_back(r.ratio_psi_k);
  }
  report.bands = {detail::band_of("phi_H", a), detail::band_of("mu2_over_lambda", b), detail::band_of("psi_k", c)};
  return report;
}

inline json to_json(const TrendReport& r) {
  json rows = json::array();
  for (const auto& t : r.rows) {
    rows.push_back({{"instance", t.instance_id},
                    {"n", t.n},
                    {"p", number(t.p)},
                    {"tail", number(t.tail)},
                    {"phi", number(t.phi)},
                    {"phi_H", number(t.phi_h)},
                    {"mu2_over_lambda", number(t.mu2_over_lambda)},
                    {"psi_k", number(t.psi_k)},
                    {"ratio_phi_h", number(t.ratio_phi_h)},
                    {"ratio_mu2_over_lambda", number(t.ratio_mu2_over_lambda)},
                    {"ratio_psi_k", number(t.ratio_psi_k)}});
  }
  json bands = json::object();
  for (const auto& b : r.bands) {
    bands[b.scale] = {{"points", b.points}, {"band", number(b.band)}, {"within_band", b.within_band}};
  }
  return {{"format", "tailkit-trend-json v1"}, {"eps", r.eps}, {"rows", rows}, {"bands", bands}};
}

inline TrendReport run_trend(const ExperimentConfig& config) {
  auto report = rate_function_trend(config);
  if (!config.output.empty()) {
    std::ofstream js(config.output + ".json");
    if (!js) throw Error("cannot write " + config.output + ".json");
    js << to_json(report).dump(2) << '\n';
  }
  return report;
}

}  // namespace tailkit
