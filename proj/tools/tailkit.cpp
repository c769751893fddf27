// tailkit command-line front end. Every command prints JSON on stdout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tailkit/tailkit.hpp"

namespace {

using tailkit::json;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

tailkit::KGraph graph_arg(const std::string& text) {
  if (std::filesystem::exists(text)) return tailkit::read_kgraph(text);
  return tailkit::named_kgraph(text);
}

std::vector<tailkit::Vertex> vertex_list(const std::string& text) {
  std::vector<tailkit::Vertex> out;
  std::stringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (!tok.empty()) out.push_back(static_cast<tailkit::Vertex>(std::stoul(tok)));
  }
  return out;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw tailkit::Error("cannot write " + path);
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower-tail bounds for sums of dependent indicators"};
  app.require_subcommand(1);

  std::string family_path;
  double eps = 0.5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  auto* stats = app.add_subcommand("stats", "mu, Pi, Lambda, delta of a family file");
  stats->add_option("family", family_path, "family file")->required()->check(CLI::ExistingFile);

  auto* exact = app.add_subcommand("exact", "exact lower tail by enumeration");
  exact->add_option("--eps", eps, "relative deviation")->required();
  exact->add_option("family", family_path)->required()->check(CLI::ExistingFile);

  auto* mc = app.add_subcommand("mc", "Monte Carlo lower tail with a Wilson interval");
  mc->add_option("--eps", eps)->required();
  mc->add_option("--samples", samples)->required();
  mc->add_option("--seed", seed)->required();
  mc->add_option("--workers", workers);
  mc->add_option("family", family_path)->required()->check(CLI::ExistingFile);

  double a_factor = 0.0;
  auto* phi = app.add_subcommand("phi", "phi(-eps) and the inequalities around it");
  phi->add_option("--eps", eps)->required();
  auto* a_opt = phi->add_option("--A", a_factor, "scale A for phi(-A eps)");

  auto* bounds = app.add_subcommand("bounds", "all closed-form bounds at one eps");
  bounds->add_option("--eps", eps)->required();
  bounds->add_option("family", family_path)->required()->check(CLI::ExistingFile);

  double sigma = 0.5;
  double tau = 0.5;
  auto* holder = app.add_subcommand("holder", "exact Hoelder decomposition check");
  holder->add_option("--eps", eps)->required();
  holder->add_option("--sigma", sigma)->required();
  holder->add_option("--tau", tau)->required();
  holder->add_option("family", family_path)->required()->check(CLI::ExistingFile);

  auto* transfer = app.add_subcommand("transfer", "transfer bounds");
  transfer->require_subcommand(1);
  auto* rsize = transfer->add_subcommand("rsize", "size-conditioning transfer");
  rsize->add_option("--eps", eps)->required();
  rsize->add_option("family", family_path)->required()->check(CLI::ExistingFile);
  std::size_t k_param = 0;
  auto* rsize2 = transfer->add_subcommand("rsize2", "size-conditioning transfer with slack tau");
  rsize2->add_option("--eps", eps)->required();
  rsize2->add_option("--tau", tau)->required();
  auto* k_opt = rsize2->add_option("--k", k_param, "lower bound on |Q(alpha)| (default: the minimum)");
  rsize2->add_option("family", family_path)->required()->check(CLI::ExistingFile);
  double gamma = 1.0;
  std::string decomposition_path;
  auto* rcor = transfer->add_subcommand("rcor", "symmetric-decomposition transfer");
  rcor->add_option("--eps", eps)->required();
  rcor->add_option("--gamma", gamma)->required();
  rcor->add_option("--samples", samples, "Monte Carlo samples when Y is not enumerable");
  rcor->add_option("--seed", seed);
  rcor->add_option("decomposition", decomposition_path, "decomposition JSON")->required()->check(CLI::ExistingFile);
  std::string h_arg, g_arg, u_arg;
  std::uint64_t n_arg = 0;
  double p_arg = 0.5;
  double ell = 1.0;
  auto* vxsym = transfer->add_subcommand("vxsym", "vertex-symmetry transfer");
  vxsym->add_option("--H", h_arg, "k-graph file or name (K3, P3, C4, edge)")->required();
  vxsym->add_option("--G", g_arg, "k-graph file or name")->required();
  vxsym->add_option("--n", n_arg)->required();
  vxsym->add_option("--p", p_arg)->required();
  vxsym->add_option("--eps", eps)->required();
  vxsym->add_option("--U", u_arg, "comma-separated vertices")->required();
  vxsym->add_option("--ell", ell, "allowed deviation of |U| from n/2");

  auto* instance = app.add_subcommand("instance", "generate a family file and a JSON sidecar");
  instance->require_subcommand(1);
  std::string out_prefix;
  unsigned k_len = 3;
  auto* subgraph = instance->add_subcommand("subgraph", "copies of H in the random k-graph");
  subgraph->add_option("--H", h_arg)->required();
  subgraph->add_option("--n", n_arg)->required();
  subgraph->add_option("--p", p_arg)->required();
  subgraph->add_option("--out", out_prefix, "output prefix")->required();
  auto* ap = instance->add_subcommand("ap", "arithmetic progressions in [n]");
  ap->add_option("--k", k_len)->required();
  ap->add_option("--n", n_arg)->required();
  ap->add_option("--p", p_arg)->required();
  ap->add_option("--out", out_prefix)->required();
  auto* schur = instance->add_subcommand("schur", "Schur triples in [n]");
  schur->add_option("--n", n_arg)->required();
  schur->add_option("--p", p_arg)->required();
  schur->add_option("--out", out_prefix)->required();

  std::string config_path;
  auto* experiment = app.add_subcommand("experiment", "run configured experiments");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "bounds against truth over an eps grid");
  run->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  auto* trend = experiment->add_subcommand("trend", "normalised rate function over an n grid");
  trend->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  std::size_t corr_n = 3;
  std::string corr_p = "1/2";
  auto* correlation = app.add_subcommand("correlation", "exact check of the conditional correlation counterexample");
  correlation->add_option("--n", corr_n);
  correlation->add_option("--p", corr_p, "probability as a/b or a decimal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tailkit: error: " << e.what() << '\n';
    return 1;
  }

  try {
    using namespace tailkit;
    if (*stats) {
      const auto f = read_family(family_path);
      emit(to_json(compute_stats(f)));
    } else if (*exact) {
      const auto f = read_family(family_path);
      const auto dist = exact_distribution(f);
      const auto t = lower_tail_threshold(f, eps);
      emit({{"threshold", to_json(t)},
            {"tail_le", exact_lower_tail(dist, t, false)},
            {"tail_lt", exact_lower_tail(dist, t, true)},
            {"pr_zero", dist.at(0)},
            {"distribution", to_json(dist)}});
    } else if (*mc) {
      const auto f = read_family(family_path);
      emit(to_json(mc_lower_tail(f, eps, samples, seed, {workers})));
    } else if (*phi) {
      json out = {{"eps", eps}, {"phi", phi_value(eps).value}, {"varphi_bounds", to_json(varphi_bounds_check(eps))}};
      if (eps >= varphi2_min_eps()) {
        const auto c = varphi2_check(eps);
        out["near_one"] = {{"scaled", c.scaled}, {"holds", c.all()}};
      }
      if (*a_opt) {
        const auto r = varphi3_factor(eps, a_factor);
        json v = {{"A", a_factor}};
        if (r.first || r.second) v["best_factor"] = r.best().factor;
        if (r.first) v["first"] = to_json(*r.first);
        if (r.second) v["second"] = to_json(*r.second);
        out["scaled_argument"] = v;
      }
      emit(out);
    } else if (*bounds) {
      const auto f = read_family(family_path);
      const auto s = compute_stats(f);
      json arr = json::array();
      for (const auto& b : all_bounds(f, s, eps)) arr.push_back(to_json(b));
      emit({{"eps", eps}, {"stats", to_json(s)}, {"bounds", arr}});
    } else if (*holder) {
      emit(to_json(holder_report(read_family(family_path), eps, sigma, tau)));
    } else if (*rsize) {
      emit(to_json(rsize_transfer(read_family(family_path), eps)));
    } else if (*rsize2) {
      std::optional<std::size_t> k;
      if (*k_opt) k = k_param;
      emit(to_json(rsize2_transfer(read_family(family_path), eps, tau, k)));
    } else if (*rcor) {
      const auto d = read_decomposition(decomposition_path);
      YTailOptions opts;
      opts.mc_samples = samples;
      opts.mc_seed = seed;
      emit({{"kappa", to_json(kappa(d))},
            {"bound", to_json(rcor_transfer(d, eps, gamma, opts))},
            {"zero", to_json(rcor_zero(d, opts))}});
    } else if (*vxsym) {
      VxsymOptions opts;
      opts.ell = ell;
      emit(to_json(vxsym_transfer(graph_arg(h_arg), graph_arg(g_arg), n_arg, p_arg, eps, vertex_list(u_arg), opts)));
    } else if (*subgraph) {
      const auto inst = subgraph_family(graph_arg(h_arg), n_arg, p_arg);
      save_family(out_prefix + ".family", inst.family, "copies of " + h_arg + " in the random k-graph, n=" + std::to_string(n_arg));
      const auto sidecar = to_json(inst);
      write_text(out_prefix + ".json", sidecar.dump(2) + "\n");
      emit({{"family", out_prefix + ".family"}, {"sidecar", out_prefix + ".json"}, {"copies", inst.copies}});
    } else if (*ap || *schur) {
      const bool is_ap = ap->parsed();
      const auto inst = is_ap ? ap_family(k_len, n_arg, p_arg) : schur_family(n_arg, p_arg);
      const std::string what = is_ap ? std::to_string(k_len) + "-term progressions in [" + std::to_string(n_arg) + "]"
                                     : "Schur triples in [" + std::to_string(n_arg) + "]";
      save_family(out_prefix + ".family", inst.family, what + "; element i is the integer i+1");
      write_text(out_prefix + ".decomposition.json", to_json(inst.decomposition).dump(2) + "\n");
      json sidecar = {{"kind", is_ap ? "ap" : "schur"},
                      {"n", n_arg},
                      {"p", p_arg},
                      {"members", inst.family.size()},
                      {"stats", to_json(compute_stats(inst.family))},
                      {"kappa", to_json(kappa(inst.decomposition))}};
      if (is_ap) {
        sidecar["k"] = k_len;
        const double n = static_cast<double>(n_arg);
        sidecar["psi_k"] = std::min(n * n * std::pow(p_arg, k_len), n * p_arg);
      }
      write_text(out_prefix + ".json", sidecar.dump(2) + "\n");
      emit({{"family", out_prefix + ".family"},
            {"sidecar", out_prefix + ".json"},
            {"decomposition", out_prefix + ".decomposition.json"},
            {"members", inst.family.size()}});
    } else if (*run) {
      const auto config = load_experiment_config(config_path);
      const auto rows = run_experiment(config);
      json out = {{"rows", rows.size()}, {"sandwich", "ok"}};
      if (!config.output.empty()) {
        out["csv"] = config.output + ".csv";
        out["json"] = config.output + ".json";
      } else {
        out["report"] = rows_json(rows);
      }
      emit(out);
    } else if (*trend) {
      emit(to_json(run_trend(load_experiment_config(config_path))));
    } else if (*correlation) {
      Rational p;
      if (auto slash = corr_p.find('/'); slash != std::string::npos) {
        p = Rational(boost::multiprecision::cpp_int(corr_p.substr(0, slash)),
                     boost::multiprecision::cpp_int(corr_p.substr(slash + 1)));
      } else {
        p = exact_rational(std::stod(corr_p));
      }
      emit(to_json(correlation_counterexample<Rational>(corr_n, p)));
    }
  } catch (const tailkit::Error& e) {
    std::cerr << "tailkit: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tailkit: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
