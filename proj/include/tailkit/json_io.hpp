#pragma once

// JSON views of the library types (nlohmann::json). Non-finite doubles are
// written as null, or as the strings "inf" / "-inf" where the sign matters.

#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"

#include "tailkit/bootstrap.hpp"
#include "tailkit/bounds.hpp"
#include "tailkit/decomposition.hpp"
#include "tailkit/exact.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/instances.hpp"
#include "tailkit/monte_carlo.hpp"
#include "tailkit/phi.hpp"

namespace tailkit {

using nlohmann::json;

inline json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double number_from(const json& j) {
  if (j.is_null()) return std::nan("");
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return kNegInf;
    throw Error("expected a number, found string '" + s + "'");
  }
  return j.get<double>();
}

inline std::string rational_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline json to_json(const FamilyStats& s) {
  return {{"mu", number(s.mu)},
          {"pi", number(s.pi)},
          {"lambda", number(s.lambda)},
          {"delta", s.delta ? number(*s.delta) : json(nullptr)},
          {"n_members", s.n_members},
          {"ordered_overlap_pairs", s.ordered_overlap_pairs}};
}

inline json to_json(const TailThreshold& t) {
  return {{"eps", t.eps}, {"threshold", number(t.threshold)}, {"le_cutoff", t.le_cutoff},
          {"lt_cutoff", t.lt_cutoff}, {"exact", t.exact}};
}

inline json to_json(const ExactDistribution& d) {
  json pmf = json::array();
  for (std::size_t i = 0; i < d.support.size(); ++i) pmf.push_back({d.support[i], d.pmf[i]});
  return {{"ground_size", d.source_size}, {"pmf", pmf}, {"mean", d.mean()}, {"variance", d.variance()}};
}

inline json to_json(const MCEstimate& e) {
  return {{"point", e.point}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
          {"hits", e.hits},   {"samples", e.samples}, {"seed", e.seed}};
}

inline json to_json(const BoundResult& b) {
  json conditions = json::array();
  for (const auto& c : b.conditions) conditions.push_back({{"name", c.name}, {"holds", c.holds}});
  json constants = json::object();
  for (const auto& [k, v] : b.constants) constants[k] = number(v);
  return {{"name", b.name},
          {"direction", std::string(to_string(b.direction))},
          {"event", std::string(to_string(b.event))},
          {"log_value", number(b.log_value)},
          {"value", number(b.value())},
          {"applicable", b.applicable},
          {"conditions", conditions},
          {"constants", constants},
          {"notes", b.notes}};
}

inline json to_json(const HolderReport& h) {
  return {{"eps", h.eps},
          {"sigma", h.sigma},
          {"tau", h.tau},
          {"p_holder", h.p_holder},
          {"q_holder", h.q_holder},
          {"z", number(h.z)},
          {"s", number(h.s)},
          {"lambda", number(h.lambda)},
          {"factor_A", number(h.log_factor_a)},
          {"factor_B", number(h.log_factor_b)},
          {"factor_C", number(h.log_factor_c)},
          {"log_product", number(h.log_product())},
          {"log_strict_tail", number(h.log_strict_tail)},
          {"holder_holds", h.holder_holds},
          {"eta", number(h.eta)},
          {"bc_bound_applicable", h.bc_bound_applicable},
          {"bc_bound_rhs", number(h.bc_bound_rhs)},
          {"bc_bound_holds", h.bc_bound_holds},
          {"a_bound_applicable", h.a_bound_applicable},
          {"a_bound_rhs", number(h.a_bound_rhs)},
          {"a_bound_holds", h.a_bound_holds}};
}

inline json to_json(const VarphiBoundsCheck& c) {
  return {{"left_log", number(c.left_log)},         {"left_square", number(c.left_square)},
          {"two_phi", number(c.two_phi)},           {"right_log", number(c.right_log)},
          {"right_square", number(c.right_square)}, {"holds", c.all()}};
}

inline json to_json(const Varphi3Branch& b) {
  return {{"factor", number(b.factor)}, {"lhs", number(b.lhs)}, {"rhs", number(b.rhs)}, {"holds", b.holds}};
}

inline json to_json(const KGraph& g) {
  return {{"k", g.k()}, {"v", g.v()}, {"edges", g.edges()}};
}

inline json to_json(const KappaValue& k) {
  return {{"value", number(k.value)},
          {"exact", k.exact ? json(rational_string(*k.exact)) : json(nullptr)},
          {"min_part_mean", k.min_part_mean},
          {"max_part_mean", k.max_part_mean}};
}

inline json to_json(const SubgraphInstance& inst) {
  json ih = json::array();
  for (const auto& entry : inst.ih) {
    ih.push_back({{"graph", to_json(entry.cls.graph)},
                  {"C_JH", entry.cls.copies_in_h},
                  {"copies_induced", entry.copies_induced},
                  {"expected_count", expected_count(entry.cls.graph, inst.n, inst.p)}});
  }
  json out = {{"kind", "subgraph"},
              {"H", to_json(inst.h)},
              {"n", inst.n},
              {"p", inst.p},
              {"copies", inst.copies},
              {"ground_size", inst.family.ground().size()},
              {"phi_H", number(inst.phi_h)},
              {"phi_H_no_isolated", number(inst.phi_h_no_isolated)},
              {"m_k", std::to_string(inst.mk.numerator()) + "/" + std::to_string(inst.mk.denominator())},
              {"I_H", ih},
              {"stats", to_json(compute_stats(inst.family))}};
  if (inst.p > 0.0) out["lambda_asymptotic"] = number(lambda_asymptotic(inst));
  return out;
}

/// {"ground": [...], "y_members": [[...], ...], "parts": {"beta": [[w, [elements]], ...]}}
inline json to_json(const SymmetricDecomposition& d) {
  json ys = json::array();
  for (const auto& q : d.y_family.members()) ys.push_back(q);
  json parts = json::object();
  for (std::size_t b = 0; b < d.parts.size(); ++b) {
    json list = json::array();
    for (const auto& ws : d.parts[b]) list.push_back({ws.weight, ws.set});
    parts[std::to_string(b)] = list;
  }
  std::vector<double> ground(d.y_family.ground().probs().begin(), d.y_family.ground().probs().end());
  return {{"ground", ground}, {"y_members", ys}, {"parts", parts}};
}

inline SymmetricDecomposition decomposition_from_json(const json& j) {
  try {
    GroundSet ground(j.at("ground").get<std::vector<double>>());
    std::vector<Member> ys;
    for (const auto& m : j.at("y_members")) ys.push_back(m.get<Member>());
    SymmetricDecomposition d{IndicatorFamily(ground, std::move(ys)), {}};
    d.parts.resize(d.y_family.size());
    for (const auto& [key, list] : j.at("parts").items()) {
      const auto b = std::stoull(key);
      if (b >= d.parts.size()) throw Error("part index " + key + " has no beta member");
      for (const auto& entry : list) {
        d.parts[b].push_back({entry.at(0).get<double>(), entry.at(1).get<Member>()});
      }
    }
    validate(d);
    return d;
  } catch (const json::exception& e) {
    throw Error(std::string("decomposition JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(std::string("decomposition JSON: ") + e.what());
  }
}

inline SymmetricDecomposition read_decomposition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open decomposition file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return decomposition_from_json(j);
}

template <class Scalar>
json to_json(const ConditionalCorrelation<Scalar>& c) {
  auto show = [](const Scalar& x) -> json {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return rational_string(x);
    } else {
      return x;
    }
  };
  return {{"pr_d", show(c.pr_d)},
          {"pr_i1", show(c.pr_i1)},
          {"pr_i1_given_d", show(c.pr_i1_given_d)},
          {"pr_i2_given_d", show(c.pr_i2_given_d)},
          {"pr_both_given_d", show(c.pr_both_given_d)},
          {"valid_rhs", show(c.valid_rhs)},
          {"naive_rhs", show(c.naive_rhs)},
          {"valid_holds", c.valid_holds},
          {"valid_equality", c.valid_equality},
          {"naive_holds", c.naive_holds}};
}

}  // namespace tailkit
