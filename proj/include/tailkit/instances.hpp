#pragma once

// Concrete random structures: copies of a k-graph H in the binomial random
// k-graph, arithmetic progressions and Schur triples in a random subset of
// [n], and the Turan construction for Pr(X_H = 0).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "tailkit/bounds.hpp"
#include "tailkit/decomposition.hpp"
#include "tailkit/indicator.hpp"
#include "tailkit/kgraph.hpp"

namespace tailkit {

/// A copy of H in the complete k-graph on n vertices.
struct Copy {
  std::vector<Vertex> vertices;      // sorted
  std::vector<std::uint32_t> edges;  // sorted colex ranks
};

struct CopyOptions {
  std::uint64_t max_copies = 2'000'000;
};

/// N(n, H) = n (n-1) ... (n - v_H + 1) / |Aut(H)|.
inline std::uint64_t copy_count(const KGraph& h, std::uint64_t n) {
  return falling(n, h.v()) / automorphism_count(h);
}

namespace detail {

// Calls visit(subset) for every sorted w-subset of {0, ..., n-1}.
template <class Visit>
void for_each_subset(std::uint64_t n, unsigned w, Visit&& visit) {
  if (w > n) return;
  std::vector<Vertex> s(w);
  for (unsigned i = 0; i < w; ++i) s[i] = i;
  while (true) {
    visit(static_cast<const std::vector<Vertex>&>(s));
    int i = static_cast<int>(w) - 1;
    while (i >= 0 && s[static_cast<unsigned>(i)] == n - w + static_cast<unsigned>(i)) --i;
    if (i < 0) return;
    ++s[static_cast<unsigned>(i)];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < w; ++j) s[j] = s[j - 1] + 1;
  }
}

// Distinct labelled copies of g on {0, ..., v-1}, each as a list of local edges.
inline std::vector<std::vector<KEdge>> local_placements(const KGraph& g) {
  std::vector<Vertex> perm(g.v());
  for (unsigned i = 0; i < g.v(); ++i) perm[i] = i;
  std::map<std::vector<std::uint32_t>, std::vector<KEdge>> seen;
  do {
    std::vector<KEdge> edges;
    for (const auto& e : g.edges()) {
      KEdge img;
      for (Vertex x : e) img.push_back(perm[x]);
      std::sort(img.begin(), img.end());
      edges.push_back(std::move(img));
    }
    std::vector<std::uint32_t> ranks;
    for (const auto& e : edges) ranks.push_back(colex_rank(e));
    std::sort(ranks.begin(), ranks.end());
    seen.emplace(std::move(ranks), std::move(edges));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::vector<KEdge>> out;
  for (auto& [ranks, edges] : seen) out.push_back(std::move(edges));
  return out;
}

inline std::vector<std::uint32_t> mapped_ranks(const std::vector<KEdge>& local, const std::vector<Vertex>& subset) {
  std::vector<std::uint32_t> ranks;
  ranks.reserve(local.size());
  KEdge img;
  for (const auto& e : local) {
    img.clear();
    for (Vertex x : e) img.push_back(subset[x]);  // subset is sorted, so img stays sorted
    ranks.push_back(colex_rank(img));
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

}  // namespace detail

/// Every distinct copy of H in K_n^{(k)}, ordered by vertex set then edge set.
inline std::vector<Copy> enumerate_copies(const KGraph& h, std::uint64_t n, const CopyOptions& options = {}) {
  if (n < h.v()) throw Error("enumerate_copies: need n >= v_H");
  const std::uint64_t expected = copy_count(h, n);
  if (expected > options.max_copies) {
    throw Error("enumerate_copies: N(n,H) = " + std::to_string(expected) + " exceeds the cap of " +
                std::to_string(options.max_copies));
  }
  const auto placements = detail::local_placements(h);
  std::vector<Copy> copies;
  copies.reserve(expected);
  detail::for_each_subset(n, h.v(), [&](const std::vector<Vertex>& subset) {
    for (const auto& local : placements) copies.push_back({subset, detail::mapped_ranks(local, subset)});
  });
  return copies;
}

/// C_{J,H}: the number of distinct subgraphs of H isomorphic to J.
inline std::uint64_t count_copies_in(const KGraph& j, const KGraph& h) {
  if (j.k() != h.k() || j.v() > h.v()) return 0;
  std::vector<std::uint32_t> host;
  for (const auto& e : h.edges()) host.push_back(colex_rank(e));
  std::sort(host.begin(), host.end());
  const auto placements = detail::local_placements(j);
  std::uint64_t count = 0;
  detail::for_each_subset(h.v(), j.v(), [&](const std::vector<Vertex>& subset) {
    for (const auto& local : placements) {
      const auto ranks = detail::mapped_ranks(local, subset);
      count += std::includes(host.begin(), host.end(), ranks.begin(), ranks.end());
    }
  });
  return count;
}

/// True when every copy of J in H is an induced subgraph of H.
inline bool copies_are_induced(const KGraph& j, const KGraph& h) {
  if (j.k() != h.k() || j.v() > h.v()) return true;
  std::vector<std::uint32_t> host;
  for (const auto& e : h.edges()) host.push_back(colex_rank(e));
  std::sort(host.begin(), host.end());
  const auto placements = detail::local_placements(j);
  bool induced = true;
  detail::for_each_subset(h.v(), j.v(), [&](const std::vector<Vertex>& subset) {
    const std::size_t spanned = induced_subgraph(h, subset).e();
    for (const auto& local : placements) {
      const auto ranks = detail::mapped_ranks(local, subset);
      if (std::includes(host.begin(), host.end(), ranks.begin(), ranks.end()) && ranks.size() != spanned) {
        induced = false;
      }
    }
  });
  return induced;
}

/// Number of copies of H in K_n^{(k)} containing one fixed copy of J (J placed on vertices 0..v_J-1).
inline std::uint64_t copies_containing(const KGraph& h, const KGraph& j, std::uint64_t n,
                                       const CopyOptions& options = {}) {
  std::vector<Vertex> base(j.v());
  for (unsigned i = 0; i < j.v(); ++i) base[i] = i;
  std::vector<std::uint32_t> fixed;
  for (const auto& e : j.edges()) fixed.push_back(colex_rank(e));
  std::sort(fixed.begin(), fixed.end());
  std::uint64_t count = 0;
  for (const auto& c : enumerate_copies(h, n, options)) {
    count += std::includes(c.edges.begin(), c.edges.end(), fixed.begin(), fixed.end()) &&
             std::includes(c.vertices.begin(), c.vertices.end(), base.begin(), base.end());
  }
  return count;
}

struct SubgraphClass {
  KGraph graph;  // representative on vertices 0..v_J-1
  std::uint64_t copies_in_h = 0;
  bool has_isolated = false;
};

inline bool has_isolated_vertex(const KGraph& g) {
  std::vector<char> touched(g.v(), 0);
  for (const auto& e : g.edges()) {
    for (Vertex x : e) touched[x] = 1;
  }
  return std::find(touched.begin(), touched.end(), 0) != touched.end();
}

inline constexpr std::size_t kMaxSubgraphEdges = 12;

/// Isomorphism classes of subgraphs J of H with e_J >= 1, isolated-vertex variants included.
inline std::vector<SubgraphClass> subgraph_classes(const KGraph& h) {
  if (h.e() > kMaxSubgraphEdges) throw Error("subgraph classes: H has more than 12 edges");
  if (h.v() > kMaxCanonicalVertices) throw Error("subgraph classes: H has more than 8 vertices");
  std::map<std::pair<unsigned, std::vector<std::uint32_t>>, KGraph> classes;
  std::map<std::pair<unsigned, std::vector<std::uint32_t>>, std::vector<std::uint32_t>> canon_cache;
  for (std::uint32_t wmask = 1; wmask < (1U << h.v()); ++wmask) {
    std::vector<Vertex> w;
    for (unsigned x = 0; x < h.v(); ++x) {
      if (wmask >> x & 1U) w.push_back(x);
    }
    if (w.size() < h.k()) continue;
    const KGraph spanned = induced_subgraph(h, w);
    for (std::uint32_t fmask = 1; fmask < (1U << spanned.e()); ++fmask) {
      std::vector<KEdge> edges;
      for (std::size_t i = 0; i < spanned.e(); ++i) {
        if (fmask >> i & 1U) edges.push_back(spanned.edges()[i]);
      }
      KGraph j(h.k(), static_cast<unsigned>(w.size()), std::move(edges));
      std::vector<std::uint32_t> ranks;
      for (const auto& e : j.edges()) ranks.push_back(colex_rank(e));
      auto cache_key = std::make_pair(j.v(), ranks);
      auto it = canon_cache.find(cache_key);
      if (it == canon_cache.end()) it = canon_cache.emplace(cache_key, canonical_form(j)).first;
      classes.try_emplace({j.v(), it->second}, std::move(j));
    }
  }
  std::vector<SubgraphClass> out;
  for (auto& [key, g] : classes) {
    SubgraphClass c;
    c.copies_in_h = count_copies_in(g, h);
    c.has_isolated = has_isolated_vertex(g);
    c.graph = std::move(g);
    out.push_back(std::move(c));
  }
  return out;
}

/// E X_J = N(n, J) p^{e_J}.
inline double expected_count(const KGraph& j, std::uint64_t n, double p) {
  if (n < j.v()) return 0.0;
  return static_cast<double>(copy_count(j, n)) * std::pow(p, static_cast<double>(j.e()));
}

/// m_k(H) = max over J in H with e_J >= 2 of (e_J - 1)/(v_J - k), or 1/k when e_H = 1.
inline boost::rational<long long> m_k(const KGraph& h) {
  if (h.e() == 0) throw Error("m_k: H has no edges");
  if (h.e() == 1) return {1, static_cast<long long>(h.k())};
  std::optional<boost::rational<long long>> best;
  for (const auto& c : subgraph_classes(h)) {
    if (c.graph.e() < 2) continue;
    boost::rational<long long> r(static_cast<long long>(c.graph.e()) - 1,
                                 static_cast<long long>(c.graph.v()) - static_cast<long long>(h.k()));
    if (!best || r > *best) best = r;
  }
  return *best;
}

/// Classes J in I_H: e_J = max{e_K : K in H, v_K = v_J} >= 1.
struct IhEntry {
  SubgraphClass cls;
  bool copies_induced = false;
};

inline std::vector<IhEntry> ih_family(const KGraph& h) {
  if (h.e() == 0) throw Error("I_H: H has no edges");
  std::vector<std::size_t> max_edges(h.v() + 1, 0);
  for (std::uint32_t wmask = 1; wmask < (1U << h.v()); ++wmask) {
    std::vector<Vertex> w;
    for (unsigned x = 0; x < h.v(); ++x) {
      if (wmask >> x & 1U) w.push_back(x);
    }
    if (w.size() < h.k()) continue;
    max_edges[w.size()] = std::max(max_edges[w.size()], induced_subgraph(h, w).e());
  }
  std::vector<IhEntry> out;
  for (auto& c : subgraph_classes(h)) {
    if (c.graph.e() == max_edges[c.graph.v()] && c.graph.e() >= 1) {
      IhEntry entry;
      entry.copies_induced = copies_are_induced(c.graph, h);
      entry.cls = std::move(c);
      out.push_back(std::move(entry));
    }
  }
  return out;
}

struct SubgraphInstance {
  KGraph h;
  std::uint64_t n = 0;
  double p = 0.0;
  IndicatorFamily family;
  std::uint64_t copies = 0;           // N(n, H)
  double phi_h = 0.0;                 // min E X_J over classes with e_J >= 1, isolated vertices allowed
  double phi_h_no_isolated = 0.0;     // same, over classes without isolated vertices
  boost::rational<long long> mk;
  std::vector<IhEntry> ih;            // with C_{J,H} in ih[i].cls.copies_in_h
};

/// Phi_H in both conventions: {isolated vertices allowed, no isolated vertices}.
inline std::pair<double, double> phi_h_values(const KGraph& h, std::uint64_t n, double p) {
  double with = kInf;
  double without = kInf;
  for (const auto& c : subgraph_classes(h)) {
    if (c.graph.v() > n) continue;
    const double ex = expected_count(c.graph, n, p);
    with = std::min(with, ex);
    if (!c.has_isolated) without = std::min(without, ex);
  }
  return {with, without};
}

inline SubgraphInstance subgraph_family(const KGraph& h, std::uint64_t n, double p, const CopyOptions& options = {}) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("subgraph_family: p must lie in [0,1]");
  if (h.e() == 0) throw Error("subgraph_family: H has no edges");
  SubgraphInstance inst;
  inst.h = h;
  inst.n = n;
  inst.p = p;
  const auto copies = enumerate_copies(h, n, options);
  std::vector<Member> members;
  members.reserve(copies.size());
  for (const auto& c : copies) members.emplace_back(c.edges.begin(), c.edges.end());
  inst.family = IndicatorFamily(GroundSet::uniform(choose(n, h.k()), p), std::move(members));
  inst.copies = copies.size();
  std::tie(inst.phi_h, inst.phi_h_no_isolated) = phi_h_values(h, n, p);
  inst.mk = m_k(h);
  inst.ih = ih_family(h);
  return inst;
}

/// sum_{J in I_H} C_{J,H}^2 (E X_H)^2 / E X_J.
inline double lambda_asymptotic(const SubgraphInstance& inst) {
  if (!(inst.p > 0.0)) throw Error("lambda_asymptotic: requires p > 0");
  const double ex_h = expected_count(inst.h, inst.n, inst.p);
  CompensatedSum acc;
  for (const auto& entry : inst.ih) {
    const double c = static_cast<double>(entry.cls.copies_in_h);
    acc.add(c * c * ex_h * ex_h / expected_count(entry.cls.graph, inst.n, inst.p));
  }
  return acc.value();
}

/// A family over [n] together with its symmetric decomposition over singletons.
struct DecomposedInstance {
  IndicatorFamily family;
  SymmetricDecomposition decomposition;
};

namespace detail {

inline IndicatorFamily singletons(const GroundSet& ground) {
  std::vector<Member> ys;
  for (Element i = 0; i < ground.size(); ++i) ys.push_back({i});
  return IndicatorFamily(ground, std::move(ys));
}

}  // namespace detail

/// All k-term progressions {b, b+d, ..., b+(k-1)d} in [n], ordered by d then b.
/// Element x of [n] is ground index x - 1. Each progression gives weight 1/2
/// to each of its two endpoints.
inline DecomposedInstance ap_family(unsigned k_len, std::uint64_t n, double p) {
  if (k_len < 2) throw Error("ap_family: progression length must be at least 2");
  const auto ground = GroundSet::uniform(n, p);
  std::vector<Member> members;
  std::vector<std::vector<WeightedSet>> parts(n);
  for (std::uint64_t d = 1; 1 + (k_len - 1) * d <= n; ++d) {
    for (std::uint64_t b = 1; b + (k_len - 1) * d <= n; ++b) {
      Member q;
      for (unsigned t = 0; t < k_len; ++t) q.push_back(static_cast<Element>(b + t * d - 1));
      parts[q.front()].push_back({0.5, q});
      parts[q.back()].push_back({0.5, q});
      members.push_back(std::move(q));
    }
  }
  DecomposedInstance out{IndicatorFamily(ground, std::move(members)), {detail::singletons(ground), std::move(parts)}};
  return out;
}

/// Schur triples {x, y, x+y} with 1 <= x < y, x + y <= n, ordered by x then y.
/// Weight 1/2 goes to beta = x + y and 1/4 to beta = x and beta = y.
inline DecomposedInstance schur_family(std::uint64_t n, double p) {
  if (n < 3) throw Error("schur_family: need n >= 3");
  const auto ground = GroundSet::uniform(n, p);
  std::vector<Member> members;
  std::vector<std::vector<WeightedSet>> parts(n);
  for (std::uint64_t x = 1; 2 * x + 1 <= n; ++x) {
    for (std::uint64_t y = x + 1; x + y <= n; ++y) {
      Member q{static_cast<Element>(x - 1), static_cast<Element>(y - 1), static_cast<Element>(x + y - 1)};
      parts[x - 1].push_back({0.25, q});
      parts[y - 1].push_back({0.25, q});
      parts[x + y - 1].push_back({0.5, q});
      members.push_back(std::move(q));
    }
  }
  DecomposedInstance out{IndicatorFamily(ground, std::move(members)), {detail::singletons(ground), std::move(parts)}};
  return out;
}

struct TuranOptions {
  std::uint64_t max_ground_edges = 20;
  std::uint64_t max_nodes = std::uint64_t{1} << 20;
};

/// ex(n, H) by branch and bound over edge subsets of K_n^{(k)}.
inline std::uint64_t turan_number(const KGraph& h, std::uint64_t n, const TuranOptions& options = {}) {
  const std::uint64_t m = choose(n, h.k());
  if (m > options.max_ground_edges) {
    throw Error("turan_number: C(n,k) = " + std::to_string(m) + " ground edges exceeds the cap of " +
                std::to_string(options.max_ground_edges));
  }
  if (n < h.v()) return m;
  std::vector<std::uint64_t> masks;
  std::vector<std::vector<std::size_t>> by_edge(m);
  for (const auto& c : enumerate_copies(h, n)) {
    std::uint64_t mask = 0;
    for (auto r : c.edges) mask |= std::uint64_t{1} << r;
    for (auto r : c.edges) by_edge[r].push_back(masks.size());
    masks.push_back(mask);
  }
  std::uint64_t best = 0;
  std::uint64_t nodes = 0;
  auto search = [&](auto&& self, std::size_t i, std::uint64_t chosen, std::uint64_t count) -> void {
    if (++nodes > options.max_nodes) throw Error("turan_number: search node guard exceeded");
    if (count + (m - i) <= best) return;
    if (i == m) {
      best = count;
      return;
    }
    const std::uint64_t with = chosen | (std::uint64_t{1} << i);
    const bool completes = std::any_of(by_edge[i].begin(), by_edge[i].end(),
                                       [&](std::size_t c) { return (masks[c] & ~with) == 0; });
    if (!completes) self(self, i + 1, with, count + 1);
    self(self, i + 1, chosen, count);
  };
  search(search, 0, 0, 0);
  return best;
}

/// pi_H = 1 - 1/(chi(H) - 1) for graphs.
inline double turan_density(const KGraph& h) {
  if (h.k() != 2) throw Error("turan_density: only derivable for graphs (k = 2); supply pi_H");
  const unsigned chi = chromatic_number(h);
  if (chi < 2) throw Error("turan_density: H has no edges");
  return 1.0 - 1.0 / (chi - 1.0);
}

struct TuranData {
  KGraph h;
  std::uint64_t n = 0;
  std::optional<std::uint64_t> ex_n;
  std::optional<double> pi_h;
};

/// ex(n, H) when the ground set is small enough, and pi_H when derivable.
inline TuranData turan_data(const KGraph& h, std::uint64_t n, const TuranOptions& options = {}) {
  TuranData t;
  t.h = h;
  t.n = n;
  if (choose(n, h.k()) <= options.max_ground_edges) t.ex_n = turan_number(h, n, options);
  if (h.k() == 2 && h.e() > 0) t.pi_h = turan_density(h);
  return t;
}

/// Pr(X_H = 0) >= (1 - p)^{C(n,k) - ex(n,H)}: every edge outside a fixed extremal H-free graph is absent.
/// Without ex(n,H) the count floor(pi_H C(n,k)) is used; ex(n,H)/C(n,k) decreases to pi_H, so it is a valid under-estimate.
inline BoundResult turan_lower_bound(const KGraph& h, std::uint64_t n, double p, const TuranData& turan) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("turan_lower_bound: p must lie in [0,1]");
  const std::uint64_t m = choose(n, h.k());
  BoundResult r;
  r.name = "turan_lower";
  r.event = TailEvent::zero;
  std::uint64_t free_edges = 0;
  if (turan.ex_n) {
    free_edges = *turan.ex_n;
    r.constants["ex_n"] = static_cast<double>(free_edges);
  } else if (turan.pi_h) {
    free_edges = static_cast<std::uint64_t>(std::floor(*turan.pi_h * static_cast<double>(m)));
    r.constants["pi_H"] = *turan.pi_h;
    r.notes.push_back("ex(n,H) replaced by floor(pi_H C(n,k))");
  } else {
    throw Error("turan_lower_bound: neither ex(n,H) nor pi_H is available");
  }
  const std::uint64_t forced = m - std::min(m, free_edges);
  r.constants["forced_absent_edges"] = static_cast<double>(forced);
  r.log_value = forced == 0 ? 0.0 : static_cast<double>(forced) * std::log1p(-p);
  detail::finish(r);
  return r;
}

}  // namespace tailkit
