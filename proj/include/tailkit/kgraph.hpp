#pragma once

// Small k-uniform hypergraphs with brute-force canonical labelling.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tailkit/numeric.hpp"

namespace tailkit {

using Vertex = std::uint32_t;
using KEdge = std::vector<Vertex>;  // sorted k-subset

/// Exact binomial coefficient; throws on overflow of 64 bits.
inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw Error("choose: result does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

/// n (n-1) ... (n-v+1); throws on overflow.
inline std::uint64_t falling(std::uint64_t n, std::uint64_t v) {
  if (v > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < v; ++i) {
    r *= n - i;
    if (r > UINT64_MAX) throw Error("falling: result does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

/// Colex rank of a sorted k-subset: sum_i C(c_i, i) with 1-based i.
inline std::uint32_t colex_rank(const KEdge& e) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < e.size(); ++i) r += choose(e[i], i + 1);
  return static_cast<std::uint32_t>(r);
}

class KGraph {
 public:
  KGraph() = default;

  KGraph(unsigned k, unsigned v, std::vector<KEdge> edges) : k_(k), v_(v), edges_(std::move(edges)) {
    if (k_ < 2) throw Error("k-graph: uniformity k must be at least 2");
    if (v_ != 0 && v_ < k_) throw Error("k-graph: need v >= k or v = 0");
    for (auto& e : edges_) {
      std::sort(e.begin(), e.end());
      if (e.size() != k_) throw Error("k-graph: edge with " + std::to_string(e.size()) + " vertices, expected " + std::to_string(k_));
      if (std::adjacent_find(e.begin(), e.end()) != e.end()) throw Error("k-graph: edge repeats a vertex");
      if (e.back() >= v_) throw Error("k-graph: edge vertex " + std::to_string(e.back()) + " out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw Error("k-graph: repeated edge");
  }

  unsigned k() const { return k_; }
  unsigned v() const { return v_; }
  std::size_t e() const { return edges_.size(); }
  const std::vector<KEdge>& edges() const { return edges_; }

  bool operator==(const KGraph&) const = default;

 private:
  unsigned k_ = 2;
  unsigned v_ = 0;
  std::vector<KEdge> edges_;
};

inline KGraph complete_kgraph(unsigned k, unsigned v) {
  std::vector<KEdge> edges;
  std::vector<bool> pick(v, false);
  std::fill(pick.begin(), pick.begin() + std::min(k, v), true);
  if (k <= v) {
    do {
      KEdge e;
      for (unsigned i = 0; i < v; ++i) {
        if (pick[i]) e.push_back(i);
      }
      edges.push_back(e);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return KGraph(k, v, std::move(edges));
}

/// Graph path on `vertices` vertices.
inline KGraph path_graph(unsigned vertices) {
  std::vector<KEdge> edges;
  for (unsigned i = 0; i + 1 < vertices; ++i) edges.push_back({i, i + 1});
  return KGraph(2, vertices, std::move(edges));
}

inline KGraph cycle_graph(unsigned vertices) {
  if (vertices < 3) throw Error("cycle: need at least 3 vertices");
  auto edges = path_graph(vertices).edges();
  edges.push_back({0, vertices - 1});
  return KGraph(2, vertices, std::move(edges));
}

inline KGraph single_edge(unsigned k) { return complete_kgraph(k, k); }

/// K<m>, P<m> (path on m vertices), C<m>, or "edge".
inline KGraph named_kgraph(const std::string& name) {
  if (name == "edge") return single_edge(2);
  if (name.size() >= 2) {
    const unsigned m = static_cast<unsigned>(std::stoul(name.substr(1)));
    switch (name[0]) {
      case 'K': return complete_kgraph(2, m);
      case 'P': return path_graph(m);
      case 'C': return cycle_graph(m);
      default: break;
    }
  }
  throw Error("unknown graph name '" + name + "' (use K<m>, P<m>, C<m> or edge)");
}

/// Image of g under the vertex map perm (perm[old] = new), edges as sorted colex ranks.
inline std::vector<std::uint32_t> relabelled_ranks(const KGraph& g, const std::vector<Vertex>& perm) {
  std::vector<std::uint32_t> ranks;
  ranks.reserve(g.e());
  KEdge img;
  for (const auto& e : g.edges()) {
    img.clear();
    for (Vertex x : e) img.push_back(perm[x]);
    std::sort(img.begin(), img.end());
    ranks.push_back(colex_rank(img));
  }
  std::sort(ranks.begin(), ranks.end());
  return ranks;
}

inline constexpr unsigned kMaxCanonicalVertices = 8;

/// Lexicographically least relabelled edge-rank list over all v! vertex permutations.
inline std::vector<std::uint32_t> canonical_form(const KGraph& g) {
  if (g.v() > kMaxCanonicalVertices) throw Error("canonical form: more than 8 vertices");
  std::vector<Vertex> perm(g.v());
  std::iota(perm.begin(), perm.end(), 0);
  auto best = relabelled_ranks(g, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    auto cand = relabelled_ranks(g, perm);
    if (cand < best) best = std::move(cand);
  }
  return best;
}

inline bool isomorphic(const KGraph& a, const KGraph& b) {
  return a.k() == b.k() && a.v() == b.v() && a.e() == b.e() && canonical_form(a) == canonical_form(b);
}

inline std::uint64_t automorphism_count(const KGraph& g) {
  if (g.v() > kMaxCanonicalVertices) throw Error("automorphisms: more than 8 vertices");
  std::vector<Vertex> perm(g.v());
  std::iota(perm.begin(), perm.end(), 0);
  const auto identity = relabelled_ranks(g, perm);
  std::uint64_t count = 0;
  do {
    count += relabelled_ranks(g, perm) == identity;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// Distinct labelled copies of g on the vertex set {0, ..., v-1}, as sorted edge-rank lists.
inline std::vector<std::vector<std::uint32_t>> labelled_placements(const KGraph& g) {
  if (g.v() > kMaxCanonicalVertices) throw Error("placements: more than 8 vertices");
  std::vector<Vertex> perm(g.v());
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::vector<std::uint32_t>> seen;
  do {
    seen.insert(relabelled_ranks(g, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {seen.begin(), seen.end()};
}

/// Subgraph of g induced by the sorted vertex list w, relabelled to 0..|w|-1.
inline KGraph induced_subgraph(const KGraph& g, const std::vector<Vertex>& w) {
  std::vector<KEdge> edges;
  for (const auto& e : g.edges()) {
    KEdge img;
    for (Vertex x : e) {
      auto it = std::lower_bound(w.begin(), w.end(), x);
      if (it == w.end() || *it != x) break;
      img.push_back(static_cast<Vertex>(it - w.begin()));
    }
    if (img.size() == e.size()) edges.push_back(std::move(img));
  }
  return KGraph(g.k(), static_cast<unsigned>(w.size()), std::move(edges));
}

/// Proper-colouring chromatic number of a graph (k = 2), by backtracking.
inline unsigned chromatic_number(const KGraph& g) {
  if (g.k() != 2) throw Error("chromatic number: only graphs (k = 2) are supported");
  if (g.v() == 0) return 0;
  if (g.e() == 0) return 1;
  std::vector<std::vector<Vertex>> adj(g.v());
  for (const auto& e : g.edges()) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::vector<int> colour(g.v(), -1);
  for (unsigned c = 2; c <= g.v(); ++c) {
    std::fill(colour.begin(), colour.end(), -1);
    auto place = [&](auto&& self, Vertex x) -> bool {
      if (x == g.v()) return true;
      for (unsigned col = 0; col < c; ++col) {
        const bool clash = std::any_of(adj[x].begin(), adj[x].end(), [&](Vertex y) { return colour[y] == static_cast<int>(col); });
        if (clash) continue;
        colour[x] = static_cast<int>(col);
        if (self(self, x + 1)) return true;
      }
      colour[x] = -1;
      return false;
    };
    if (place(place, 0)) return c;
  }
  return g.v();
}

}  // namespace tailkit
