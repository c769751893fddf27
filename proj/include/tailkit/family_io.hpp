#pragma once

// Text formats.
//
// Family file:   line 1 "N", line 2 the N probabilities (decimal or "a/b"),
//                then one member per line as element indices ("-" for an
//                empty member). '#' starts a comment.
// KGraph file:   line 1 "k v", then one edge per line as k vertex indices.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tailkit/indicator.hpp"
#include "tailkit/kgraph.hpp"

namespace tailkit {

namespace detail {

// Non-empty lines with comments removed, paired with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.emplace_back(number, line);
  }
  return out;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

inline double parse_probability(const std::string& token, const std::string& at) {
  try {
    std::size_t used = 0;
    if (auto slash = token.find('/'); slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(token);
      const std::string den_text = token.substr(slash + 1);
      const double den = std::stod(den_text, &used);
      if (used != den_text.size() || den == 0.0) throw std::invalid_argument(token);
      return num / den;
    }
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::logic_error&) {
    throw Error(at + "bad probability '" + token + "'");
  }
}

inline std::uint64_t parse_index(const std::string& token, const std::string& at) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(at + "bad index '" + token + "'");
  }
  try {
    return std::stoull(token);
  } catch (const std::logic_error&) {
    throw Error(at + "index out of range '" + token + "'");
  }
}

}  // namespace detail

inline IndicatorFamily parse_family(std::istream& in, const std::string& source = "<family>") {
  const auto lines = detail::content_lines(in);
  if (lines.size() < 2) throw Error(source + ": expected a size line and a probability line");
  const auto head = detail::tokens(lines[0].second);
  if (head.size() != 1) throw Error(detail::where(source, lines[0].first) + "expected a single ground-set size");
  const auto n = detail::parse_index(head[0], detail::where(source, lines[0].first));
  const auto prob_tokens = detail::tokens(lines[1].second);
  if (prob_tokens.size() != n) {
    throw Error(detail::where(source, lines[1].first) + "expected " + std::to_string(n) + " probabilities, found " +
                std::to_string(prob_tokens.size()));
  }
  std::vector<double> probs;
  for (const auto& t : prob_tokens) probs.push_back(detail::parse_probability(t, detail::where(source, lines[1].first)));
  std::vector<Member> members;
  for (std::size_t l = 2; l < lines.size(); ++l) {
    const auto at = detail::where(source, lines[l].first);
    const auto toks = detail::tokens(lines[l].second);
    Member m;
    if (!(toks.size() == 1 && toks[0] == "-")) {
      for (const auto& t : toks) {
        const auto idx = detail::parse_index(t, at);
        if (idx >= n) throw Error(at + "element " + t + " outside a ground set of size " + std::to_string(n));
        m.push_back(static_cast<Element>(idx));
      }
    }
    members.push_back(std::move(m));
  }
  try {
    return IndicatorFamily(GroundSet(std::move(probs)), std::move(members));
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
}

inline IndicatorFamily read_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open family file " + path);
  return parse_family(in, path);
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_family(std::ostream& out, const IndicatorFamily& family, const std::string& comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << family.ground().size() << '\n';
  const auto probs = family.ground().probs();
  for (std::size_t i = 0; i < probs.size(); ++i) out << (i ? " " : "") << format_double(probs[i]);
  out << '\n';
  for (const auto& q : family.members()) {
    if (q.empty()) {
      out << "-\n";
      continue;
    }
    for (std::size_t i = 0; i < q.size(); ++i) out << (i ? " " : "") << q[i];
    out << '\n';
  }
}

inline void save_family(const std::string& path, const IndicatorFamily& family, const std::string& comment = {}) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write family file " + path);
  write_family(out, family, comment);
}

inline KGraph parse_kgraph(std::istream& in, const std::string& source = "<kgraph>") {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw Error(source + ": expected a 'k v' line");
  const auto head = detail::tokens(lines[0].second);
  const auto at0 = detail::where(source, lines[0].first);
  if (head.size() != 2) throw Error(at0 + "expected 'k v'");
  const auto k = detail::parse_index(head[0], at0);
  const auto v = detail::parse_index(head[1], at0);
  std::vector<KEdge> edges;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto at = detail::where(source, lines[l].first);
    KEdge e;
    for (const auto& t : detail::tokens(lines[l].second)) e.push_back(static_cast<Vertex>(detail::parse_index(t, at)));
    if (e.size() != k) throw Error(at + "edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(k));
    edges.push_back(std::move(e));
  }
  try {
    return KGraph(static_cast<unsigned>(k), static_cast<unsigned>(v), std::move(edges));
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
}

inline KGraph read_kgraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open k-graph file " + path);
  return parse_kgraph(in, path);
}

inline void write_kgraph(std::ostream& out, const KGraph& g) {
  out << g.k() << ' ' << g.v() << '\n';
  for (const auto& e : g.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << '\n';
  }
}

}  // namespace tailkit
