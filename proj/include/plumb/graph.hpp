#pragma once

#include "plumb/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plumb {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Weighted forest describing a plumbing of disk bundles over spheres.
///
/// Vertices are 0..n-1 in declaration order; that order is used for every
/// vector, matrix and tie-break downstream. Edges are stored with the smaller
/// endpoint first, in declaration order.
class PlumbingGraph {
public:
  PlumbingGraph() = default;

  /// Throws InputError on out-of-range endpoints, self-loops, repeated edges
  /// or cycles.
  PlumbingGraph(std::vector<int> weights, std::vector<Edge> edges)
      : weights_(std::move(weights)), adjacency_(weights_.size()) {
    const int n = size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n)
        throw InputError("edge " + std::to_string(a) + "-" +
                         std::to_string(b) + " references an unknown vertex");
      if (a == b)
        throw InputError("self-loop at vertex " + std::to_string(a) +
                         ": not a forest");
      Edge e{std::min(a, b), std::max(a, b)};
      if (std::find(edges_.begin(), edges_.end(), e) != edges_.end())
        throw InputError("repeated edge " + std::to_string(e.first) + "-" +
                         std::to_string(e.second) + ": not a forest");
      int ra = find(a), rb = find(b);
      if (ra == rb)
        throw InputError("edge " + std::to_string(e.first) + "-" +
                         std::to_string(e.second) +
                         " closes a cycle: not a forest");
      parent[ra] = rb;
      edges_.push_back(e);
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto &nbrs : adjacency_)
      std::sort(nbrs.begin(), nbrs.end());
  }

  int size() const noexcept { return static_cast<int>(weights_.size()); }
  bool empty() const noexcept { return weights_.empty(); }

  int weight(Vertex v) const { return weights_.at(v); }
  const std::vector<int> &weights() const noexcept { return weights_; }
  const std::vector<Edge> &edges() const noexcept { return edges_; }
  const std::vector<Vertex> &neighbors(Vertex v) const {
    return adjacency_.at(v);
  }
  int degree(Vertex v) const {
    return static_cast<int>(adjacency_.at(v).size());
  }
  bool adjacent(Vertex a, Vertex b) const {
    const auto &nb = adjacency_.at(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  /// m(v) > -d(v)
  bool is_bad(Vertex v) const { return weight(v) > -degree(v); }

  std::vector<Vertex> bad_vertices() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < size(); ++v)
      if (is_bad(v))
        out.push_back(v);
    return out;
  }

  /// Induced subgraph on `keep` (given in increasing order); vertices are
  /// renumbered in that order.
  PlumbingGraph induced(const std::vector<Vertex> &keep) const {
    std::vector<int> index(size(), -1);
    std::vector<int> w;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      index[keep[i]] = static_cast<int>(i);
      w.push_back(weight(keep[i]));
    }
    std::vector<Edge> e;
    for (auto [a, b] : edges_)
      if (index[a] >= 0 && index[b] >= 0)
        e.emplace_back(index[a], index[b]);
    return PlumbingGraph(std::move(w), std::move(e));
  }

  /// Compact text form with edges sorted; used for hashing and printing.
  std::string canonical_text() const {
    std::ostringstream out;
    out << size() << ";";
    for (int w : weights_)
      out << " " << w;
    out << ";";
    auto sorted = edges_;
    std::sort(sorted.begin(), sorted.end());
    for (auto [a, b] : sorted)
      out << " " << a << "-" << b;
    return out.str();
  }

  /// 64-bit FNV-1a of canonical_text(), as 16 hex digits.
  std::string hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_text()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }

  friend bool operator==(const PlumbingGraph &a, const PlumbingGraph &b) {
    return a.canonical_text() == b.canonical_text();
  }

private:
  std::vector<int> weights_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

// ---------------------------------------------------------------------------
// Constructors for common shapes

/// Chain w0 - w1 - ... in the given order.
inline PlumbingGraph make_path(std::vector<int> weights) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < static_cast<int>(weights.size()); ++i)
    edges.emplace_back(i, i + 1);
  return PlumbingGraph(std::move(weights), std::move(edges));
}

/// Center vertex 0; each leg is a chain attached to the center at its first
/// entry. Vertices are numbered center, then leg by leg outward.
inline PlumbingGraph make_star(int center,
                               const std::vector<std::vector<int>> &legs) {
  std::vector<int> weights{center};
  std::vector<Edge> edges;
  for (const auto &leg : legs) {
    int prev = 0;
    for (int w : leg) {
      int id = static_cast<int>(weights.size());
      weights.push_back(w);
      edges.emplace_back(prev, id);
      prev = id;
    }
  }
  return PlumbingGraph(std::move(weights), std::move(edges));
}

/// Negative continued fraction p/q = a1 - 1/(a2 - 1/(...)), all a_j >= 2.
/// Requires p > q >= 1 and gcd(p, q) = 1.
inline std::vector<int> negative_continued_fraction(long p, long q) {
  if (q < 1 || p <= q)
    throw InputError("Seifert invariant " + std::to_string(p) + "/" +
                     std::to_string(q) + " must satisfy p > q >= 1");
  if (std::gcd(p, q) != 1)
    throw InputError("Seifert invariant " + std::to_string(p) + "/" +
                     std::to_string(q) + " is not in lowest terms");
  std::vector<int> out;
  while (q != 0) {
    long a = (p + q - 1) / q;
    out.push_back(static_cast<int>(a));
    long r = a * q - p;
    p = q;
    q = r;
  }
  return out;
}

struct SeifertLeg {
  long p;
  long q;
};

/// Star-shaped plumbing for the Seifert invariants (e0; p_i/q_i): center e0,
/// leg i carries -a_1, ..., -a_s from the expansion of p_i/q_i.
inline PlumbingGraph seifert_to_star(int e0, const std::vector<SeifertLeg> &legs) {
  std::vector<std::vector<int>> expanded;
  for (const auto &leg : legs) {
    auto cf = negative_continued_fraction(leg.p, leg.q);
    for (int &a : cf)
      a = -a;
    expanded.push_back(std::move(cf));
  }
  return make_star(e0, expanded);
}

/// G'(v): new -1 vertex attached to v only, and G_{+1}(v): weight at v
/// raised by one. The two graphs have diffeomorphic boundaries.
inline std::pair<PlumbingGraph, PlumbingGraph>
blow_down_pair(const PlumbingGraph &g, Vertex v) {
  if (v < 0 || v >= g.size())
    throw InputError("vertex " + std::to_string(v) + " out of range");
  auto w = g.weights();
  auto edges = g.edges();
  w.push_back(-1);
  edges.emplace_back(v, g.size());
  PlumbingGraph gprime(w, edges);

  auto wplus = g.weights();
  wplus[v] += 1;
  PlumbingGraph gplus(std::move(wplus), g.edges());
  return {std::move(gprime), std::move(gplus)};
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> split_ws(std::string_view s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    if (i > start)
      out.push_back({std::string(s.substr(start, i - start)), base + start});
  }
  return out;
}

inline long parse_int(const Token &t) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t.text, &used);
  } catch (const std::exception &) {
    throw ParseError("expected an integer, got '" + t.text + "'", t.pos);
  }
  if (used != t.text.size())
    throw ParseError("expected an integer, got '" + t.text + "'", t.pos);
  return v;
}

inline std::string strip_comments(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    out += line;
    out += '\n';
  }
  return out;
}

inline PlumbingGraph parse_compact(std::string_view text) {
  std::vector<std::pair<std::string_view, std::size_t>> sections;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      sections.emplace_back(text.substr(start, i - start), start);
      start = i + 1;
    }
  }
  // A trailing ';' leaves an empty fourth section.
  if (sections.size() == 4 && split_ws(sections[3].first, 0).empty())
    sections.pop_back();
  if (sections.size() != 3)
    throw ParseError("expected three ';'-separated sections, found " +
                         std::to_string(sections.size()),
                     text.size());

  auto count_tokens = split_ws(sections[0].first, sections[0].second);
  if (count_tokens.size() != 1)
    throw ParseError("expected a single vertex count", sections[0].second);
  long n = parse_int(count_tokens[0]);
  if (n < 0)
    throw ParseError("negative vertex count", count_tokens[0].pos);

  auto weight_tokens = split_ws(sections[1].first, sections[1].second);
  if (static_cast<long>(weight_tokens.size()) != n)
    throw ParseError("expected " + std::to_string(n) + " weights, found " +
                         std::to_string(weight_tokens.size()),
                     sections[1].second);
  std::vector<int> weights;
  for (const auto &t : weight_tokens)
    weights.push_back(static_cast<int>(parse_int(t)));

  std::vector<Edge> edges;
  for (const auto &t : split_ws(sections[2].first, sections[2].second)) {
    auto dash = t.text.find('-', 1);
    if (dash == std::string::npos || dash == 0 || dash + 1 == t.text.size())
      throw ParseError("expected an edge 'i-j', got '" + t.text + "'", t.pos);
    Token a{t.text.substr(0, dash), t.pos};
    Token b{t.text.substr(dash + 1), t.pos + dash + 1};
    edges.emplace_back(static_cast<int>(parse_int(a)),
                       static_cast<int>(parse_int(b)));
  }
  return PlumbingGraph(std::move(weights), std::move(edges));
}

inline PlumbingGraph parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  try {
    const auto &verts = doc.at("vertices");
    const std::size_t n = verts.size();
    std::vector<std::optional<int>> weights(n);
    for (const auto &vert : verts) {
      long id = vert.at("id").get<long>();
      if (id < 0 || id >= static_cast<long>(n))
        throw InputError("vertex id " + std::to_string(id) +
                         " outside 0.." + std::to_string(n - 1));
      if (weights[id])
        throw InputError("duplicate vertex id " + std::to_string(id));
      weights[id] = vert.at("weight").get<int>();
    }
    std::vector<int> w;
    for (auto &x : weights)
      w.push_back(*x);
    std::vector<Edge> edges;
    if (doc.contains("edges"))
      for (const auto &e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2)
          throw InputError("edge must be a two-element array");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    return PlumbingGraph(std::move(w), std::move(edges));
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed graph JSON: ") + e.what());
  }
}

inline PlumbingGraph parse_seifert(std::string_view text) {
  auto tokens = split_ws(text, 0);
  if (tokens.size() < 2 || tokens[0].text != "seifert")
    throw ParseError("expected 'seifert <e0> <p>/<q> ...'", 0);
  int e0 = static_cast<int>(parse_int(tokens[1]));
  std::vector<SeifertLeg> legs;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    const auto &t = tokens[i];
    auto slash = t.text.find('/');
    if (slash == std::string::npos)
      throw ParseError("expected 'p/q', got '" + t.text + "'", t.pos);
    long p = parse_int({t.text.substr(0, slash), t.pos});
    long q = parse_int({t.text.substr(slash + 1), t.pos + slash + 1});
    legs.push_back({p, q});
  }
  return seifert_to_star(e0, legs);
}

} // namespace detail

/// Accepts the compact form `n; w0 ... ; i-j ...`, the JSON form, or
/// `seifert e0 p1/q1 ...`. Lines may carry '#' comments (not in JSON).
inline PlumbingGraph parse_graph(std::string_view text) {
  std::size_t first = 0;
  while (first < text.size() &&
         std::isspace(static_cast<unsigned char>(text[first])))
    ++first;
  if (first < text.size() && text[first] == '{')
    return detail::parse_json(text);
  std::string clean = detail::strip_comments(text);
  auto tokens = detail::split_ws(clean, 0);
  if (!tokens.empty() && tokens[0].text == "seifert")
    return detail::parse_seifert(clean);
  return detail::parse_compact(clean);
}

inline nlohmann::json to_json(const PlumbingGraph &g) {
  nlohmann::json verts = nlohmann::json::array();
  for (int v = 0; v < g.size(); ++v)
    verts.push_back({{"id", v}, {"weight", g.weight(v)}});
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : g.edges())
    edges.push_back({a, b});
  return {{"vertices", verts}, {"edges", edges}};
}

} // namespace plumb
