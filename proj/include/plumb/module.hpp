#pragma once

#include "plumb/dcomb.hpp"
#include "plumb/errors.hpp"
#include "plumb/fullpath.hpp"
#include "plumb/graph.hpp"
#include "plumb/intersection_form.hpp"
#include "plumb/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace plumb {

/// A graph bundled with its intersection form and report.
struct Plumbing {
  PlumbingGraph graph;
  IntersectionForm form;
  GraphReport report;

  explicit Plumbing(PlumbingGraph g)
      : graph(std::move(g)), form(graph), report(analyze(graph)) {}

  void require_negative_definite() const { form.require_negative_definite(); }
};

/// Z[U]/U^u_length with its bottom element in degree `bottom`, repeated
/// `multiplicity` times.
struct FiniteSummand {
  Grade bottom;
  int u_length = 1;
  int multiplicity = 1;

  friend bool operator==(const FiniteSummand &, const FiniteSummand &) = default;
  friend bool operator<(const FiniteSummand &a, const FiniteSummand &b) {
    return std::tie(a.bottom, a.u_length, a.multiplicity) <
           std::tie(b.bottom, b.u_length, b.multiplicity);
  }
};

/// HF+(-Y(G), t) as T+_{tower_bottom} plus finite cyclic summands.
struct GradedModule {
  SpinCClass spinc;
  Grade tower_bottom;
  Grade d_Y; ///< from the maximal-square formula, for cross-checking
  std::vector<FiniteSummand> finite;
  ValidityRegime validity_regime = ValidityRegime::Exact;
  int level_budget = 0; ///< N at which the census stabilized
  int margin = 0;
  Census census;
  std::vector<Grade> leaf_degrees; ///< degrees of the Ker U classes

  /// Rank of HF_red over Z: sum of u_length * multiplicity.
  int reduced_rank() const {
    int r = 0;
    for (const auto &s : finite)
      r += s.u_length * s.multiplicity;
    return r;
  }

  int summand_count() const {
    int c = 0;
    for (const auto &s : finite)
      c += s.multiplicity;
    return c;
  }
};

// ---------------------------------------------------------------------------
// d-invariants

struct DInvariant {
  Grade d_Y;
  Grade d_minusY;
};

/// d(Y(G), t) = max over Char_t of (K^2 + |G|)/4. The maximum is taken over
/// the Good initial-box vectors; `exhaustive` widens it to |<K,v>| <= -m(v).
inline DInvariant d_invariant(const Plumbing &p, const SpinCClass &t,
                              bool exhaustive = false) {
  if (p.report.bad_vertices.size() > 2)
    throw DomainError("the d-invariant formula needs at most two bad vertices; "
                      "this graph has " +
                      std::to_string(p.report.bad_vertices.size()));
  p.require_negative_definite();
  if (p.graph.empty())
    return {Grade(0), Grade(0)};
  std::optional<Grade> best;
  if (exhaustive) {
    SpinCLattice lattice(p.form);
    for (const CharVector &k : enumerate_box(p.form, 0)) {
      if (lattice.index_of_residue(lattice.residue(k)) != t.index)
        continue;
      Grade g = renormalized_length(p.form, k);
      if (!best || g > *best)
        best = g;
    }
  } else {
    for (const auto &gen : ker_u_generators(p.form, t)) {
      Grade g = -gen.grade;
      if (!best || g > *best)
        best = g;
    }
  }
  if (!best)
    throw std::logic_error("no characteristic vector found for Spin^c #" +
                           std::to_string(t.index));
  return {*best, -*best};
}

// ---------------------------------------------------------------------------
// Census -> module

struct CensusDecomposition {
  bool consistent = true;
  bool stabilized = false;
  std::optional<Grade> tower_bottom;
  std::vector<FiniteSummand> finite;
  std::vector<int> survivors; ///< per n: number of summands longer than n
};

/// Reads the cyclic decomposition off the Ker U^{n+1} ranks, n <= N.
///
/// With a(n, d) the number of classes of degree d and kill level exactly n,
/// a(n, b + 2n) counts summands with bottom b and U-length > n. So the
/// number with length exactly l is a(l-1, b+2l-2) - a(l, b+2l). The census
/// is stable once only one summand (the tower) outlives levels N-1 and N.
inline CensusDecomposition decompose_census(const Census &census,
                                            int level_budget) {
  CensusDecomposition out;
  auto rank = [&](int n, const Grade &d) {
    if (n < 0)
      return 0;
    auto it = census.find(n);
    if (it == census.end())
      return 0;
    auto jt = it->second.find(d);
    return jt == it->second.end() ? 0 : jt->second;
  };
  auto fresh = [&](int n, const Grade &d) { return rank(n, d) - rank(n - 1, d); };

  std::map<Grade, bool> degrees;
  for (const auto &[n, slice] : census)
    for (const auto &[d, r] : slice)
      degrees[d] = true;

  for (int n = 0; n <= level_budget; ++n) {
    int total = 0;
    for (const auto &[d, _] : degrees) {
      int f = fresh(n, d);
      if (f < 0)
        out.consistent = false;
      total += f;
    }
    out.survivors.push_back(total);
  }

  for (int len = 1; len <= level_budget; ++len) {
    for (const auto &[d, _] : degrees) {
      // d plays the role of b + 2(len - 1)
      int count = fresh(len - 1, d) - fresh(len, d + Grade(2));
      if (count < 0)
        out.consistent = false;
      else if (count > 0)
        out.finite.push_back({d - Grade(2 * (len - 1)), len, count});
    }
  }
  std::sort(out.finite.begin(), out.finite.end());

  const int n = level_budget;
  out.stabilized = out.consistent && n >= 1 && out.survivors[n - 1] == 1 &&
                   out.survivors[n] == 1;
  if (out.stabilized)
    for (const auto &[d, _] : degrees)
      if (fresh(n, d) == 1)
        out.tower_bottom = d - Grade(2 * n);
  return out;
}

struct AssembleConfig {
  std::optional<int> level_budget; ///< fixed N; automatic when empty
  int max_level_budget = 12;
  int margin = 1;
  int max_margin = 6;
  std::size_t state_cap = 10'000'000;
};

/// Computes HF+(-Y(G), t) from the dual model: grows the level budget until
/// the Ker U^{n+1} census stabilizes, confirming at each budget that the
/// census does not change when the exploration margin grows by one.
inline GradedModule assemble(const Plumbing &p, const SpinCClass &t,
                             const AssembleConfig &config = {}) {
  p.require_negative_definite();
  GradedModule module;
  module.spinc = t;
  module.validity_regime = p.report.validity_regime;
  if (p.graph.empty()) {
    module.tower_bottom = Grade(0);
    module.d_Y = Grade(0);
    module.leaf_degrees = {Grade(0)};
    return module;
  }

  int first = config.level_budget.value_or(1);
  int last = config.level_budget.value_or(config.max_level_budget);
  for (int n = first; n <= last; ++n) {
    std::optional<ClassTable> table;
    int margin = config.margin;
    for (; margin <= config.max_margin; ++margin) {
      ClassTable a(p.form, t, {n, margin, config.state_cap});
      ClassTable b(p.form, t, {n, margin + 1, config.state_cap});
      if (a.is_sound() && b.is_sound() && a.census() == b.census()) {
        table.emplace(std::move(a));
        break;
      }
    }
    if (!table)
      throw ResourceError("census for Spin^c #" + std::to_string(t.index) +
                          " did not stabilize in margin up to " +
                          std::to_string(config.max_margin) +
                          " at level budget " + std::to_string(n));
    auto census = table->census();
    auto dec = decompose_census(census, n);
    if (!dec.consistent)
      throw std::logic_error("inconsistent Ker U^n census for Spin^c #" +
                             std::to_string(t.index));
    if (!dec.stabilized)
      continue;
    module.tower_bottom = *dec.tower_bottom;
    module.finite = dec.finite;
    module.level_budget = n;
    module.margin = margin;
    module.census = std::move(census);
    for (const auto &r : table->classes())
      if (r.representative.level == 0 && r.kill_level() == 0)
        module.leaf_degrees.push_back(r.degree);
    std::sort(module.leaf_degrees.begin(), module.leaf_degrees.end());
    if (p.report.bad_vertices.size() <= 2)
      module.d_Y = d_invariant(p, t).d_Y;
    else
      module.d_Y = -module.tower_bottom;
    return module;
  }
  throw ResourceError("Ker U^n census for Spin^c #" + std::to_string(t.index) +
                      " did not stabilize by level budget " +
                      std::to_string(last));
}

/// Modules for every Spin^c structure, by class index.
inline std::vector<GradedModule> assemble_all(const Plumbing &p,
                                              const AssembleConfig &config = {}) {
  p.require_negative_definite();
  std::vector<GradedModule> out;
  if (p.graph.empty()) {
    out.push_back(assemble(p, SpinCClass{0, {}}, config));
    return out;
  }
  for (const auto &t : enumerate_spinc(p.form))
    out.push_back(assemble(p, t, config));
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

struct ShortVectorCount {
  std::int64_t direct = 0;
  std::int64_t recurrence = 0;
};

/// m(v) < -d(v) at every vertex.
inline bool strongly_no_bad(const PlumbingGraph &g) {
  for (Vertex v = 0; v < g.size(); ++v)
    if (!(g.weight(v) < -g.degree(v)))
      return false;
  return true;
}

/// Number of short vectors two ways: Good initial-box vectors over all
/// Spin^c structures, and the leaf recurrence
/// |Short(G)| = -m(v)|Short(G-v)| - |Short(G-v-w)|.
inline ShortVectorCount short_vector_count(const PlumbingGraph &g) {
  if (!strongly_no_bad(g))
    throw DomainError("short-vector count needs m(v) < -d(v) at every vertex");
  if (g.size() > 64)
    throw ResourceError("short-vector recurrence limited to 64 vertices");
  ShortVectorCount out;
  IntersectionForm q(g);
  out.direct = static_cast<std::int64_t>(ker_u_generators(q).size());

  std::map<std::uint64_t, std::int64_t> memo;
  auto rec = [&](auto &self, std::uint64_t mask) -> std::int64_t {
    if (mask == 0)
      return 1;
    if (auto it = memo.find(mask); it != memo.end())
      return it->second;
    int leaf = -1, nbr = -1;
    for (int v = 0; v < g.size() && leaf < 0; ++v) {
      if (!(mask >> v & 1))
        continue;
      int deg = 0, last = -1;
      for (int w : g.neighbors(v))
        if (mask >> w & 1) {
          ++deg;
          last = w;
        }
      if (deg <= 1) {
        leaf = v;
        nbr = last;
      }
    }
    std::uint64_t rest = mask & ~(std::uint64_t{1} << leaf);
    std::int64_t value = -g.weight(leaf) * self(self, rest);
    if (nbr >= 0)
      value -= self(self, rest & ~(std::uint64_t{1} << nbr));
    memo.emplace(mask, value);
    return value;
  };
  std::uint64_t all =
      g.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.size()) - 1;
  out.recurrence = rec(rec, all);
  return out;
}

/// Spin^c-free fingerprint of a list of modules: sorted (tower, finite).
using ModuleSignature =
    std::vector<std::pair<Grade, std::vector<FiniteSummand>>>;

inline ModuleSignature signature(const std::vector<GradedModule> &modules) {
  ModuleSignature sig;
  for (const auto &m : modules)
    sig.emplace_back(m.tower_bottom, m.finite);
  std::sort(sig.begin(), sig.end());
  return sig;
}

inline std::string describe(const GradedModule &m);

struct BlowdownReport {
  Vertex vertex = 0;
  bool applicable = false; ///< G_{+1}(v) negative definite
  bool passed = false;
  std::string detail;
};

/// Compares the modules of G'(v) and G_{+1}(v) over all Spin^c structures.
inline BlowdownReport verify_blowdown(const PlumbingGraph &g, Vertex v,
                                      const AssembleConfig &config = {}) {
  auto [gprime, gplus] = blow_down_pair(g, v);
  Plumbing pp(gprime), pl(gplus);
  BlowdownReport r;
  r.vertex = v;
  if (!pl.form.is_negative_definite() || !pp.form.is_negative_definite()) {
    r.detail = "G_{+1}(v) is not negative definite";
    return r;
  }
  r.applicable = true;
  auto a = assemble_all(pp, config);
  auto b = assemble_all(pl, config);
  r.passed = signature(a) == signature(b);
  std::ostringstream out;
  out << "G'(v): " << a.size() << " Spin^c, G+1(v): " << b.size()
      << " Spin^c";
  if (!r.passed) {
    out << "; G'(v) modules:";
    for (const auto &m : a)
      out << " [" << describe(m) << "]";
    out << "; G+1(v) modules:";
    for (const auto &m : b)
      out << " [" << describe(m) << "]";
  }
  r.detail = out.str();
  return r;
}

// ---------------------------------------------------------------------------
// Summary

inline std::string interpretation(ValidityRegime r) {
  switch (r) {
  case ValidityRegime::Exact:
    return "this is HF+(-Y(G))";
  case ValidityRegime::EvenPartOnly:
    return "this is HF+_ev(-Y(G)), the even-parity part";
  case ValidityRegime::OutsideTheorems:
    return "Comb+(G) only - no Floer identification claimed";
  }
  return "";
}

struct HFSummary {
  std::string graph_hash;
  ValidityRegime regime = ValidityRegime::Exact;
  std::vector<GradedModule> modules;
  int hf_red_total_rank = 0;
  /// rank of HF-hat over a field: sum over Spin^c of 1 + 2 * #summands
  std::int64_t hat_rank = 0;
  std::int64_t h1_order = 1;
  /// With no bad vertices: HF_red = 0 and rank HF-hat = |H_1|.
  std::optional<bool> no_bad_vertex_identity;
};

inline HFSummary hf_summary(const Plumbing &p, const AssembleConfig &config = {}) {
  p.require_negative_definite();
  HFSummary s;
  s.graph_hash = p.graph.hash();
  s.regime = p.report.validity_regime;
  s.h1_order = p.report.h1_order.value_or(0);
  s.modules = assemble_all(p, config);
  for (const auto &m : s.modules) {
    s.hf_red_total_rank += m.reduced_rank();
    s.hat_rank += 1 + 2 * m.summand_count();
  }
  if (p.report.bad_vertices.empty())
    s.no_bad_vertex_identity =
        s.hf_red_total_rank == 0 && s.hat_rank == s.h1_order;
  return s;
}

/// "T+[-2] + Z[-2] + Z[0]^2", "(Z[U]/U^3)[b]" for longer summands.
inline std::string describe(const GradedModule &m) {
  std::string out = "T+[" + to_string(m.tower_bottom) + "]";
  for (const auto &s : m.finite) {
    out += " + ";
    if (s.u_length == 1)
      out += "Z[" + to_string(s.bottom) + "]";
    else
      out += "(Z[U]/U^" + std::to_string(s.u_length) + ")[" +
             to_string(s.bottom) + "]";
    if (s.multiplicity > 1)
      out += "^" + std::to_string(s.multiplicity);
  }
  return out;
}

} // namespace plumb
