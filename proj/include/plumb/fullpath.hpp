#pragma once

#include "plumb/lattice.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace plumb {

/// Which vertex to push when several satisfy <K,v> = -m(v).
class PathPolicy {
public:
  /// Lowest vertex index.
  static PathPolicy deterministic() { return PathPolicy(); }

  /// Uniform choice driven by a seeded generator; reproducible per seed.
  static PathPolicy seeded(std::uint64_t seed) {
    PathPolicy p;
    p.rng_.emplace(seed);
    return p;
  }

  bool is_random() const noexcept { return rng_.has_value(); }

  Vertex choose(std::span<const Vertex> candidates) {
    if (!rng_ || candidates.size() == 1)
      return candidates.front();
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(*rng_)];
  }

private:
  std::optional<std::mt19937_64> rng_;
};

struct PathStep {
  Vertex vertex;
  CharVector after;
};

/// m(v) <= <L,v> <= -m(v) - 2 everywhere.
struct GoodTerminal {
  CharVector terminal;
};

/// Some vertex has <K_n, witness> > -m(witness).
struct BadTerminal {
  CharVector last;
  Vertex witness;
};

struct PathResult {
  CharVector start;
  std::vector<PathStep> steps; ///< empty unless a transcript was requested
  std::size_t step_count = 0;
  std::variant<GoodTerminal, BadTerminal> terminal;

  bool is_good() const { return std::holds_alternative<GoodTerminal>(terminal); }
  const CharVector &final_vector() const {
    if (auto *g = std::get_if<GoodTerminal>(&terminal))
      return g->terminal;
    return std::get<BadTerminal>(terminal).last;
  }
};

/// m(v) + 2 <= k_v <= -m(v)
inline bool in_initial_box(const IntersectionForm &q, const CharVector &k) {
  for (int i = 0; i < q.size(); ++i) {
    auto m = q(i, i);
    if (k[i] < m + 2 || k[i] > -m)
      return false;
  }
  return true;
}

/// m(v) <= k_v <= -m(v) - 2
inline bool in_terminal_box(const IntersectionForm &q, const CharVector &k) {
  for (int i = 0; i < q.size(); ++i) {
    auto m = q(i, i);
    if (k[i] < m || k[i] > -m - 2)
      return false;
  }
  return true;
}

/// One step of a full path: pick a vertex with <K,v> = -m(v) and return it
/// with K + 2PD[v], or nothing if no vertex qualifies.
inline std::optional<PathStep> path_step(const IntersectionForm &q,
                                         const CharVector &k,
                                         PathPolicy &policy) {
  std::vector<Vertex> candidates;
  for (int v = 0; v < q.size(); ++v)
    if (k[v] == -q(v, v))
      candidates.push_back(v);
  if (candidates.empty())
    return std::nullopt;
  Vertex v = policy.choose(candidates);
  return PathStep{v, add_2pd(q, k, v, +1)};
}

/// Runs the full-path algorithm from k0 until the vector lands in the
/// terminal box (Good) or leaves |<K,v>| <= -m(v) (Bad). Bad is declared as
/// soon as any coordinate exceeds -m(v).
inline PathResult run_full_path(const IntersectionForm &q, const CharVector &k0,
                                PathPolicy policy, bool record = false) {
  require_characteristic(q, k0);
  if (!in_initial_box(q, k0))
    throw InputError("start vector " + to_string(k0) +
                     " is outside m(v)+2 <= <K,v> <= -m(v)");
  PathResult result{k0, {}, 0, GoodTerminal{k0}};
  CharVector k = k0;
  // Members of a full path are pairwise distinct and lie in the box
  // |k_v| <= -m(v), so the walk is finite; this cap only guards bugs.
  const std::size_t cap = 100'000'000;
  for (;;) {
    auto step = path_step(q, k, policy);
    if (!step) {
      result.terminal = GoodTerminal{k};
      return result;
    }
    k = step->after;
    ++result.step_count;
    if (record)
      result.steps.push_back(*step);
    for (int v = 0; v < q.size(); ++v)
      if (k[v] > -q(v, v)) {
        result.terminal = BadTerminal{k, v};
        return result;
      }
    if (result.step_count > cap)
      throw ResourceError("full path exceeded " + std::to_string(cap) +
                          " steps");
  }
}

struct KerUGenerator {
  CharVector k;
  Grade grade;         ///< -(K^2 + |G|) / 4
  CharVector terminal; ///< end point L of its full path
  int spinc_index = 0;
};

/// Initial-box vectors (optionally restricted to one Spin^c class) whose full
/// path ends Good, in lexicographic order. Each is the unique box
/// representative of a class of the dual model with no positive-level member,
/// so these dualize a basis of Ker U.
inline std::vector<KerUGenerator>
ker_u_generators(const IntersectionForm &q,
                 const std::optional<SpinCClass> &t = std::nullopt) {
  q.require_negative_definite();
  SpinCLattice lattice(q);
  std::vector<KerUGenerator> out;
  for (const CharVector &k : enumerate_initial_box(q)) {
    int idx = 0;
    if (q.size() > 0)
      idx = static_cast<int>(lattice.index_of_residue(lattice.residue(k)));
    if (t && idx != t->index)
      continue;
    auto path = run_full_path(q, k, PathPolicy::deterministic());
    if (!path.is_good())
      continue;
    out.push_back({k, -renormalized_length(q, k), path.final_vector(), idx});
  }
  return out;
}

} // namespace plumb
