#pragma once

#include "plumb/module.hpp"

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace plumb {

enum class CheckStatus { Pass, Fail, Skip };

inline std::string to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::Pass:
    return "PASS";
  case CheckStatus::Fail:
    return "FAIL";
  case CheckStatus::Skip:
    return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct PolicySweep {
  std::size_t starts = 0;
  std::size_t runs = 0;
  std::size_t disagreements = 0;
  std::size_t invariant_violations = 0;
  std::optional<CharVector> first_failure;

  bool ok() const { return disagreements == 0 && invariant_violations == 0; }
};

/// Runs every initial-box vector under the lowest-index policy and under
/// `seeds` seeded random policies; all must agree on Good/Bad and on the
/// Good terminal. Along each deterministic path K^2 must stay constant, a
/// Good terminal must lie in the terminal box and a Bad witness must exceed
/// -m(v).
inline PolicySweep policy_independence(const IntersectionForm &q, int seeds,
                                       std::uint64_t base_seed = 0) {
  PolicySweep out;
  for (const CharVector &k : enumerate_initial_box(q)) {
    ++out.starts;
    auto ref = run_full_path(q, k, PathPolicy::deterministic(), true);
    bool sound = true;
    Grade sq = square(q, k);
    for (const auto &step : ref.steps)
      if (square(q, step.after) != sq)
        sound = false;
    if (ref.is_good()) {
      sound = sound && in_terminal_box(q, ref.final_vector());
    } else {
      const auto &bad = std::get<BadTerminal>(ref.terminal);
      sound = sound && bad.last[bad.witness] > -q(bad.witness, bad.witness);
    }
    if (!sound) {
      ++out.invariant_violations;
      if (!out.first_failure)
        out.first_failure = k;
    }
    for (int s = 0; s < seeds; ++s) {
      ++out.runs;
      auto r = run_full_path(q, k, PathPolicy::seeded(base_seed + s));
      bool same = r.is_good() == ref.is_good() &&
                  (!r.is_good() || r.final_vector() == ref.final_vector());
      if (!same) {
        ++out.disagreements;
        if (!out.first_failure)
          out.first_failure = k;
      }
    }
  }
  return out;
}

/// Grade census of the Good initial-box vectors of one class.
inline std::map<Grade, int> fullpath_census(const IntersectionForm &q,
                                            const SpinCClass &t) {
  std::map<Grade, int> out;
  for (const auto &g : ker_u_generators(q, t))
    ++out[g.grade];
  return out;
}

/// Ker U computed by the dual model against the full-path census.
inline bool census_agrees(const IntersectionForm &q, const SpinCClass &t,
                          std::size_t state_cap = 10'000'000) {
  ClassTable table(q, t, {0, 1, state_cap});
  return table.ker_u_pow_ranks(0) == fullpath_census(q, t);
}

/// For a Good K with terminal L, -L is again a Good initial-box vector.
/// Checks that K -> -L(K) permutes the Good set.
inline bool conjugation_symmetric(const IntersectionForm &q) {
  auto gens = ker_u_generators(q);
  std::set<CharVector> good, image;
  for (const auto &g : gens) {
    good.insert(g.k);
    image.insert(-g.terminal);
  }
  return good == image;
}

/// Tower bottom and finite bottoms of one module in a single class mod 2.
inline bool parity_consistent(const GradedModule &m) {
  for (const auto &s : m.finite)
    for (int j = 0; j < s.u_length; ++j)
      if (!same_parity_class(s.bottom + Grade(2 * j), m.tower_bottom))
        return false;
  return true;
}

struct VerifyConfig {
  int seeds = 100;
  std::uint64_t base_seed = 0;
  AssembleConfig assemble;
  bool blowdown = true;
};

/// The self-checks behind `plumb verify`.
inline std::vector<CheckResult> run_verification(const Plumbing &p,
                                                 const VerifyConfig &config = {}) {
  p.require_negative_definite();
  std::vector<CheckResult> out;
  const auto &q = p.form;
  const auto classes = enumerate_spinc(q);

  {
    auto sweep = policy_independence(q, config.seeds, config.base_seed);
    std::ostringstream d;
    d << sweep.starts << " starts, " << sweep.runs << " seeded runs, "
      << sweep.disagreements << " disagreements, "
      << sweep.invariant_violations << " invariant violations";
    if (sweep.first_failure)
      d << "; first at " << to_string(*sweep.first_failure);
    out.push_back({"policy independence",
                   sweep.ok() ? CheckStatus::Pass : CheckStatus::Fail, d.str()});
  }

  if (strongly_no_bad(p.graph)) {
    auto c = short_vector_count(p.graph);
    auto h1 = p.report.h1_order.value_or(0);
    std::ostringstream d;
    d << "direct " << c.direct << ", recurrence " << c.recurrence
      << ", |det Q| " << h1;
    bool ok = c.direct == c.recurrence && c.direct == h1;
    out.push_back({"short-vector count",
                   ok ? CheckStatus::Pass : CheckStatus::Fail, d.str()});
  } else {
    out.push_back({"short-vector count", CheckStatus::Skip,
                   "needs m(v) < -d(v) at every vertex"});
  }

  {
    int bad = 0;
    for (const auto &t : classes)
      if (!census_agrees(q, t, config.assemble.state_cap))
        ++bad;
    out.push_back({"dual-model census",
                   bad == 0 ? CheckStatus::Pass : CheckStatus::Fail,
                   std::to_string(classes.size() - bad) + "/" +
                       std::to_string(classes.size()) +
                       " Spin^c classes match the full-path census"});
  }

  out.push_back({"conjugation symmetry",
                 conjugation_symmetric(q) ? CheckStatus::Pass : CheckStatus::Fail,
                 "K -> -L(K) on Good vectors"});

  auto modules = assemble_all(p, config.assemble);

  {
    int stable = 0;
    for (const auto &m : modules) {
      auto mc = check_margin_stability(q, m.spinc, m.level_budget, 1,
                                       config.assemble.state_cap);
      if (mc.stable && mc.sound)
        ++stable;
    }
    out.push_back({"margin stability",
                   stable == static_cast<int>(modules.size())
                       ? CheckStatus::Pass
                       : CheckStatus::Fail,
                   std::to_string(stable) + "/" +
                       std::to_string(modules.size()) +
                       " classes equal at margins 1 and 2"});
  }

  if (p.report.validity_regime == ValidityRegime::Exact) {
    int ok = 0;
    for (const auto &m : modules)
      ok += parity_consistent(m);
    out.push_back({"parity", ok == static_cast<int>(modules.size())
                                 ? CheckStatus::Pass
                                 : CheckStatus::Fail,
                   std::to_string(ok) + "/" + std::to_string(modules.size()) +
                       " classes supported in one degree mod 2"});
  } else {
    out.push_back({"parity", CheckStatus::Skip,
                   "only claimed with at most one bad vertex"});
  }

  if (p.report.bad_vertices.size() <= 2) {
    int ok = 0;
    for (const auto &m : modules)
      ok += (m.tower_bottom == -m.d_Y);
    out.push_back({"d-invariant", ok == static_cast<int>(modules.size())
                                      ? CheckStatus::Pass
                                      : CheckStatus::Fail,
                   std::to_string(ok) + "/" + std::to_string(modules.size()) +
                       " classes with tower bottom = -d(Y)"});
  } else {
    out.push_back({"d-invariant", CheckStatus::Skip,
                   "max-square formula needs at most two bad vertices"});
  }

  if (p.report.bad_vertices.empty()) {
    int red = 0;
    std::int64_t hat = 0;
    for (const auto &m : modules) {
      red += m.reduced_rank();
      hat += 1 + 2 * m.summand_count();
    }
    bool ok = red == 0 && hat == p.report.h1_order.value_or(0);
    out.push_back({"no bad vertices", ok ? CheckStatus::Pass : CheckStatus::Fail,
                   "HF_red rank " + std::to_string(red) + ", HF-hat rank " +
                       std::to_string(hat)});
  }

  if (config.blowdown) {
    for (Vertex v = 0; v < p.graph.size(); ++v) {
      auto r = verify_blowdown(p.graph, v, config.assemble);
      CheckStatus s = !r.applicable ? CheckStatus::Skip
                      : r.passed    ? CheckStatus::Pass
                                    : CheckStatus::Fail;
      out.push_back({"blow-down at v" + std::to_string(v), s, r.detail});
    }
  }
  return out;
}

inline bool all_passed(const std::vector<CheckResult> &results) {
  for (const auto &r : results)
    if (r.status == CheckStatus::Fail)
      return false;
  return true;
}

} // namespace plumb
