#pragma once

#include "plumb/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace plumb::cli {

enum class Format { Text, Json };

struct CliConfig {
  std::string command;
  std::string graph_source;
  std::vector<std::string> seifert_tokens;
  std::optional<int> spinc_index;
  std::optional<std::string> spinc_vector;
  std::optional<int> max_level;
  int margin = 1;
  Format format = Format::Text;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int seeds = 100;
  std::optional<std::size_t> state_cap;
  std::optional<std::string> start;
  bool exhaustive = false;
  bool no_blowdown = false;
};

/// The argument names a readable file, or is itself graph text.
inline PlumbingGraph load_graph(const std::string &source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    if (!in)
      throw InputError("cannot read " + source);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
  }
  return parse_graph(source);
}

inline std::size_t effective_state_cap(const CliConfig &c) {
  if (c.state_cap)
    return *c.state_cap;
  if (const char *env = std::getenv("PLUMB_STATE_CAP")) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(env, &used);
      if (used == std::string(env).size() && v > 0)
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
    }
    throw InputError("PLUMB_STATE_CAP must be a positive integer");
  }
  return 10'000'000;
}

inline AssembleConfig assemble_config(const CliConfig &c) {
  AssembleConfig a;
  a.level_budget = c.max_level;
  a.margin = c.margin;
  a.max_margin = std::max(a.max_margin, c.margin + 1);
  a.state_cap = effective_state_cap(c);
  return a;
}

/// Spin^c classes chosen by --spinc / --spinc-vector, or all of them.
inline std::vector<SpinCClass> selected_classes(const Plumbing &p,
                                                const CliConfig &c) {
  if (p.graph.empty()) {
    if (c.spinc_index.value_or(0) != 0)
      throw InputError("the empty graph has a single Spin^c structure");
    return {SpinCClass{0, {}}};
  }
  SpinCLattice lattice(p.form);
  if (c.spinc_vector) {
    auto k = parse_char_vector(*c.spinc_vector);
    if (static_cast<int>(k.values().size()) != p.graph.size())
      throw InputError("vector has " + std::to_string(k.values().size()) +
                       " entries, graph has " +
                       std::to_string(p.graph.size()) + " vertices");
    require_characteristic(p.form, k);
    return {lattice.classify(k)};
  }
  if (c.spinc_index)
    return {lattice.class_at(*c.spinc_index)};
  return enumerate_spinc(p.form);
}

inline nlohmann::json residue_json(const SpinCClass &t) {
  return nlohmann::json(t.residue);
}

inline nlohmann::json module_json(const GradedModule &m) {
  nlohmann::json finite = nlohmann::json::array();
  for (const auto &s : m.finite)
    finite.push_back({{"bottom", to_string(s.bottom)},
                      {"u_length", s.u_length},
                      {"mult", s.multiplicity}});
  return {{"index", m.spinc.index},
          {"residue", residue_json(m.spinc)},
          {"d_Y", to_string(m.d_Y)},
          {"tower_bottom", to_string(m.tower_bottom)},
          {"finite", finite}};
}

inline int cmd_info(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  const auto &r = p.report;
  std::optional<std::uint64_t> box;
  if (r.is_negative_definite)
    box = enumerate_initial_box(p.form).count();
  if (c.format == Format::Json) {
    nlohmann::json j = {
        {"graph_hash", p.graph.hash()},
        {"vertices", p.graph.size()},
        {"edges", p.graph.edges().size()},
        {"determinant", p.form.determinant()},
        {"negative_definite", r.is_negative_definite},
        {"bad_vertices", r.bad_vertices},
        {"regime", to_string(r.validity_regime)},
        {"graph", to_json(p.graph)}};
    j["h1_order"] = r.h1_order ? nlohmann::json(*r.h1_order) : nlohmann::json();
    j["initial_box_size"] = box ? nlohmann::json(*box) : nlohmann::json();
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "graph " << p.graph.hash() << ": " << p.graph.canonical_text() << "\n";
  out << "vertices: " << p.graph.size() << ", edges: " << p.graph.edges().size()
      << "\n";
  out << "det Q: " << p.form.determinant() << "\n";
  out << "|H_1|: ";
  if (r.h1_order)
    out << *r.h1_order << "\n";
  else
    out << "infinite (degenerate form)\n";
  out << "negative definite: " << (r.is_negative_definite ? "yes" : "no")
      << "\n";
  out << "bad vertices:";
  if (r.bad_vertices.empty())
    out << " none";
  for (Vertex v : r.bad_vertices)
    out << " v" << v;
  out << "\n";
  out << "regime: " << to_string(r.validity_regime) << "\n";
  if (box)
    out << "initial box: " << *box << " characteristic vectors\n";
  return 0;
}

inline int cmd_spinc(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.form.require_nondegenerate();
  auto classes = selected_classes(p, c);
  if (c.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &t : classes)
      arr.push_back({{"index", t.index}, {"residue", residue_json(t)}});
    out << nlohmann::json{{"graph_hash", p.graph.hash()},
                          {"count", std::llabs(p.form.determinant())},
                          {"spinc", arr}}
               .dump(2)
        << "\n";
    return 0;
  }
  if (!c.spinc_vector && !c.spinc_index)
    out << std::llabs(p.form.determinant()) << " Spin^c structures\n";
  for (const auto &t : classes) {
    out << "Spin^c #" << t.index << ": residue (";
    for (std::size_t i = 0; i < t.residue.size(); ++i)
      out << (i ? ", " : "") << t.residue[i];
    out << ")\n";
  }
  return 0;
}

inline int cmd_path(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.require_negative_definite();
  if (!c.start)
    throw InputError("path needs --start \"<k-tuple>\"");
  auto k = parse_char_vector(*c.start);
  if (static_cast<int>(k.values().size()) != p.graph.size())
    throw InputError("start vector has " + std::to_string(k.values().size()) +
                     " entries, graph has " + std::to_string(p.graph.size()) +
                     " vertices");
  auto policy =
      c.seed_given ? PathPolicy::seeded(c.seed) : PathPolicy::deterministic();
  auto r = run_full_path(p.form, k, policy, true);
  if (c.format == Format::Json) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : r.steps)
      steps.push_back({{"vertex", s.vertex}, {"after", s.after.values()}});
    nlohmann::json j = {{"start", r.start.values()},
                        {"steps", steps},
                        {"result", r.is_good() ? "good" : "bad"},
                        {"final", r.final_vector().values()}};
    if (!r.is_good())
      j["witness"] = std::get<BadTerminal>(r.terminal).witness;
    out << j.dump(2) << "\n";
    return 0;
  }
  out << to_string(r.start) << "\n";
  for (const auto &s : r.steps)
    out << "  ~ " << to_string(s.after) << "   [v" << s.vertex << "]\n";
  if (r.is_good()) {
    out << "Good: terminal " << to_string(r.final_vector()) << " after "
        << r.step_count << " steps\n";
  } else {
    const auto &b = std::get<BadTerminal>(r.terminal);
    out << "Bad: <K, v" << b.witness << "> = " << b.last[b.witness] << " > "
        << -p.form(b.witness, b.witness) << " after " << r.step_count
        << " steps\n";
  }
  return 0;
}

inline int cmd_classes(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.require_negative_definite();
  auto classes = selected_classes(p, c);
  auto cfg = assemble_config(c);
  nlohmann::json all = nlohmann::json::array();
  for (const auto &t : classes) {
    int n = c.max_level ? *c.max_level : assemble(p, t, cfg).level_budget;
    ClassTable table(p.form, t, {n, c.margin, cfg.state_cap});
    if (c.format == Format::Json) {
      nlohmann::json recs = nlohmann::json::array();
      for (const auto &r : table.classes()) {
        auto kill = r.kill_level();
        recs.push_back(
            {{"degree", to_string(r.degree)},
             {"kill_level", kill ? nlohmann::json(*kill) : nlohmann::json()},
             {"status", to_string(r.status)},
             {"representative",
              {{"level", r.representative.level},
               {"k", r.representative.k.values()}}},
             {"members", r.members}});
      }
      all.push_back({{"index", t.index},
                     {"max_level", n},
                     {"margin", c.margin},
                     {"sound", table.is_sound()},
                     {"classes", recs}});
      continue;
    }
    out << "Spin^c #" << t.index << " (N = " << n << ", margin " << c.margin
        << ", " << table.explored_states() << " states"
        << (table.is_sound() ? "" : ", truncated classes present") << ")\n";
    for (const auto &r : table.classes()) {
      auto kill = r.kill_level();
      out << "  " << to_string(r.representative) << "  degree "
          << to_string(r.degree) << "  kill "
          << (kill ? std::to_string(*kill) : "> " + std::to_string(n))
          << "  " << to_string(r.status) << "  members " << r.members << "\n";
    }
  }
  if (c.format == Format::Json)
    out << nlohmann::json{{"graph_hash", p.graph.hash()}, {"spinc", all}}.dump(2)
        << "\n";
  return 0;
}

inline int cmd_hf(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.require_negative_definite();
  auto cfg = assemble_config(c);
  std::vector<GradedModule> modules;
  for (const auto &t : selected_classes(p, c))
    modules.push_back(assemble(p, t, cfg));
  int red = 0;
  for (const auto &m : modules)
    red += m.reduced_rank();
  const auto regime = p.report.validity_regime;
  if (c.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &m : modules)
      arr.push_back(module_json(m));
    out << nlohmann::json{{"graph_hash", p.graph.hash()},
                          {"regime", to_string(regime)},
                          {"spinc", arr},
                          {"hf_red_total_rank", red}}
               .dump(2)
        << "\n";
    return 0;
  }
  if (regime == ValidityRegime::OutsideTheorems)
    out << "WARNING: more than two bad vertices; "
        << interpretation(regime) << "\n";
  out << "# regime " << to_string(regime) << ": " << interpretation(regime)
      << "\n";
  for (const auto &m : modules)
    out << "Spin^c #" << m.spinc.index << ": " << describe(m) << "\n";
  out << "HF_red rank: " << red << "\n";
  return 0;
}

inline int cmd_dinv(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.require_negative_definite();
  auto classes = selected_classes(p, c);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &t : classes) {
    auto d = d_invariant(p, t, c.exhaustive);
    if (c.format == Format::Json) {
      arr.push_back({{"index", t.index},
                     {"d_Y", to_string(d.d_Y)},
                     {"d_minusY", to_string(d.d_minusY)}});
      continue;
    }
    if (classes.size() > 1)
      out << "Spin^c #" << t.index << ": ";
    out << "d(Y) = " << to_string(d.d_Y) << ", d(-Y) = " << to_string(d.d_minusY)
        << "\n";
  }
  if (c.format == Format::Json)
    out << nlohmann::json{{"graph_hash", p.graph.hash()}, {"spinc", arr}}.dump(2)
        << "\n";
  return 0;
}

inline int cmd_verify(const CliConfig &c, std::ostream &out) {
  Plumbing p(load_graph(c.graph_source));
  p.require_negative_definite();
  VerifyConfig vc;
  vc.seeds = c.seeds;
  vc.base_seed = c.seed;
  vc.assemble = assemble_config(c);
  vc.blowdown = !c.no_blowdown;
  auto results = run_verification(p, vc);
  bool ok = all_passed(results);
  if (c.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : results)
      arr.push_back(
          {{"check", r.name}, {"status", to_string(r.status)}, {"detail", r.detail}});
    out << nlohmann::json{{"graph_hash", p.graph.hash()},
                          {"checks", arr},
                          {"passed", ok}}
               .dump(2)
        << "\n";
  } else {
    std::size_t width = 0;
    for (const auto &r : results)
      width = std::max(width, r.name.size());
    for (const auto &r : results)
      out << to_string(r.status) << "  " << r.name
          << std::string(width - r.name.size() + 2, ' ') << r.detail << "\n";
  }
  return ok ? 0 : 1;
}

inline int cmd_seifert(const CliConfig &c, std::ostream &out) {
  std::string text = "seifert";
  for (const auto &t : c.seifert_tokens)
    text += " " + t;
  auto g = parse_graph(text);
  if (c.format == Format::Json)
    out << to_json(g).dump(2) << "\n";
  else
    out << g.canonical_text() << "\n";
  return 0;
}

inline int dispatch(const CliConfig &c, std::ostream &out) {
  if (c.command == "info")
    return cmd_info(c, out);
  if (c.command == "spinc")
    return cmd_spinc(c, out);
  if (c.command == "path")
    return cmd_path(c, out);
  if (c.command == "classes")
    return cmd_classes(c, out);
  if (c.command == "hf")
    return cmd_hf(c, out);
  if (c.command == "dinv")
    return cmd_dinv(c, out);
  if (c.command == "verify")
    return cmd_verify(c, out);
  if (c.command == "seifert")
    return cmd_seifert(c, out);
  throw InputError("unknown command '" + c.command + "'");
}

/// Parses argv and runs one command. Exit codes: 0 ok, 1 domain error,
/// 2 resource error, 3 input error.
inline int run(int argc, const char *const *argv, std::ostream &out,
               std::ostream &err) {
  CliConfig c;
  CLI::App app{"Heegaard Floer homology of negative-definite plumbings"};
  app.name("plumb");
  app.require_subcommand(1);

  std::string format = "text";
  auto graph_cmd = [&](const std::string &name, const std::string &help) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("graph", c.graph_source, "graph file or inline graph text")
        ->required();
    sub->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    return sub;
  };
  auto spinc_opts = [&](CLI::App *sub) {
    auto *i = sub->add_option("--spinc", c.spinc_index, "Spin^c class index");
    sub->add_option("--spinc-vector", c.spinc_vector,
                    "characteristic vector selecting the class")
        ->excludes(i);
  };
  auto budget_opts = [&](CLI::App *sub) {
    sub->add_option("--max-level", c.max_level, "level budget N (default: auto)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--margin", c.margin, "exploration margin M")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--state-cap", c.state_cap,
                    "maximum explored states (env PLUMB_STATE_CAP)")
        ->check(CLI::PositiveNumber);
  };

  graph_cmd("info", "forest, definiteness, bad vertices, regime");
  spinc_opts(graph_cmd("spinc", "list Spin^c structures"));
  auto *path = graph_cmd("path", "full-path transcript from a start vector");
  path->add_option("--start", c.start, "start vector, e.g. \"2,0,0,0\"")
      ->required();
  path->add_option("--seed", c.seed, "random tie-breaking with this seed")
      ->each([&](const std::string &) { c.seed_given = true; });
  auto *classes = graph_cmd("classes", "dual-model class records");
  spinc_opts(classes);
  budget_opts(classes);
  auto *hf = graph_cmd("hf", "HF+(-Y(G)) per Spin^c structure");
  spinc_opts(hf);
  budget_opts(hf);
  auto *dinv = graph_cmd("dinv", "d-invariants");
  spinc_opts(dinv);
  dinv->add_flag("--exhaustive", c.exhaustive,
                 "search the whole box |<K,v>| <= -m(v)");
  auto *verify = graph_cmd("verify", "run the self-checks");
  verify->add_option("--seeds", c.seeds, "random policies per start vector")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", c.seed, "base seed");
  verify->add_flag("--no-blowdown", c.no_blowdown, "skip blow-down checks");
  budget_opts(verify);
  auto *seifert = app.add_subcommand(
      "seifert", "star-shaped plumbing for Seifert invariants e0 p1/q1 ...");
  seifert->add_option("invariants", c.seifert_tokens, "e0 p1/q1 p2/q2 ...")
      ->required();
  seifert->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  seifert->positionals_at_end();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.format = format == "json" ? Format::Json : Format::Text;

  try {
    return dispatch(c, out);
  } catch (const InputError &e) {
    err << "plumb: input error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError &e) {
    err << "plumb: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError &e) {
    err << "plumb: resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "plumb: internal error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace plumb::cli
