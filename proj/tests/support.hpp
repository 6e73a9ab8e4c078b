#pragma once

#include "plumb/plumb.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace plumb::testing {

inline PlumbingGraph load(const std::string &name) {
  std::ifstream in(std::string(PLUMB_DATA_DIR) + "/" + name);
  if (!in)
    throw std::runtime_error("missing data file " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline PlumbingGraph e8() { return load("e8.graph"); }
inline PlumbingGraph sigma237() { return load("sigma237.graph"); }
inline PlumbingGraph sigma357() { return load("sigma357.graph"); }
inline PlumbingGraph y12() { return load("y12.graph"); }
inline PlumbingGraph lens5() { return load("lens5.graph"); }

struct Golden {
  std::string name;
  PlumbingGraph graph;
};

inline std::vector<Golden> goldens() {
  return {{"e8", e8()},
          {"sigma237", sigma237()},
          {"sigma357", sigma357()},
          {"y12", y12()},
          {"lens5", lens5()}};
}

/// Random forest on 1..max_vertices vertices with m(v) < -d(v) everywhere,
/// weights in [-6, -2], and at most `box_cap` initial-box vectors.
inline PlumbingGraph random_no_bad_graph(std::mt19937_64 &rng,
                                         int max_vertices = 8,
                                         std::uint64_t box_cap = 5000) {
  std::uniform_int_distribution<int> size_dist(1, max_vertices);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    int n = size_dist(rng);
    std::vector<Edge> edges;
    std::vector<int> degree(n, 0);
    for (int v = 1; v < n; ++v) {
      if (coin(rng) < 0.15)
        continue;
      int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
      edges.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
    std::vector<int> weights(n);
    bool ok = true;
    std::uint64_t box = 1;
    for (int v = 0; v < n && ok; ++v) {
      int hi = std::min(-2, -degree[v] - 1);
      if (hi < -6) {
        ok = false;
        break;
      }
      weights[v] = std::uniform_int_distribution<int>(-6, hi)(rng);
      box *= static_cast<std::uint64_t>(-weights[v]);
      ok = box <= box_cap;
    }
    if (ok)
      return PlumbingGraph(std::move(weights), std::move(edges));
  }
}

/// Random tree with weights in [lo, -1]; may be indefinite.
inline PlumbingGraph random_tree(std::mt19937_64 &rng, int n, int lo = -6) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v)
    edges.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  std::vector<int> weights(n);
  for (int &w : weights)
    w = std::uniform_int_distribution<int>(lo, -1)(rng);
  return PlumbingGraph(std::move(weights), std::move(edges));
}

} // namespace plumb::testing
