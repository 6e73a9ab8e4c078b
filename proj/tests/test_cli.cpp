#include "plumb/cli.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace plumb;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "plumb");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string &name) {
  return std::string(PLUMB_DATA_DIR) + "/" + name;
}

bool contains(const std::string &hay, const std::string &needle) {
  return hay.find(needle) != std::string::npos;
}

} // namespace

TEST(Cli, HfE8) {
  auto r = run({"hf", data("e8.graph")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "Spin^c #0: T+[-2]\n")) << r.out;
}

TEST(Cli, HfSigma357) {
  auto r = run({"hf", data("sigma357.graph")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "Spin^c #0: T+[-2] + Z[-2] + Z[0]^2")) << r.out;
  EXPECT_TRUE(contains(r.out, "HF_red rank: 3"));
}

TEST(Cli, DinvSigma237) {
  auto r = run({"dinv", data("sigma237.graph")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "d(Y) = 0, d(-Y) = 0\n");
  EXPECT_EQ(run({"dinv", data("sigma237.graph"), "--exhaustive"}).out, r.out);
}

TEST(Cli, HfY12Json) {
  auto r = run({"hf", data("y12.graph"), "--spinc-vector", "0,0,0,1,1",
                "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["regime"], "exact");
  ASSERT_EQ(j["spinc"].size(), 1u);
  const auto &s = j["spinc"][0];
  EXPECT_EQ(s["tower_bottom"], "-3/4");
  EXPECT_EQ(s["d_Y"], "3/4");
  ASSERT_EQ(s["finite"].size(), 1u);
  EXPECT_EQ(s["finite"][0]["bottom"], "-3/4");
  EXPECT_EQ(s["finite"][0]["u_length"], 1);
  EXPECT_EQ(s["finite"][0]["mult"], 1);
  EXPECT_EQ(j["hf_red_total_rank"], 1);
  EXPECT_EQ(j["graph_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, JsonIsByteStable) {
  std::vector<std::string> args{"hf", data("y12.graph"), "--format", "json"};
  EXPECT_EQ(run(args).out, run(args).out);
  std::vector<std::string> c{"classes", data("sigma357.graph"), "--spinc", "0",
                             "--max-level", "2", "--format", "json"};
  EXPECT_EQ(run(c).out, run(c).out);
}

TEST(Cli, Classes) {
  auto r = run({"classes", data("sigma357.graph"), "--spinc", "0",
                "--max-level", "2", "--margin", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  const auto &recs = j["spinc"][0]["classes"];
  int killed0 = 0;
  for (const auto &c : recs) {
    EXPECT_TRUE(c.contains("degree"));
    EXPECT_TRUE(c.contains("representative"));
    if (c["kill_level"] == 0)
      ++killed0;
  }
  EXPECT_EQ(killed0, 4);
}

TEST(Cli, PathTranscript) {
  auto r = run({"path", data("e8.graph"), "--start", "2,0,0,0,0,0,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "(-2, 2, 2, 0, 2, 0, 0, 0)"));
  EXPECT_TRUE(contains(r.out, "(-2, 0, 0, 2, 4, 0, 0, 0)"));
  EXPECT_TRUE(contains(r.out, "Bad"));
  auto g = run({"path", data("sigma237.graph"), "--start", "(1, 0, -1, -5)"});
  EXPECT_TRUE(contains(g.out, "Good: terminal (-1, 0, 1, 3)")) << g.out;
}

TEST(Cli, InfoAndSpinc) {
  auto r = run({"info", data("y12.graph")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "initial box: 72"));
  EXPECT_TRUE(contains(r.out, "|H_1|: 12"));
  auto j = nlohmann::json::parse(run({"info", data("double_trefoil_m1.json"),
                                      "--format", "json"})
                                     .out);
  EXPECT_EQ(j["regime"], "even-part-only");
  auto s = run({"spinc", data("y12.graph")});
  EXPECT_TRUE(contains(s.out, "12 Spin^c structures"));
  EXPECT_TRUE(contains(s.out, "Spin^c #11"));
}

TEST(Cli, InlineGraphAndSeifert) {
  auto r = run({"seifert", "-1", "2/1", "3/1", "7/1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "4; -1 -2 -3 -7; 0-1 0-2 0-3\n");
  auto h = run({"hf", "4; -1 -2 -3 -7; 0-1 0-2 0-3"});
  EXPECT_TRUE(contains(h.out, "Spin^c #0: T+[0] + Z[0]"));
}

TEST(Cli, Verify) {
  auto r = run({"verify", data("y12.graph"), "--seeds", "5"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "PASS  policy independence"));
  EXPECT_FALSE(contains(r.out, "FAIL"));
}

TEST(Cli, OutsideTheoremsBanner) {
  auto r = run({"hf", "7; -9 -1 -1 -1 -2 -2 -2; 0-1 0-2 0-3 1-4 2-5 3-6"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "no Floer identification claimed"));
  EXPECT_EQ(run({"dinv", "7; -9 -1 -1 -1 -2 -2 -2; 0-1 0-2 0-3 1-4 2-5 3-6"}).code, 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"hf", "2; -1 -1; 0-1"}).code, 1);
  EXPECT_EQ(run({"hf", "3; -2 -2; 0-1"}).code, 3);
  EXPECT_EQ(run({"hf", "3; -2 -2 -2; 0-1 1-2 2-0"}).code, 3);
  EXPECT_EQ(run({"path", data("e8.graph"), "--start", "1,0,0,0,0,0,0,0"}).code, 3);
  EXPECT_EQ(run({"hf", data("y12.graph"), "--spinc", "12"}).code, 3);
  EXPECT_EQ(run({"bogus"}).code, 3);
  EXPECT_EQ(run({"hf", data("sigma357.graph"), "--state-cap", "100"}).code, 2);
  EXPECT_EQ(run({"hf", data("sigma357.graph"), "--max-level", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, StateCapFromEnvironment) {
  ::setenv("PLUMB_STATE_CAP", "100", 1);
  int capped = run({"hf", data("sigma357.graph")}).code;
  ::setenv("PLUMB_STATE_CAP", "junk", 1);
  int junk = run({"hf", data("e8.graph")}).code;
  ::unsetenv("PLUMB_STATE_CAP");
  EXPECT_EQ(capped, 2);
  EXPECT_EQ(junk, 3);
}
