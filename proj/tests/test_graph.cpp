#include "support.hpp"

#include <gtest/gtest.h>

#include <boost/rational.hpp>

using namespace plumb;
using namespace plumb::testing;

TEST(Parse, CompactE8) {
  auto g = parse_graph("8; -2 -2 -2 -2 -2 -2 -2 -2; 0-1 0-2 2-3 0-4 4-5 5-6 6-7");
  EXPECT_EQ(g.size(), 8);
  EXPECT_EQ(g.edges().size(), 7u);
  for (int v = 0; v < 8; ++v)
    EXPECT_EQ(g.weight(v), -2);
  EXPECT_EQ(g.degree(0), 3);
  EXPECT_TRUE(g.adjacent(6, 7));
  EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(Parse, CommentsAndTrailingSeparator) {
  auto g = parse_graph("# lens space\n2; -2 -3;\n0-1 ; # edge\n");
  EXPECT_EQ(g, make_path({-2, -3}));
}

TEST(Parse, EmptyGraph) {
  auto g = parse_graph("0; ;");
  EXPECT_TRUE(g.empty());
}

TEST(Parse, JsonMatchesCompact) {
  auto j = parse_graph(R"({"vertices":[{"id":1,"weight":-3},{"id":0,"weight":-2}],
                           "edges":[[1,0]]})");
  EXPECT_EQ(j, make_path({-2, -3}));
}

TEST(Parse, JsonRoundTrip) {
  auto g = sigma357();
  EXPECT_EQ(parse_graph(to_json(g).dump()), g);
  EXPECT_EQ(parse_graph(g.canonical_text()), g);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_graph("3; -2 -2; 0-1"), ParseError);
  EXPECT_THROW(parse_graph("2; -2 x; 0-1"), ParseError);
  EXPECT_THROW(parse_graph("2; -2 -2; 01"), ParseError);
  EXPECT_THROW(parse_graph("2; -2 -2"), ParseError);
  EXPECT_THROW(parse_graph("2; -2 -2; 0-2"), InputError);
  EXPECT_THROW(parse_graph("2; -2 -2; 0-0"), InputError);
  EXPECT_THROW(parse_graph("2; -2 -2; 0-1 1-0"), InputError);
  EXPECT_THROW(parse_graph(R"({"vertices":[{"id":0,"weight":-2},{"id":0,"weight":-2}],"edges":[]})"),
               InputError);
  EXPECT_THROW(parse_graph(R"({"vertices":[{"id":0,"weight":-2}],"edges":[[0]]})"),
               InputError);
  EXPECT_THROW(parse_graph("{not json"), ParseError);
  EXPECT_THROW(parse_graph("seifert -2 3/3"), InputError);
  EXPECT_THROW(parse_graph("seifert -2 4/2"), InputError);
  EXPECT_THROW(parse_graph("seifert -2 three"), ParseError);
}

TEST(Parse, ParseErrorCarriesOffset) {
  try {
    parse_graph("2; -2 oops; 0-1");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(Forest, CycleRejected) {
  try {
    parse_graph("3; -2 -2 -2; 0-1 1-2 2-0");
    FAIL();
  } catch (const InputError &e) {
    EXPECT_NE(std::string(e.what()).find("not a forest"), std::string::npos);
  }
}

TEST(Forest, DisconnectedAllowed) {
  auto g = parse_graph("3; -2 -3 -5; 0-1");
  EXPECT_EQ(g.degree(2), 0);
}

TEST(Hash, IndependentOfEdgeOrder) {
  auto a = parse_graph("3; -2 -3 -4; 0-1 1-2");
  auto b = parse_graph("3; -2 -3 -4; 2-1 1-0");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  EXPECT_NE(a.hash(), parse_graph("3; -2 -3 -5; 0-1 1-2").hash());
}

TEST(BadVertices, Definition) {
  // m(v) > -d(v)
  EXPECT_EQ(sigma237().bad_vertices(), std::vector<Vertex>{0});
  EXPECT_EQ(e8().bad_vertices(), std::vector<Vertex>{0});
  EXPECT_TRUE(lens5().bad_vertices().empty());
  auto g = parse_graph("4; -3 -2 -2 -2; 0-1 0-2 0-3");
  EXPECT_TRUE(g.bad_vertices().empty());
  auto trefoils = load("double_trefoil_m1.json");
  EXPECT_EQ(trefoils.bad_vertices(), (std::vector<Vertex>{1, 4}));
}

/// a1 - 1/(a2 - 1/(...)) evaluated exactly.
static boost::rational<long> evaluate_ncf(const std::vector<int> &a) {
  boost::rational<long> x = a.back();
  for (int i = static_cast<int>(a.size()) - 2; i >= 0; --i)
    x = boost::rational<long>(a[i]) - 1 / x;
  return x;
}

TEST(Seifert, ContinuedFractionRoundTrip) {
  for (long p = 2; p <= 40; ++p)
    for (long q = 1; q < p; ++q) {
      if (std::gcd(p, q) != 1)
        continue;
      auto cf = negative_continued_fraction(p, q);
      for (int a : cf)
        EXPECT_GE(a, 2);
      EXPECT_EQ(evaluate_ncf(cf), boost::rational<long>(p, q)) << p << "/" << q;
    }
}

TEST(Seifert, KnownExpansions) {
  EXPECT_EQ(negative_continued_fraction(3, 1), std::vector<int>{3});
  EXPECT_EQ(negative_continued_fraction(5, 4), (std::vector<int>{2, 2, 2, 2}));
  EXPECT_EQ(negative_continued_fraction(7, 6), std::vector<int>(6, 2));
  EXPECT_EQ(negative_continued_fraction(7, 3), (std::vector<int>{3, 2, 2}));
}

TEST(Seifert, Sigma357Star) {
  auto g = sigma357();
  EXPECT_EQ(g.size(), 12);
  EXPECT_EQ(g.weight(0), -2);
  EXPECT_EQ(g.weight(1), -3);
  EXPECT_EQ(g.degree(0), 3);
  EXPECT_EQ(g.neighbors(0), (std::vector<Vertex>{1, 2, 6}));
  EXPECT_TRUE(g.adjacent(5, 4));
  EXPECT_TRUE(g.adjacent(10, 11));
}

TEST(Seifert, Sigma237Star) {
  EXPECT_EQ(parse_graph("seifert -1 2/1 3/1 7/1"), sigma237());
}

TEST(BlowDown, Construction) {
  auto [gp, gplus] = blow_down_pair(e8(), 7);
  EXPECT_EQ(gp.size(), 9);
  EXPECT_EQ(gp.weight(8), -1);
  EXPECT_EQ(gp.neighbors(8), std::vector<Vertex>{7});
  EXPECT_EQ(gplus.size(), 8);
  EXPECT_EQ(gplus.weight(7), -1);
  EXPECT_EQ(gplus.edges(), e8().edges());
  EXPECT_THROW(blow_down_pair(e8(), 8), InputError);
}

TEST(Induced, Renumbers) {
  auto g = sigma237().induced({1, 2, 3});
  EXPECT_EQ(g.size(), 3);
  EXPECT_TRUE(g.edges().empty());
  EXPECT_EQ(g.weights(), (std::vector<int>{-2, -3, -7}));
}
