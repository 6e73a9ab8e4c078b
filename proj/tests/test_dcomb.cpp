#include "support.hpp"

#include <gtest/gtest.h>

using namespace plumb;
using namespace plumb::testing;

TEST(Relation, NeighborsPreserveDegreeAndAreSymmetric) {
  std::mt19937_64 rng(23);
  for (const auto &[name, g] : goldens()) {
    IntersectionForm q(g);
    for (int trial = 0; trial < 30; ++trial) {
      LeveledVector x;
      x.level = std::uniform_int_distribution<int>(0, 3)(rng);
      std::vector<int> k(q.size());
      for (int i = 0; i < q.size(); ++i)
        k[i] = static_cast<int>(q(i, i)) +
               2 * std::uniform_int_distribution<int>(-2, 4)(rng);
      x.k = CharVector(k);
      for (const auto &y : relation_neighbors(q, x)) {
        EXPECT_GE(y.level, 0);
        EXPECT_EQ(leveled_degree(q, y), leveled_degree(q, x)) << name;
        auto back = relation_neighbors(q, y);
        EXPECT_NE(std::find(back.begin(), back.end(), x), back.end()) << name;
      }
    }
  }
}

TEST(Relation, ForwardMoveLevel) {
  // U^0 (x) (2, 0, ..., 0) on E8: <K,v0> + m = 0, so adding 2PD[v0] keeps
  // level 0; at <K,v0> = 4 the move gains one level.
  IntersectionForm q(e8());
  auto n = relation_neighbors(q, {0, {2, 0, 0, 0, 0, 0, 0, 0}});
  EXPECT_NE(std::find(n.begin(), n.end(),
                      LeveledVector{0, {-2, 2, 2, 0, 2, 0, 0, 0}}),
            n.end());
  auto m = relation_neighbors(q, {0, {4, 0, 0, 0, 0, 0, 0, 0}});
  EXPECT_NE(std::find(m.begin(), m.end(),
                      LeveledVector{1, {0, 2, 2, 0, 2, 0, 0, 0}}),
            m.end());
}

TEST(ClassTable, E8LevelZero) {
  IntersectionForm q(e8());
  auto t = enumerate_spinc(q).front();
  ClassTable table(q, t, {0, 1});
  EXPECT_EQ(table.leaves(), std::vector<CharVector>{CharVector(std::vector<int>(8, 0))});
  EXPECT_EQ(table.ker_u_pow_ranks(0), (std::map<Grade, int>{{Grade(-2), 1}}));
  EXPECT_TRUE(table.is_sound());
  ASSERT_EQ(table.classes().size(), 1u);
  EXPECT_EQ(table.classes()[0].kill_level(), 0);
}

TEST(ClassTable, E8Tower) {
  IntersectionForm q(e8());
  auto t = enumerate_spinc(q).front();
  ClassTable table(q, t, {3, 1});
  auto c = table.census();
  EXPECT_EQ(c[3], (std::map<Grade, int>{{-2, 1}, {0, 1}, {2, 1}, {4, 1}}));
  int id = table.class_of_seed({0, table.leaves()[0]}).value();
  for (int j = 0; j < 3; ++j) {
    int next = table.u_shift(id);
    EXPECT_EQ(table.record(next).degree, table.record(id).degree + Grade(2));
    id = next;
  }
}

TEST(ClassTable, Y12Class) {
  IntersectionForm q(y12());
  auto t = spinc_of(q, {0, 0, 0, 1, 1});
  ClassTable table(q, t, {2, 1});
  EXPECT_EQ(table.initial_box_members(), 6u);
  EXPECT_EQ(table.leaves(),
            (std::vector<CharVector>{{0, 0, 0, -1, -1}, {0, 0, 0, 1, 1}}));
  auto c = table.census();
  // Ker U has rank two in degree -3/4; Ker U^2 has rank three.
  EXPECT_EQ(c[0], (std::map<Grade, int>{{Grade(-3, 4), 2}}));
  EXPECT_EQ(c[1], (std::map<Grade, int>{{Grade(-3, 4), 2}, {Grade(5, 4), 1}}));
  auto a = table.class_of_seed({1, {0, 0, 0, 1, 1}});
  auto b = table.class_of_seed({1, {0, 0, 0, -1, -1}});
  EXPECT_EQ(a, b);
}

TEST(ClassTable, Sigma357Census) {
  IntersectionForm q(sigma357());
  auto t = enumerate_spinc(q).front();
  ClassTable table(q, t, {2, 1});
  auto c = table.census();
  EXPECT_EQ(c[0], (std::map<Grade, int>{{-2, 2}, {0, 2}}));
  EXPECT_EQ(c[1], (std::map<Grade, int>{{-2, 2}, {0, 3}}));
  EXPECT_EQ(c[2], (std::map<Grade, int>{{-2, 2}, {0, 3}, {2, 1}}));
  CharVector k1{0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CharVector k2{0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  // initial-box representatives of the degree -2 generators
  CharVector k3{0, -1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0};
  CharVector k4{0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2};
  EXPECT_EQ(table.class_of_seed({1, k3}), table.class_of_seed({1, k4}));
  EXPECT_EQ(table.class_of_seed({1, k1}), table.class_of_seed({2, k4}));
  EXPECT_EQ(table.class_of_seed({1, k2}), table.class_of_seed({2, k3}));
  EXPECT_NE(table.class_of_seed({1, k1}), table.class_of_seed({1, k3}));
}

TEST(ClassTable, CensusMatchesFullPath) {
  for (const auto &[name, g] : goldens()) {
    IntersectionForm q(g);
    for (const auto &t : enumerate_spinc(q))
      EXPECT_TRUE(census_agrees(q, t)) << name << " #" << t.index;
  }
}

TEST(ClassTable, MarginStability) {
  for (const auto &[name, g] : goldens()) {
    IntersectionForm q(g);
    for (const auto &t : enumerate_spinc(q)) {
      auto mc = check_margin_stability(q, t, 2, 1);
      EXPECT_TRUE(mc.stable) << name;
      EXPECT_TRUE(mc.sound) << name;
    }
  }
}

TEST(ClassTable, MonotoneCensus) {
  IntersectionForm q(sigma357());
  ClassTable table(q, enumerate_spinc(q).front(), {3, 1});
  auto c = table.census();
  for (int n = 1; n <= 3; ++n)
    for (const auto &[d, r] : c[n - 1])
      EXPECT_LE(r, c[n][d]);
}

TEST(ClassTable, Errors) {
  IntersectionForm q(sigma237());
  auto t = enumerate_spinc(q).front();
  ClassTable table(q, t, {1, 1});
  EXPECT_THROW(table.ker_u_pow_ranks(2), InputError);
  EXPECT_THROW(ClassTable(q, t, {-1, 1}), InputError);
  EXPECT_THROW(ClassTable(IntersectionForm(sigma357()), t, {2, 1, 50}),
               ResourceError);
  EXPECT_THROW(ClassTable(IntersectionForm(parse_graph("1; 1;")), t, {1, 1}),
               DomainError);
}
