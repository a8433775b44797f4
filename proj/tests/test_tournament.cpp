#include <gtest/gtest.h>

#include "tourlink/tournament.hpp"
#include "oracles.hpp"

using namespace tourlink;

TEST(Tournament, TransitiveDegrees) {
  auto t = Tournament::Transitive(5);
  for (int v = 0; v < 5; ++v) {
    EXPECT_EQ(t.out_degree(v), 4 - v);
    EXPECT_EQ(t.in_degree(v), v);
  }
  EXPECT_TRUE(t.beats(0, 4));
  EXPECT_FALSE(t.beats(4, 0));
}

TEST(Tournament, RotationalIsRegular) {
  auto t = Tournament::Rotational(7);
  for (int v = 0; v < 7; ++v) EXPECT_EQ(t.out_degree(v), 3);
  EXPECT_THROW(Tournament::Rotational(6), DomainError);
}

TEST(Tournament, ExactlyOneDirectionPerPair) {
  auto t = RandomTournament(40, 3);
  for (int u = 0; u < 40; ++u) {
    EXPECT_FALSE(t.beats(u, u));
    for (int v = u + 1; v < 40; ++v) EXPECT_NE(t.beats(u, v), t.beats(v, u));
  }
}

TEST(Tournament, RandomIsDeterministicPerSeed) {
  EXPECT_EQ(RandomTournament(30, 11), RandomTournament(30, 11));
  EXPECT_FALSE(RandomTournament(30, 11) == RandomTournament(30, 12));
}

TEST(Tournament, NeighbourSetsMatchBeats) {
  auto t = RandomTournament(25, 5);
  for (int v = 0; v < 25; ++v) {
    for (Vertex w : t.out_neighbors(v)) EXPECT_TRUE(t.beats(v, w));
    for (Vertex w : t.in_neighbors(v)) EXPECT_TRUE(t.beats(w, v));
    EXPECT_EQ(t.out_neighbors(v).size() + t.in_neighbors(v).size(), 24u);
  }
}

TEST(Tournament, SerializeRoundTrip) {
  auto t = RandomTournament(20, 7);
  const std::string text = Serialize(t);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
  EXPECT_EQ(Parse(text), t);
}

TEST(Tournament, ParseReportsPosition) {
  try {
    Parse("3\n-10\n0-1\n01-\n");
    FAIL() << "expected MalformedInput";
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  try {
    Parse("2\n-x\n0-\n");
    FAIL();
  } catch (const MalformedInput& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 2);
  }
  EXPECT_THROW(Parse("2\n-1\n0-"), MalformedInput);
  EXPECT_THROW(Parse(""), MalformedInput);
  EXPECT_THROW(Parse("2\n-1\n0-\nextra\n"), MalformedInput);
}

TEST(Tournament, FromMatrixRejectsBadTables) {
  using O = Orientation;
  std::vector<std::vector<O>> both{{O::kNone, O::kForward}, {O::kForward, O::kNone}};
  EXPECT_THROW(Tournament::FromMatrix(2, both), MalformedInput);
  std::vector<std::vector<O>> none{{O::kNone, O::kNone}, {O::kNone, O::kNone}};
  EXPECT_THROW(Tournament::FromMatrix(2, none), MalformedInput);
  std::vector<std::vector<O>> half{{O::kNone, O::kNone}, {O::kForward, O::kNone}};
  EXPECT_TRUE(Tournament::FromMatrix(2, half).beats(1, 0));
}

TEST(VertexSet, Algebra) {
  VertexSet a{5, 1, 3, 3};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.front(), 1);
  VertexSet b{3, 4};
  EXPECT_EQ(a.united(b), (VertexSet{1, 3, 4, 5}));
  EXPECT_EQ(a.intersected(b), (VertexSet{3}));
  EXPECT_EQ(a.minus(b), (VertexSet{1, 5}));
  EXPECT_FALSE(a.disjoint(b));
  EXPECT_EQ(a.first(2), (VertexSet{1, 3}));
  EXPECT_THROW(VertexSet::FromUnique({1, 1}), DomainError);
}

TEST(Tournament, InducedKeepsOrientation) {
  auto t = RandomTournament(15, 2);
  VertexSet s{1, 4, 9, 12};
  auto ind = Induced(t, s);
  ASSERT_EQ(ind.tournament.size(), 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) {
        EXPECT_EQ(ind.tournament.beats(a, b), t.beats(ind.to_parent[a], ind.to_parent[b]));
      }
}

TEST(Tournament, StrongConnectivityMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto t = RandomTournament(7, seed);
    std::vector<char> all(7, 1);
    EXPECT_EQ(IsStronglyConnected(t), oracle::Strong(t, all)) << seed;
  }
  EXPECT_FALSE(IsStronglyConnected(Tournament::Transitive(4)));
}

TEST(Tournament, ShortestPathIsAPath) {
  auto t = RandomTournament(30, 9);
  std::vector<char> all(30, 1);
  for (int s = 0; s < 5; ++s) {
    auto p = ShortestPath(t, s, 29, all);
    if (p.empty()) {
      EXPECT_FALSE(Reachable(t, s, all)[29]);
      continue;
    }
    EXPECT_TRUE(IsPath(t, p));
    EXPECT_EQ(p.front(), s);
    EXPECT_EQ(p.back(), 29);
  }
  EXPECT_THROW(t.CheckVertex(30), DomainError);
}

TEST(Tournament, MutableEmbed) {
  MutableTournament mt(6);
  mt.embed(Tournament::Transitive(3), {5, 3, 1});
  auto t = std::move(mt).freeze();
  EXPECT_TRUE(t.beats(5, 3));
  EXPECT_TRUE(t.beats(3, 1));
  EXPECT_TRUE(t.beats(5, 1));
}
