#include <gtest/gtest.h>

#include "tourlink/good_family.hpp"

using namespace tourlink;

namespace {

bool SubsetOf(const VertexSet& a, const VertexSet& b) { return a.intersected(b).size() == a.size(); }

std::vector<VertexSet> Blocks(int k, int size, int offset = 0) {
  std::vector<VertexSet> out;
  for (int i = 0; i < k; ++i) {
    std::vector<Vertex> vs;
    for (int j = 0; j < size; ++j) vs.push_back(offset + i * size + j);
    out.push_back(VertexSet(vs));
  }
  return out;
}

}  // namespace

TEST(GoodFamily, GreedyEmbedOnRotational) {
  auto t = Tournament::Rotational(61);
  VertexSet branch{0, 7, 14, 21, 28};
  auto r = GreedyEmbedT2(t, branch, VertexSet{1, 2});
  ASSERT_TRUE(std::holds_alternative<Subdivision>(r));
  const auto& s = std::get<Subdivision>(r);
  EXPECT_EQ(AuditSubdivision(t, s), "");
  EXPECT_EQ(s.connector.size(), 20u);
  EXPECT_FALSE(s.vertices().contains(1));
  EXPECT_FALSE(s.vertices().contains(2));
  for (const auto& [ab, p] : s.connector) EXPECT_LE(p.size(), 4u);
}

TEST(GoodFamily, GreedyEmbedStopsOnTransitive) {
  auto t = Tournament::Transitive(20);
  auto r = GreedyEmbedT2(t, VertexSet{3, 9, 15}, {});
  ASSERT_TRUE(std::holds_alternative<Obstruction>(r));
  const auto& o = std::get<Obstruction>(r);
  EXPECT_EQ(AuditObstruction(t, o), "");
  // Nothing reaches a lower vertex in a transitive tournament.
  EXPECT_GT(o.x, o.y);
}

TEST(GoodFamily, GreedyEmbedIsDeterministic) {
  auto t = RandomTournament(40, 8);
  VertexSet b{0, 1, 2, 3};
  auto a = GreedyEmbedT2(t, b, {});
  auto c = GreedyEmbedT2(t, b, {});
  ASSERT_EQ(a.index(), c.index());
  if (a.index() == 0) {
    EXPECT_EQ(std::get<0>(a).connector, std::get<0>(c).connector);
  }
}

TEST(GoodFamily, GreedyEmbedRejectsBadInput) {
  auto t = RandomTournament(10, 1);
  EXPECT_THROW(GreedyEmbedT2(t, VertexSet{1}, {}), DomainError);
  EXPECT_THROW(GreedyEmbedT2(t, VertexSet{1, 2}, VertexSet{2}), DomainError);
  EXPECT_THROW(GreedyEmbedT2(t, VertexSet{1, 12}, {}), DomainError);
}

TEST(GoodFamily, PartitionSendsIToJ) {
  // Transitive skeleton with random edges inside [0,30) and [32,80): the pair
  // (31, 30) has no short path, and [0,30) beats [32,80).
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    MutableTournament mt(80);
    for (auto [lo, hi] : std::vector<std::pair<int, int>>{{0, 30}, {32, 80}})
      for (int u = lo; u < hi; ++u)
        for (int v = u + 1; v < hi; ++v)
          if (rng() & 1) mt.orient(v, u);
    const auto t = std::move(mt).freeze();
    auto r = GreedyEmbedT2(t, VertexSet{30, 31}, {});
    ASSERT_TRUE(std::holds_alternative<Obstruction>(r));
    const auto& o = std::get<Obstruction>(r);
    EXPECT_EQ(o.x, 31);
    EXPECT_EQ(o.y, 30);
    EXPECT_EQ(AuditObstruction(t, o), "");
    std::vector<VertexSet> blocks{VertexSet(Blocks(1, 15, 0)[0]), VertexSet(Blocks(1, 15, 15)[0]),
                                  VertexSet(Blocks(1, 16, 32)[0]), VertexSet(Blocks(1, 16, 48)[0])};
    auto p = PartitionByObstruction(t, blocks, o);
    ASSERT_TRUE(p.ok) << p.failure;
    EXPECT_EQ(p.I, (std::vector<int>{0, 1}));
    EXPECT_EQ(p.J, (std::vector<int>{2, 3}));
    for (int i : p.I) {
      EXPECT_FALSE(p.reduced[i].empty());
      EXPECT_TRUE(SubsetOf(p.reduced[i], o.Y_set));
      EXPECT_TRUE(SubsetOf(p.reduced[i], blocks[i]));
    }
    for (int j : p.J) {
      EXPECT_FALSE(p.reduced[j].empty());
      EXPECT_TRUE(SubsetOf(p.reduced[j], o.X_set));
      EXPECT_TRUE(SubsetOf(p.reduced[j], blocks[j]));
    }
    for (int i : p.I)
      for (int j : p.J) EXPECT_TRUE(t.dominates(p.reduced[i], p.reduced[j]));
  }
}

TEST(GoodFamily, PartitionNeedsEveryBlockOnASide) {
  auto t = Tournament::Transitive(60);
  auto r = GreedyEmbedT2(t, VertexSet{30, 31}, {});
  ASSERT_TRUE(std::holds_alternative<Obstruction>(r));
  // The second block sits between the two sides.
  std::vector<VertexSet> blocks{Blocks(1, 10, 0)[0], VertexSet{30, 31}};
  auto p = PartitionByObstruction(t, blocks, std::get<Obstruction>(r));
  EXPECT_FALSE(p.ok);
  EXPECT_FALSE(p.failure.empty());
}

TEST(GoodFamily, BuildOnRandomTournamentAuditsOrFailsCleanly) {
  int built = 0;
  for (int k : {2, 3}) {
    auto cfg = GoodFamilyConfig::Desk(k);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const int w = static_cast<int>(cfg.w_size);
      auto t = RandomTournament(k * w, 100 * k + seed);
      auto blocks = Blocks(k, w);
      auto b = BuildGoodFamily(t, blocks, cfg);
      if (b.family) {
        ++built;
        EXPECT_EQ(AuditGoodFamily(t, *b.family, blocks, cfg), "");
      } else {
        EXPECT_FALSE(b.failure.empty());
      }
    }
  }
  EXPECT_GT(built, 0);
}

TEST(GoodFamily, TransitiveGivesNonSubdivisionSets) {
  auto cfg = GoodFamilyConfig::Desk(2);
  const int w = static_cast<int>(cfg.w_size);
  auto t = Tournament::Transitive(2 * w);
  auto blocks = Blocks(2, w);
  auto b = BuildGoodFamily(t, blocks, cfg);
  if (b.family) {
    EXPECT_EQ(AuditGoodFamily(t, *b.family, blocks, cfg), "");
    for (int i = 0; i < 2; ++i) EXPECT_FALSE(b.family->is_subdivision(i));
  } else {
    EXPECT_FALSE(b.failure.empty());
  }
}

TEST(GoodFamily, ShortBlockIsReported) {
  auto cfg = GoodFamilyConfig::Desk(2);
  auto t = RandomTournament(100, 3);
  auto b = BuildGoodFamily(t, Blocks(2, 20), cfg);
  EXPECT_FALSE(b.family.has_value());
  EXPECT_NE(b.failure.find("fewer than"), std::string::npos);
}

TEST(GoodFamily, OverlappingBlocksThrow) {
  auto cfg = GoodFamilyConfig::Desk(2);
  auto t = RandomTournament(100, 3);
  std::vector<VertexSet> blocks{VertexSet{0, 1, 2}, VertexSet{2, 3}};
  EXPECT_THROW(BuildGoodFamily(t, blocks, cfg), DomainError);
}

TEST(GoodFamily, DeskAndSaturatingSizes) {
  auto c = GoodFamilyConfig::Desk(3);
  EXPECT_EQ(c.ell, 10);
  EXPECT_EQ(c.w_size, 400);
  EXPECT_EQ(c.ns_size, 108);
  EXPECT_EQ(GoodFamilyConfig::PaperWSize(1, 8), 768);
  EXPECT_EQ(GoodFamilyConfig::PaperWSize(10, 8), std::numeric_limits<std::int64_t>::max());
}
