#include <gtest/gtest.h>

#include "tourlink/flow.hpp"
#include "oracles.hpp"

using namespace tourlink;

namespace {

bool InternallyDisjoint(const Tournament& t, Vertex s, Vertex target, const std::vector<Path>& paths) {
  std::vector<char> seen(t.size(), 0);
  for (const auto& p : paths) {
    if (p.front() != s || p.back() != target || !IsPath(t, p)) return false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (seen[p[i]]) return false;
      seen[p[i]] = 1;
    }
  }
  return true;
}

}  // namespace

TEST(Flow, MinCutMatchesWitnessesAndOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto t = RandomTournament(9, seed);
    for (Vertex s = 0; s < 9; ++s)
      for (Vertex u = 0; u < 9; ++u) {
        if (s == u || t.beats(s, u)) continue;
        auto c = MinVertexCut(t, s, u);
        EXPECT_EQ(c.cut.size(), c.witness_paths.size());
        EXPECT_TRUE(InternallyDisjoint(t, s, u, c.witness_paths));
        EXPECT_EQ(static_cast<int>(c.cut.size()), oracle::LocalCut(t, s, u));
        std::vector<char> alive(9, 1);
        for (Vertex v : c.cut) alive[v] = 0;
        EXPECT_FALSE(oracle::Reaches(t, s, u, alive));
      }
  }
}

TEST(Flow, DirectEdgeCountsOnce) {
  auto t = Tournament::Transitive(4);
  EXPECT_EQ(LocalConnectivity(t, 0, 3), 3);
  auto c = MinVertexCut(t, 0, 3);
  EXPECT_TRUE(c.uncuttable);
  EXPECT_EQ(c.local_connectivity(), 3);
  EXPECT_THROW(MinVertexCut(t, 1, 1), DomainError);
}

TEST(Flow, ThreeCycleHasConnectivityOne) {
  auto t = Tournament::Rotational(3);
  EXPECT_EQ(VertexConnectivity(t), 1);
  EXPECT_TRUE(IsKConnected(t, 1).connected);
  auto v = IsKConnected(t, 2);
  EXPECT_FALSE(v.connected);
  ASSERT_TRUE(v.separator.has_value());
  EXPECT_EQ(v.separator->size(), 1u);
  EXPECT_EQ(IsKConnected(t, 3).reason, "too few vertices");
}

TEST(Flow, RotationalConnectivity) {
  EXPECT_EQ(VertexConnectivity(Tournament::Rotational(9)), 4);
  EXPECT_EQ(VertexConnectivity(Tournament::Transitive(6)), 0);
}

TEST(Flow, ConnectivityMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 4 + static_cast<int>(seed % 6);
    auto t = RandomTournament(n, 1000 + seed);
    const int kappa = VertexConnectivity(t);
    EXPECT_EQ(kappa, oracle::Connectivity(t)) << seed;
    EXPECT_TRUE(IsKConnected(t, kappa).connected);
    auto no = IsKConnected(t, kappa + 1);
    EXPECT_FALSE(no.connected);
    if (no.separator) {
      EXPECT_LT(static_cast<int>(no.separator->size()), kappa + 1);
      std::vector<char> alive(n, 1);
      for (Vertex v : *no.separator) alive[v] = 0;
      EXPECT_FALSE(oracle::Strong(t, alive));
    }
  }
}

TEST(Flow, MinCostSystemMatchesExhaustiveOptimum) {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto t = RandomTournament(9, 500 + seed);
    VertexSet sources{0, 1, 2};
    VertexSet sinks{6, 7};
    const std::optional<Vertex> special = 8;
    VertexSet forbidden{3};
    auto best = oracle::MinSystemSize(t, {0, 1, 2}, {6, 7, 8}, {3}, 3);
    try {
      auto sys = MinCostDisjointSystem(t, sources, sinks, special, forbidden, 3);
      EXPECT_EQ(AuditPathSystem(t, sys), "");
      ASSERT_TRUE(best.has_value());
      EXPECT_EQ(sys.total_vertices(), *best) << seed;
      EXPECT_FALSE(sys.used().contains(3));
      ++compared;
    } catch (const InfeasibleSystem& e) {
      EXPECT_FALSE(best.has_value());
      EXPECT_LT(static_cast<int>(e.separator().size()), 3);
    }
  }
  EXPECT_GT(compared, 40);
}

TEST(Flow, MinCostSystemRejectsBadInput) {
  auto t = RandomTournament(6, 1);
  EXPECT_THROW(MinCostDisjointSystem(t, {0}, {0}, std::nullopt, {}, 1), DomainError);
  EXPECT_THROW(MinCostDisjointSystem(t, {0}, {1}, std::nullopt, {}, 2), DomainError);
  EXPECT_THROW(MinCostDisjointSystem(t, {0}, {1}, std::nullopt, {1}, 1), DomainError);
}

TEST(Flow, InfeasibleSystemCarriesSeparator) {
  // Transitive: nothing reaches a lower id.
  auto t = Tournament::Transitive(6);
  try {
    MinCostDisjointSystem(t, {4, 5}, {0, 1}, std::nullopt, {}, 2);
    FAIL();
  } catch (const InfeasibleSystem& e) {
    EXPECT_EQ(e.achievable(), 0);
    EXPECT_EQ(e.separator().size(), 0u);
  }
}

TEST(Flow, AuditCatchesSharedVertex) {
  auto t = Tournament::Transitive(5);
  PathSystem sys;
  sys.sources = {0, 1};
  sys.sinks = {3, 4};
  sys.paths = {{0, 2, 3}, {1, 2, 4}};
  EXPECT_NE(AuditPathSystem(t, sys), "");
  sys.paths = {{0, 3}, {1, 2, 4}};
  EXPECT_EQ(AuditPathSystem(t, sys), "");
}
