#include <gtest/gtest.h>

#include "tourlink/linker.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace tourlink;

namespace {

std::int64_t Count(const LinkResult& r, const std::string& stage, const std::string& key) {
  for (const auto& e : r.trace)
    if (e.stage == stage)
      for (const auto& [k, v] : e.counts)
        if (k == key) return v;
  return -1;
}

// Independent of the library validator: edges, disjointness, endpoints.
bool PathsLink(const Tournament& t, const std::vector<Vertex>& x, const std::vector<Vertex>& y,
               const std::vector<Path>& paths) {
  if (paths.size() != x.size()) return false;
  std::vector<char> seen(t.size(), 0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.empty() || p.front() != x[i] || p.back() != y[i]) return false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (seen[p[j]]) return false;
      seen[p[j]] = 1;
      if (j > 0 && !t.beats(p[j - 1], p[j])) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Linker, HamiltonianPathInRandomSemicompleteDigraphs) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    AuxiliaryDigraph d;
    d.k = 1 + trial % 9;
    d.adj.assign(d.k, std::vector<char>(d.k, 0));
    for (int i = 0; i < d.k; ++i)
      for (int j = i + 1; j < d.k; ++j) {
        const int pick = static_cast<int>(rng() % 3);
        if (pick != 1) d.adj[i][j] = 1;
        if (pick != 0) d.adj[j][i] = 1;
      }
    std::vector<int> all(d.k);
    std::iota(all.begin(), all.end(), 0);
    auto p = HamiltonianPathSemicomplete(d, all);
    ASSERT_EQ(static_cast<int>(p.size()), d.k);
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, all);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_TRUE(d.edge(p[i - 1], p[i]));
  }
  AuxiliaryDigraph gap;
  gap.k = 3;
  gap.adj = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  EXPECT_THROW(HamiltonianPathSemicomplete(gap, {0, 1, 2}), DomainError);
}

TEST(Linker, AuxDigraphRulesOnBuiltFamily) {
  auto cfg = GoodFamilyConfig::Desk(3);
  const int w = static_cast<int>(cfg.w_size);
  auto t = RandomTournament(3 * w, 5);
  std::vector<VertexSet> blocks;
  for (int i = 0; i < 3; ++i) {
    std::vector<Vertex> vs(w);
    std::iota(vs.begin(), vs.end(), i * w);
    blocks.push_back(VertexSet(vs));
  }
  auto b = BuildGoodFamily(t, blocks, cfg);
  ASSERT_TRUE(b.family.has_value()) << b.failure;
  auto h = BuildAuxDigraph(t, *b.family);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      EXPECT_TRUE(h.edge(i, j) || h.edge(j, i));
      if (!b.family->is_subdivision(i) && !b.family->is_subdivision(j) && h.edge(i, j)) {
        EXPECT_TRUE(t.dominates(b.family->sets[i], b.family->sets[j]));
      }
    }
}

TEST(Linker, ConstructiveOnRandomTournamentKTwo) {
  auto cfg = LinkerConfig::Desk(2);
  cfg.family.w_size = 64;
  cfg.fallback = Fallback::kNone;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto t = RandomTournament(300, seed);
    std::vector<Vertex> x{0, 1}, y{2, 3};
    auto r = Link(t, x, y, cfg);
    ASSERT_EQ(r.method, "constructive") << (r.failure ? r.failure->stage + ": " + r.failure->detail : "");
    ASSERT_EQ(r.verdict.status, LinkStatus::kLinked);
    EXPECT_TRUE(PathsLink(t, x, y, *r.verdict.paths));
    EXPECT_EQ(r.trace.back().stage, "assemble");
  }
}

TEST(Linker, ConstructiveOnRandomTournamentKThree) {
  auto cfg = LinkerConfig::Desk(3);
  cfg.family.w_size = 200;
  cfg.fallback = Fallback::kNone;
  auto t = RandomTournament(900, 21);
  std::vector<Vertex> x{10, 20, 30}, y{40, 50, 60};
  auto r = Link(t, x, y, cfg);
  ASSERT_EQ(r.method, "constructive") << (r.failure ? r.failure->stage + ": " + r.failure->detail : "");
  EXPECT_TRUE(PathsLink(t, x, y, *r.verdict.paths));
}

TEST(Linker, SinglePair) {
  auto cfg = LinkerConfig::Desk(1);
  cfg.family.w_size = 32;
  auto t = RandomTournament(120, 3);
  auto r = Link(t, {5}, {6}, cfg);
  ASSERT_EQ(r.verdict.status, LinkStatus::kLinked);
  EXPECT_TRUE(PathsLink(t, {5}, {6}, *r.verdict.paths));
}

TEST(Linker, FallbackMatchesOracleOnSmallInputs) {
  auto cfg = LinkerConfig::Desk(2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto t = RandomTournament(9, seed);
    std::vector<Vertex> x{0, 1}, y{2, 3};
    auto r = Link(t, x, y, cfg);
    EXPECT_EQ(r.method, "exact");
    ASSERT_TRUE(r.failure.has_value());
    EXPECT_EQ(r.failure->stage, "carve");
    const bool truth = oracle::Linked(t, {{0, 2}, {1, 3}});
    EXPECT_EQ(r.verdict.status == LinkStatus::kLinked, truth) << seed;
    if (truth) {
      EXPECT_TRUE(PathsLink(t, x, y, *r.verdict.paths));
    }
  }
}

TEST(Linker, NoFallbackGivesUnknown) {
  auto cfg = LinkerConfig::Desk(2);
  cfg.fallback = Fallback::kNone;
  auto r = Link(RandomTournament(10, 1), {0, 1}, {2, 3}, cfg);
  EXPECT_EQ(r.verdict.status, LinkStatus::kUnknown);
  EXPECT_EQ(r.method, "none");
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->stage, "carve");
}

TEST(Linker, RejectsBadTerminals) {
  auto cfg = LinkerConfig::Desk(2);
  auto t = RandomTournament(10, 1);
  EXPECT_THROW(Link(t, {0, 1}, {2}, cfg), DomainError);
  EXPECT_THROW(Link(t, {0, 1}, {1, 3}, cfg), DomainError);
  EXPECT_THROW(Link(t, {}, {}, cfg), DomainError);
}

TEST(Linker, LowFreeThresholdStillAudits) {
  auto cfg = LinkerConfig::Desk(2);
  cfg.family.w_size = 64;
  cfg.free_threshold = 1;
  cfg.fallback = Fallback::kNone;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto t = RandomTournament(300, 50 + seed);
    std::vector<Vertex> x{0, 1}, y{2, 3};
    auto r = Link(t, x, y, cfg);
    if (r.method == "constructive") {
      EXPECT_TRUE(PathsLink(t, x, y, *r.verdict.paths));
    } else {
      ASSERT_TRUE(r.failure.has_value());
      EXPECT_FALSE(r.failure->detail.empty());
    }
  }
}

TEST(Linker, TinyBoundsAreFlagged) {
  auto cfg = LinkerConfig::Desk(2);
  cfg.family.w_size = 64;
  cfg.bound_subdiv = -1;
  cfg.fallback = Fallback::kNone;
  int flagged = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = Link(RandomTournament(300, seed), {0, 1}, {2, 3}, cfg);
    if (Count(r, "good-family", "subdivision_sets") > 0) {
      ASSERT_TRUE(r.failure.has_value());
      EXPECT_EQ(r.failure->stage, "bounds");
      ++flagged;
    }
  }
  EXPECT_GT(flagged, 0);
}

TEST(Linker, RerouteFindsNothingOnMinimalSystems) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto t = RandomTournament(30, seed);
    auto r = GreedyEmbedT2(t, VertexSet{0, 1, 2, 3, 4}, {});
    if (!std::holds_alternative<Subdivision>(r)) continue;
    const auto& sub = std::get<Subdivision>(r);
    try {
      auto sys = MinCostDisjointSystem(t, VertexSet{0, 1, 2}, VertexSet{20, 21, 22, 23}, std::nullopt, {}, 3);
      EXPECT_FALSE(RerouteImprove(t, sys, sub).has_value());
      ++checked;
    } catch (const InfeasibleSystem&) {
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Linker, RerouteShortensDetours) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto d = fixture::NonMinimal(seed);
    if (!d) continue;
    ++checked;
    auto imp = RerouteImprove(d->t, d->sys, d->sub);
    ASSERT_TRUE(imp.has_value()) << seed;
    EXPECT_LT(imp->system.total_vertices(), d->sys.total_vertices());
    std::vector<Vertex> xs, ys;
    for (const auto& p : d->sys.paths) {
      xs.push_back(p.front());
      ys.push_back(p.back());
    }
    EXPECT_TRUE(PathsLink(d->t, xs, ys, imp->system.paths));
  }
  EXPECT_GT(checked, 20);
}

TEST(Linker, LinkWithinSubdivisionUsesDisjointConnectors) {
  auto t = Tournament::Rotational(61);
  auto r = GreedyEmbedT2(t, VertexSet{0, 7, 14, 21, 28, 35}, {});
  ASSERT_TRUE(std::holds_alternative<Subdivision>(r));
  const auto& sub = std::get<Subdivision>(r);
  auto paths = LinkWithinSubdivision(t, sub, {{0, 7}, {21, 14}}, VertexSet{28});
  EXPECT_TRUE(PathsLink(t, {0, 21}, {7, 14}, paths));
  for (const auto& p : paths)
    for (Vertex v : p) {
      EXPECT_TRUE(sub.vertices().contains(v));
      EXPECT_NE(v, 28);
    }
  EXPECT_THROW(LinkWithinSubdivision(t, sub, {{0, 1}}, {}), DomainError);
}

TEST(Linker, LinkWithinSubdivisionReportsBlockedHub) {
  auto t = Tournament::Rotational(61);
  auto r = GreedyEmbedT2(t, VertexSet{0, 7, 14}, {});
  ASSERT_TRUE(std::holds_alternative<Subdivision>(r));
  const auto& sub = std::get<Subdivision>(r);
  // Block every vertex that is not an endpoint.
  VertexSet all;
  for (Vertex v : sub.vertices())
    if (v != 0 && v != 7) all.insert(v);
  if (sub.path(0, 7).size() > 2) {
    EXPECT_THROW(LinkWithinSubdivision(t, sub, {{0, 7}}, all), StageError);
  } else {
    EXPECT_EQ(LinkWithinSubdivision(t, sub, {{0, 7}}, all).front(), (Path{0, 7}));
  }
}
