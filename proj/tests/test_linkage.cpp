#include <gtest/gtest.h>

#include "tourlink/linkage.hpp"
#include "oracles.hpp"

using namespace tourlink;

TEST(Linkage, AgreesWithPathEnumerationOnSmallTournaments) {
  int linked = 0, refused = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    auto t = RandomTournament(n, 77 + seed);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
            LinkageInstance inst{{{a, b}, {c, d}}};
            auto v = FindLinkageExact(t, inst);
            ASSERT_NE(v.status, LinkStatus::kUnknown);
            const bool truth = oracle::Linked(t, inst.pairs);
            ASSERT_EQ(v.status == LinkStatus::kLinked, truth) << seed << " " << a << b << c << d;
            if (truth) {
              ++linked;
              EXPECT_TRUE(ValidatePathSystem(t, inst, *v.paths).ok);
            } else {
              ++refused;
            }
          }
  }
  EXPECT_GT(linked, 0);
  EXPECT_GT(refused, 0);
}

TEST(Linkage, ThreePairsAgreeWithEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto t = RandomTournament(9, 300 + seed);
    LinkageInstance inst{{{0, 1}, {2, 3}, {4, 5}}};
    auto v = FindLinkageExact(t, inst);
    EXPECT_EQ(v.status == LinkStatus::kLinked, oracle::Linked(t, inst.pairs)) << seed;
  }
}

TEST(Linkage, TransitiveIsNotOneLinked) {
  auto t = Tournament::Transitive(4);
  auto v = IsKLinked(t, 1);
  EXPECT_FALSE(v.linked);
  EXPECT_TRUE(v.complete);
  ASSERT_TRUE(v.witness.has_value());
  auto [x, y] = v.witness->pairs[0];
  EXPECT_GT(x, y);
}

TEST(Linkage, RotationalFiveIsOneLinked) {
  auto v = IsKLinked(Tournament::Rotational(5), 1);
  EXPECT_TRUE(v.linked);
  EXPECT_GT(v.instances_checked, 0);
}

TEST(Linkage, TooFewVertices) {
  auto v = IsKLinked(Tournament::Rotational(3), 2);
  EXPECT_FALSE(v.linked);
  EXPECT_EQ(v.reason, "too few vertices");
}

TEST(Linkage, SampledModeIsDeterministic) {
  auto t = RandomTournament(12, 4);
  LinkednessOptions opt;
  opt.mode = LinkednessOptions::Mode::kSampled;
  opt.trials = 30;
  opt.seed = 9;
  auto a = IsKLinked(t, 2, opt);
  auto b = IsKLinked(t, 2, opt);
  EXPECT_EQ(a.linked, b.linked);
  EXPECT_EQ(a.instances_checked, b.instances_checked);
}

TEST(Linkage, RejectsBadInstances) {
  auto t = RandomTournament(6, 1);
  EXPECT_THROW(FindLinkageExact(t, LinkageInstance{}), DomainError);
  EXPECT_THROW(FindLinkageExact(t, LinkageInstance{{{0, 1}, {1, 2}}}), DomainError);
  EXPECT_THROW(FindLinkageExact(t, LinkageInstance{{{0, 9}}}), DomainError);
}

TEST(Linkage, ValidatorNamesViolations) {
  auto t = Tournament::Transitive(6);
  LinkageInstance inst{{{0, 3}, {1, 4}}};
  EXPECT_TRUE(ValidatePathSystem(t, inst, {{0, 3}, {1, 4}}).ok);
  EXPECT_EQ(ValidatePathSystem(t, inst, {{0, 3}}).violation, "count");
  EXPECT_EQ(ValidatePathSystem(t, inst, {{0, 2, 3}, {1, 2, 4}}).violation, "disjointness");
  EXPECT_EQ(ValidatePathSystem(t, inst, {{0, 3}, {1, 5, 4}}).violation, "orientation");
  EXPECT_EQ(ValidatePathSystem(t, inst, {{0, 2}, {1, 4}}).violation, "endpoints");
}

TEST(Linkage, BudgetExhaustionIsUnknown) {
  // A linked instance whose search has to take at least one step.
  auto t = Tournament::Rotational(11);
  LinkageInstance inst{{{0, 5}, {1, 6}}};
  auto full = FindLinkageExact(t, inst);
  ASSERT_EQ(full.status, LinkStatus::kLinked);
  if (full.nodes_explored > 1) {
    auto cut = FindLinkageExact(t, inst, 1);
    EXPECT_NE(cut.status, LinkStatus::kNotLinked);
  }
}
