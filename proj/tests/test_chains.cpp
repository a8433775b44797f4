#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "tourlink/chains.hpp"

using namespace tourlink;

namespace {

// Longest strictly increasing subsequence by trying every subset.
int BruteLis(const std::vector<int>& v) {
  const int n = static_cast<int>(v.size());
  int best = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    int last = INT32_MIN, len = 0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (mask >> i & 1) {
        if (v[i] <= last) ok = false;
        last = v[i];
        ++len;
      }
    if (ok) best = std::max(best, len);
  }
  return best;
}

bool Monotone(const std::vector<int>& items, const std::vector<int>& rank, bool up) {
  for (std::size_t i = 1; i < items.size(); ++i)
    if ((rank[items[i]] > rank[items[i - 1]]) != up) return false;
  return true;
}

}  // namespace

TEST(Chains, LisMatchesBruteForce) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> v(1 + trial % 12);
    for (auto& x : v) x = static_cast<int>(rng() % 10);
    auto pos = LongestIncreasing(v);
    EXPECT_EQ(static_cast<int>(pos.size()), BruteLis(v));
    for (std::size_t i = 1; i < pos.size(); ++i) {
      EXPECT_LT(pos[i - 1], pos[i]);
      EXPECT_LT(v[pos[i - 1]], v[pos[i]]);
    }
  }
  EXPECT_TRUE(LongestIncreasing({}).empty());
}

TEST(Chains, SizeFloor) {
  EXPECT_EQ(ChainSizeFloor(16, 2), 4);
  EXPECT_EQ(ChainSizeFloor(81, 3), 3);
  EXPECT_EQ(ChainSizeFloor(256, 3), 4);
  EXPECT_EQ(ChainSizeFloor(17, 2), 5);
  EXPECT_EQ(ChainSizeFloor(1, 4), 1);
}

TEST(Chains, MultiOrderChainIsMonotoneAndLargeEnough) {
  Rng rng(17);
  for (auto [n, l] : std::vector<std::pair<int, int>>{{16, 2}, {81, 3}, {256, 3}, {50, 4}}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::vector<int>> ranks(l, std::vector<int>(n));
      for (auto& r : ranks) {
        std::iota(r.begin(), r.end(), 0);
        std::shuffle(r.begin(), r.end(), rng);
      }
      auto w = MultiOrderMonotoneSubset(ranks);
      EXPECT_GE(static_cast<int>(w.items.size()), ChainSizeFloor(n, l));
      ASSERT_EQ(static_cast<int>(w.increasing.size()), l);
      EXPECT_TRUE(w.increasing[0]);
      for (int o = 0; o < l; ++o) EXPECT_TRUE(Monotone(w.items, ranks[o], w.increasing[o]));
    }
  }
}

TEST(Chains, RejectsNonPermutations) {
  EXPECT_THROW(MultiOrderMonotoneSubset(std::vector<std::vector<int>>{}), DomainError);
  EXPECT_THROW(MultiOrderMonotoneSubset({{0, 1, 2}, {0, 0, 1}}), DomainError);
  EXPECT_THROW(MultiOrderMonotoneSubset({{0, 1, 2}, {0, 1}}), DomainError);
}

TEST(Chains, ComparatorForm) {
  std::vector<int> items{5, 3, 9, 1, 7};
  using Less = std::function<bool(int, int)>;
  std::vector<Less> orders{[](int a, int b) { return a < b; }, [](int a, int b) { return a > b; }};
  auto w = MultiOrderMonotoneSubset(items, orders);
  EXPECT_EQ(w.items.size(), 5u);
  EXPECT_FALSE(w.increasing[1]);
  std::vector<Less> broken{[](int a, int b) { return a <= b; }};
  EXPECT_THROW(MultiOrderMonotoneSubset(items, broken), DomainError);
  std::vector<Less> partial{[](int a, int b) { return a % 2 < b % 2; }};
  EXPECT_THROW(MultiOrderMonotoneSubset(items, partial), DomainError);
}

TEST(Chains, NearlyRegularSubsetGuarantee) {
  for (int n : {10, 50, 100}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto t = RandomTournament(n, seed * 7 + n);
      auto w = NearlyRegularSubset(t);
      EXPECT_TRUE(AuditNearlyRegular(t, w));
      EXPECT_GE(10 * static_cast<int>(w.members.size()), n);
      EXPECT_TRUE(w.meets_bound);
    }
  }
}

TEST(Chains, NearlyRegularOnTransitive) {
  // Middle vertices of a transitive tournament have balanced degrees.
  auto t = Tournament::Transitive(41);
  auto w = NearlyRegularSubset(t);
  EXPECT_TRUE(AuditNearlyRegular(t, w));
  EXPECT_GE(10 * static_cast<int>(w.members.size()), 41);
}

TEST(Chains, WindowSubsetHasExactlyT) {
  for (int t_size : {3, 5, 10}) {
    auto t = RandomTournament(120, 40 + t_size);
    auto w = NearlyRegularWindowSubset(t, t_size);
    EXPECT_EQ(static_cast<int>(w.members.size()), t_size);
    EXPECT_TRUE(w.windowed);
    EXPECT_TRUE(AuditNearlyRegular(t, w));
    for (Vertex v : w.members) {
      EXPECT_LE(std::abs(t.in_degree(v) - w.center_m), 10 * t_size);
    }
  }
  auto t = RandomTournament(10, 1);
  EXPECT_THROW(NearlyRegularWindowSubset(t, 0), DomainError);
  EXPECT_THROW(NearlyRegularWindowSubset(t, 11), DomainError);
}

TEST(Chains, RatioHolds) {
  EXPECT_TRUE(RatioHolds(4, 1, DegreeSide::kOutDominant, 4));
  EXPECT_FALSE(RatioHolds(5, 1, DegreeSide::kOutDominant, 4));
  EXPECT_FALSE(RatioHolds(1, 2, DegreeSide::kOutDominant, 4));
  EXPECT_TRUE(RatioHolds(1, 2, DegreeSide::kInDominant, 4));
}
