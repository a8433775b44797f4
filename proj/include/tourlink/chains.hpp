#pragma once

// Nearly-regular vertex subsets and chains that are monotone in several total
// orders at once.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "tourlink/tournament.hpp"

namespace tourlink {

enum class DegreeSide { kOutDominant, kInDominant };

inline const char* ToString(DegreeSide s) { return s == DegreeSide::kOutDominant ? "out-dominant" : "in-dominant"; }

struct NearlyRegularWitness {
  VertexSet members;
  DegreeSide side = DegreeSide::kOutDominant;
  int ratio = 4;
  // Window fields, set only by the windowed variant.
  bool windowed = false;
  int center_m = 0;
  int window_halfwidth = 0;
  // |members| reached the guaranteed size (n/10, or t for the window).
  bool meets_bound = true;
  // Host has fewer than 10 vertices, where the size guarantee is vacuous.
  bool small_instance = false;
};

/// d^-(v) <= d^+(v) <= C d^-(v) (out side) or the mirrored inequality.
inline bool RatioHolds(int out, int in, DegreeSide side, int ratio) {
  if (side == DegreeSide::kOutDominant) return in <= out && out <= ratio * in;
  return out <= in && in <= ratio * out;
}

/// Checks the ratio condition (and the window, when present) against `t`.
inline bool AuditNearlyRegular(const Tournament& t, const NearlyRegularWitness& w) {
  for (Vertex v : w.members) {
    if (!t.valid_vertex(v)) return false;
    const int out = t.out_degree(v);
    const int in = t.in_degree(v);
    if (!RatioHolds(out, in, w.side, w.ratio)) return false;
    if (w.windowed && (in < w.center_m - w.window_halfwidth || in > w.center_m + w.window_halfwidth)) return false;
  }
  return true;
}

/// A C-nearly-regular subset of size at least n/10 (C = 4 by default): the
/// vertices whose degree ratio lies in [1, C], restricted to the larger side.
inline NearlyRegularWitness NearlyRegularSubset(const Tournament& t, int ratio = 4) {
  const int n = t.size();
  std::vector<Vertex> out_side, in_side;
  for (Vertex v = 0; v < n; ++v) {
    const int out = t.out_degree(v);
    const int in = n - 1 - out;
    if (RatioHolds(out, in, DegreeSide::kOutDominant, ratio)) out_side.push_back(v);
    if (RatioHolds(out, in, DegreeSide::kInDominant, ratio)) in_side.push_back(v);
  }
  NearlyRegularWitness w;
  w.ratio = ratio;
  const bool out_big = 5 * static_cast<int>(out_side.size()) >= n;
  const bool in_big = 5 * static_cast<int>(in_side.size()) >= n;
  bool take_out = out_side.size() >= in_side.size();
  if (out_big && in_big) take_out = true;
  w.side = take_out ? DegreeSide::kOutDominant : DegreeSide::kInDominant;
  w.members = VertexSet::FromUnique(take_out ? std::move(out_side) : std::move(in_side));
  w.small_instance = n < 10;
  w.meets_bound = 10 * static_cast<int>(w.members.size()) >= n;
  return w;
}

/// A (C, m, t)-nearly-regular subset of exactly t vertices: in-degrees of the
/// nearly-regular set are bucketed into [1 + 10t j, 1 + 10t (j+1)) and the
/// first fullest bucket is truncated to t. Throws DomainError unless 1 <= t <= n.
inline NearlyRegularWitness NearlyRegularWindowSubset(const Tournament& t, int size, int ratio = 4) {
  if (size < 1 || size > t.size()) throw DomainError("window size must lie in [1, n]");
  NearlyRegularWitness base = NearlyRegularSubset(t, ratio);
  const int width = 10 * size;
  std::map<int, std::vector<Vertex>> buckets;
  for (Vertex v : base.members) {
    const int d = t.in_degree(v);
    // Floor division keeps in-degree 0 in its own bucket below the first.
    const int j = (d - 1) >= 0 ? (d - 1) / width : -1;
    buckets[j].push_back(v);
  }
  const std::vector<Vertex>* best = nullptr;
  for (const auto& [j, vs] : buckets)
    if (!best || vs.size() > best->size()) best = &vs;
  NearlyRegularWitness w = base;
  w.windowed = true;
  w.window_halfwidth = width;
  std::vector<Vertex> chosen;
  if (best) chosen.assign(best->begin(), best->begin() + std::min<std::size_t>(best->size(), size));
  w.members = VertexSet::FromUnique(chosen);
  w.meets_bound = static_cast<int>(chosen.size()) == size;
  if (!chosen.empty()) {
    int lo = t.in_degree(chosen.front());
    int hi = lo;
    for (Vertex v : chosen) {
      lo = std::min(lo, t.in_degree(v));
      hi = std::max(hi, t.in_degree(v));
    }
    w.center_m = (lo + hi) / 2;
  }
  return w;
}

// ---------------------------------------------------------------------------

struct ChainWitness {
  std::vector<int> items;         // indices into the input, in chain order
  std::vector<bool> increasing;   // per ordering; the first is always true
};

/// Longest strictly increasing subsequence of `values`, as positions.
inline std::vector<int> LongestIncreasing(const std::vector<int>& values) {
  std::vector<int> tails;          // positions of the smallest tail per length
  std::vector<int> parent(values.size(), -1);
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    auto it = std::lower_bound(tails.begin(), tails.end(), values[i],
                               [&](int pos, int val) { return values[pos] < val; });
    const auto len = it - tails.begin();
    if (len > 0) parent[i] = tails[len - 1];
    if (it == tails.end()) tails.push_back(i); else *it = i;
  }
  std::vector<int> out;
  for (int p = tails.empty() ? -1 : tails.back(); p >= 0; p = parent[p]) out.push_back(p);
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::vector<int> LongestDecreasing(const std::vector<int>& values) {
  std::vector<int> neg(values.size());
  std::transform(values.begin(), values.end(), neg.begin(), [](int v) { return -v; });
  return LongestIncreasing(neg);
}

/// Subset of items forming an increasing chain in ordering 0 and a monotone
/// chain in every other ordering, of size at least n^(1/2^(l-1)).
/// `ranks[o][i]` is the position of item i in ordering o; each ranks[o] must
/// be a permutation of 0..n-1, otherwise DomainError.
inline ChainWitness MultiOrderMonotoneSubset(const std::vector<std::vector<int>>& ranks) {
  if (ranks.empty()) throw DomainError("at least one ordering is required");
  const std::size_t n = ranks.front().size();
  for (const auto& r : ranks) {
    if (r.size() != n) throw DomainError("orderings cover different item counts");
    std::vector<char> seen(n, 0);
    for (int x : r) {
      if (x < 0 || static_cast<std::size_t>(x) >= n || seen[x]) throw DomainError("ordering is not total over the items");
      seen[x] = 1;
    }
  }
  ChainWitness w;
  w.items.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.items[ranks[0][i]] = static_cast<int>(i);
  w.increasing.push_back(true);
  for (std::size_t o = 1; o < ranks.size(); ++o) {
    std::vector<int> values;
    values.reserve(w.items.size());
    for (int item : w.items) values.push_back(ranks[o][item]);
    auto inc = LongestIncreasing(values);
    auto dec = LongestDecreasing(values);
    const bool up = inc.size() >= dec.size();
    const auto& keep = up ? inc : dec;
    std::vector<int> next;
    next.reserve(keep.size());
    for (int pos : keep) next.push_back(w.items[pos]);
    w.items = std::move(next);
    w.increasing.push_back(up);
  }
  return w;
}

/// Comparator form: each comparator must be a strict total order on `items`.
template <typename Item, typename Less>
ChainWitness MultiOrderMonotoneSubset(const std::vector<Item>& items, const std::vector<Less>& orders) {
  std::vector<std::vector<int>> ranks;
  const int n = static_cast<int>(items.size());
  for (const auto& less : orders) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int a = 0; a < n; ++a) {
      if (less(items[a], items[a])) throw DomainError("ordering is not irreflexive");
      for (int b = a + 1; b < n; ++b)
        if (less(items[a], items[b]) == less(items[b], items[a])) throw DomainError("ordering is not total over the items");
    }
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return less(items[a], items[b]); });
    for (int i = 0; i + 1 < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!less(items[idx[i]], items[idx[j]])) throw DomainError("ordering is not transitive");
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[idx[i]] = i;
    ranks.push_back(std::move(rank));
  }
  return MultiOrderMonotoneSubset(ranks);
}

/// ceil(n^(1/2^(l-1))), computed without floating-point drift.
inline int ChainSizeFloor(int n, int orderings) {
  if (n <= 0) return 0;
  const double root = std::pow(static_cast<double>(n), 1.0 / std::pow(2.0, orderings - 1));
  int c = static_cast<int>(std::ceil(root - 1e-9));
  const auto power = [&](long long base) {
    long long r = base;
    for (int i = 1; i < orderings; ++i) {
      r = r * r;
      if (r > n) return r;
    }
    return r;
  };
  while (c > 1 && power(c - 1) >= n) --c;
  while (power(c) < n) ++c;
  return c;
}

}  // namespace tourlink
