#pragma once

// Brute-force reference answers. Nothing here calls the library algorithms;
// only Tournament::beats and size are used.

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tourlink/tournament.hpp"

namespace oracle {

using tourlink::Path;
using tourlink::Tournament;
using tourlink::Vertex;

// Strong connectivity of T restricted to alive vertices, by plain DFS both ways.
inline bool Strong(const Tournament& t, const std::vector<char>& alive) {
  const int n = t.size();
  int start = -1, count = 0;
  for (int v = 0; v < n; ++v)
    if (alive[v]) {
      if (start < 0) start = v;
      ++count;
    }
  if (count <= 1) return true;
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        if (!alive[v] || seen[v] || v == u) continue;
        if (dir == 0 ? t.beats(u, v) : t.beats(v, u)) {
          seen[v] = 1;
          ++reached;
          stack.push_back(v);
        }
      }
    }
    if (reached != count) return false;
  }
  return true;
}

// Largest k with n >= k+1 and T - S strong for every |S| < k.
inline int Connectivity(const Tournament& t) {
  const int n = t.size();
  if (n <= 1) return 0;
  for (int size = 0; size <= n - 2; ++size) {
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - size, pick.end(), 1);
    do {
      std::vector<char> alive(n);
      for (int v = 0; v < n; ++v) alive[v] = !pick[v];
      if (!Strong(t, alive)) return size;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return n - 1;
}

// Reachability from s to target inside alive.
inline bool Reaches(const Tournament& t, int s, int target, const std::vector<char>& alive) {
  std::vector<char> seen(t.size(), 0);
  std::vector<int> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == target) return true;
    for (int v = 0; v < t.size(); ++v)
      if (alive[v] && !seen[v] && v != u && t.beats(u, v)) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return false;
}

// Smallest set of internal vertices whose removal kills every s -> target path;
// requires no edge s -> target.
inline int LocalCut(const Tournament& t, int s, int target) {
  const int n = t.size();
  std::vector<int> others;
  for (int v = 0; v < n; ++v)
    if (v != s && v != target) others.push_back(v);
  const int m = static_cast<int>(others.size());
  for (int size = 0; size <= m; ++size) {
    std::vector<int> pick(m, 0);
    std::fill(pick.end() - size, pick.end(), 1);
    do {
      std::vector<char> alive(n, 1);
      for (int i = 0; i < m; ++i)
        if (pick[i]) alive[others[i]] = 0;
      if (!Reaches(t, s, target, alive)) return size;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return m;
}

// Every simple s -> target path avoiding `blocked`.
inline void AllPaths(const Tournament& t, int s, int target, std::vector<char> blocked,
                     const std::function<void(const Path&)>& emit) {
  Path cur{s};
  blocked[s] = 1;
  std::function<void(int)> go = [&](int u) {
    if (u == target) {
      emit(cur);
      return;
    }
    for (int v = 0; v < t.size(); ++v) {
      if (blocked[v] || !t.beats(u, v)) continue;
      blocked[v] = 1;
      cur.push_back(v);
      go(v);
      cur.pop_back();
      blocked[v] = 0;
    }
  };
  go(s);
}

// Linkage by enumerating a path for each pair in turn, other terminals blocked.
inline bool Linked(const Tournament& t, const std::vector<std::pair<int, int>>& pairs) {
  const int n = t.size();
  std::vector<char> used(n, 0);
  for (auto [x, y] : pairs) used[x] = used[y] = 1;
  std::function<bool(std::size_t)> route = [&](std::size_t i) -> bool {
    if (i == pairs.size()) return true;
    auto [x, y] = pairs[i];
    std::vector<char> blocked = used;
    blocked[y] = 0;
    bool found = false;
    AllPaths(t, x, y, blocked, [&](const Path& p) {
      if (found) return;
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 1;
      if (route(i + 1)) found = true;
      for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 0;
    });
    return found;
  };
  return route(0);
}

// Least total vertex count of `count` disjoint paths, each from a distinct
// source to a distinct target, avoiding `forbidden`; iterative deepening on
// the total. Nothing when no such system exists.
inline std::optional<int> MinSystemSize(const Tournament& t, const std::vector<int>& sources,
                                        const std::vector<int>& targets, const std::vector<int>& forbidden, int count) {
  const int n = t.size();
  std::vector<char> is_target(n, 0), base(n, 0);
  for (int v : targets) is_target[v] = 1;
  for (int v : forbidden) base[v] = 1;
  for (int limit = 2 * count; limit <= n; ++limit) {
    std::vector<char> used = base;
    for (int v : sources) used[v] = 1;
    bool found = false;
    // pick sources in increasing index order; each path grows by DFS.
    std::function<void(std::size_t, int, int)> choose;
    std::function<void(int, int, std::size_t, int)> extend = [&](int u, int spent, std::size_t next_src, int left) {
      if (found) return;
      if (is_target[u]) {
        choose(next_src, spent, left - 1);
        if (found) return;
      }
      if (spent + 2 * (left - 1) >= limit) return;
      for (int v = 0; v < n; ++v) {
        if (used[v] || !t.beats(u, v)) continue;
        used[v] = 1;
        extend(v, spent + 1, next_src, left);
        used[v] = 0;
        if (found) return;
      }
    };
    choose = [&](std::size_t from, int spent, int left) {
      if (found) return;
      if (left == 0) {
        found = spent <= limit;
        return;
      }
      for (std::size_t i = from; i < sources.size(); ++i) {
        if (spent + 2 * left > limit) return;
        extend(sources[i], spent + 1, i + 1, left);
        if (found) return;
      }
    };
    choose(0, 0, count);
    if (found) return limit;
  }
  return std::nullopt;
}

}  // namespace oracle
