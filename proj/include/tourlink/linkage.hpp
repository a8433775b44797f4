#pragma once

// Exact k-linkage decision at desk scale: backtracking over simple paths with
// reachability pruning, plus validation of proposed path systems.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tourlink/tournament.hpp"

namespace tourlink {

struct LinkageInstance {
  std::vector<std::pair<Vertex, Vertex>> pairs;

  int k() const { return static_cast<int>(pairs.size()); }
  VertexSet terminals() const {
    std::vector<Vertex> all;
    for (auto [x, y] : pairs) {
      all.push_back(x);
      all.push_back(y);
    }
    return VertexSet(std::move(all));
  }
};

/// Throws DomainError unless the instance has k >= 1 pairs over 2k distinct
/// in-range vertices.
inline void CheckInstance(const Tournament& t, const LinkageInstance& inst) {
  if (inst.pairs.empty()) throw DomainError("linkage instance needs at least one pair");
  std::vector<char> seen(t.size(), 0);
  for (auto [x, y] : inst.pairs) {
    for (Vertex v : {x, y}) {
      t.CheckVertex(v);
      if (seen[v]) throw DomainError("endpoint " + std::to_string(v) + " appears twice");
      seen[v] = 1;
    }
  }
}

enum class LinkStatus { kLinked, kNotLinked, kUnknown };

inline const char* ToString(LinkStatus s) {
  switch (s) {
    case LinkStatus::kLinked: return "linked";
    case LinkStatus::kNotLinked: return "not-linked";
    case LinkStatus::kUnknown: return "unknown";
  }
  return "?";
}

struct LinkageVerdict {
  LinkStatus status = LinkStatus::kUnknown;
  std::optional<std::vector<Path>> paths;  // path i runs pairs[i].first -> pairs[i].second
  std::int64_t nodes_explored = 0;
  std::string refutation;                  // root-level argument when one applies
};

struct PathCheck {
  bool ok = true;
  std::string violation;  // "count", "orientation", "disjointness" or "endpoints"
  std::string detail;
};

/// Checks the paths against the instance and reports the first violation.
inline PathCheck ValidatePathSystem(const Tournament& t, const LinkageInstance& inst,
                                    const std::vector<Path>& paths) {
  auto fail = [](std::string what, std::string detail) { return PathCheck{false, std::move(what), std::move(detail)}; };
  if (paths.size() != inst.pairs.size()) {
    return fail("count", "expected " + std::to_string(inst.pairs.size()) + " paths, got " + std::to_string(paths.size()));
  }
  std::vector<int> owner(t.size(), -1);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    if (p.empty()) return fail("endpoints", "path " + std::to_string(i) + " is empty");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!t.valid_vertex(p[j])) return fail("orientation", "path " + std::to_string(i) + " leaves the vertex range");
      if (j > 0 && !t.beats(p[j - 1], p[j])) {
        return fail("orientation", "path " + std::to_string(i) + " uses " + std::to_string(p[j - 1]) + "->" +
                                       std::to_string(p[j]) + ", which is not an edge");
      }
      if (owner[p[j]] >= 0) {
        return fail("disjointness", "vertex " + std::to_string(p[j]) + " used by paths " +
                                        std::to_string(owner[p[j]]) + " and " + std::to_string(i));
      }
      owner[p[j]] = static_cast<int>(i);
    }
    if (p.front() != inst.pairs[i].first || p.back() != inst.pairs[i].second) {
      return fail("endpoints", "path " + std::to_string(i) + " does not run " + std::to_string(inst.pairs[i].first) +
                                   " -> " + std::to_string(inst.pairs[i].second));
    }
  }
  return {};
}

namespace detail {

class LinkageSearch {
 public:
  LinkageSearch(const Tournament& t, const LinkageInstance& inst, std::int64_t budget)
      : t_(t), inst_(inst), budget_(budget), n_(t.size()), used_(n_, 0), terminal_owner_(n_, -1),
        routed_(inst.pairs.size()), done_(inst.pairs.size(), 0) {
    for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
      terminal_owner_[inst.pairs[i].first] = static_cast<int>(i);
      terminal_owner_[inst.pairs[i].second] = static_cast<int>(i);
    }
  }

  LinkageVerdict Run() {
    LinkageVerdict v;
    std::string why;
    if (!PairLevelFeasible(&why)) {
      v.status = LinkStatus::kNotLinked;
      v.refutation = why;
      v.nodes_explored = nodes_;
      return v;
    }
    const bool found = Solve();
    v.nodes_explored = nodes_;
    if (found) {
      v.status = LinkStatus::kLinked;
      v.paths = routed_;
    } else {
      v.status = exhausted_ ? LinkStatus::kUnknown : LinkStatus::kNotLinked;
    }
    return v;
  }

 private:
  // Vertex usable as part of the path for pair i.
  bool Allowed(Vertex v, int pair) const {
    return !used_[v] && (terminal_owner_[v] < 0 || terminal_owner_[v] == pair);
  }

  std::vector<char> Mask(int pair, Vertex skip = -1) const {
    std::vector<char> m(n_, 0);
    for (Vertex v = 0; v < n_; ++v) m[v] = Allowed(v, pair) && v != skip;
    return m;
  }

  // Necessary conditions over all unrouted pairs: each pair connected in its
  // residual graph, no vertex mandatory for two pairs, and distinct
  // representatives for the first or last interior vertex of every pair that
  // cannot use a direct edge.
  bool PairLevelFeasible(std::string* why) {
    const int k = static_cast<int>(inst_.pairs.size());
    std::vector<int> mandatory_owner(n_, -1);
    std::vector<std::vector<Vertex>> first_choice, last_choice;
    std::vector<int> needy;
    for (int i = 0; i < k; ++i) {
      if (done_[i]) continue;
      auto [x, y] = inst_.pairs[i];
      auto mask = Mask(i);
      auto reach = Reachable(t_, x, mask);
      if (!reach[y]) {
        if (why) *why = "pair " + std::to_string(i) + " has no path in the residual graph";
        return false;
      }
      if (t_.beats(x, y)) continue;
      // Mandatory vertices: removing w disconnects the pair.
      for (Vertex w = 0; w < n_; ++w) {
        if (!reach[w] || w == x || w == y || !mask[w]) continue;
        auto without = mask;
        without[w] = 0;
        if (Reachable(t_, x, without)[y]) continue;
        if (mandatory_owner[w] >= 0) {
          if (why) {
            *why = "vertex " + std::to_string(w) + " lies on every path of pairs " + std::to_string(mandatory_owner[w]) +
                   " and " + std::to_string(i);
          }
          return false;
        }
        mandatory_owner[w] = i;
      }
      std::vector<Vertex> f, l;
      for (Vertex w = 0; w < n_; ++w) {
        if (w == x || w == y || !mask[w]) continue;
        if (t_.beats(x, w)) f.push_back(w);
        if (t_.beats(w, y)) l.push_back(w);
      }
      first_choice.push_back(std::move(f));
      last_choice.push_back(std::move(l));
      needy.push_back(i);
    }
    if (needy.size() <= 1) return true;
    std::vector<std::vector<Vertex>> smaller, firsts = first_choice, lasts = last_choice;
    for (std::size_t j = 0; j < needy.size(); ++j) {
      smaller.push_back(first_choice[j].size() <= last_choice[j].size() ? first_choice[j] : last_choice[j]);
    }
    for (const auto* family : {&smaller, &firsts, &lasts}) {
      if (!HasSystemOfRepresentatives(*family)) {
        if (why) {
          *why = std::to_string(needy.size()) +
                 " pairs need distinct interior neighbours of their endpoints but no such choice exists";
        }
        return false;
      }
    }
    return true;
  }

  bool HasSystemOfRepresentatives(const std::vector<std::vector<Vertex>>& sets) const {
    std::vector<int> match(n_, -1);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::vector<char> visited(n_, 0);
      if (!Augment(sets, static_cast<int>(i), match, visited)) return false;
    }
    return true;
  }

  static bool Augment(const std::vector<std::vector<Vertex>>& sets, int i, std::vector<int>& match,
                      std::vector<char>& visited) {
    for (Vertex w : sets[i]) {
      if (visited[w]) continue;
      visited[w] = 1;
      if (match[w] < 0 || Augment(sets, match[w], match, visited)) {
        match[w] = i;
        return true;
      }
    }
    return false;
  }

  bool Tick() {
    if (++nodes_ > budget_) exhausted_ = true;
    return !exhausted_;
  }

  // Picks the unrouted pair with the longest residual shortest path.
  int PickPair() const {
    int best = -1;
    std::size_t best_len = 0;
    for (int i = 0; i < static_cast<int>(inst_.pairs.size()); ++i) {
      if (done_[i]) continue;
      auto p = ShortestPath(t_, inst_.pairs[i].first, inst_.pairs[i].second, Mask(i));
      if (best < 0 || p.size() > best_len) {
        best = i;
        best_len = p.size();
      }
    }
    return best;
  }

  bool Solve() {
    if (!Tick()) return false;
    const int pair = PickPair();
    if (pair < 0) return true;
    if (!PairLevelFeasible(nullptr)) return false;
    auto [x, y] = inst_.pairs[pair];
    Path path{x};
    used_[x] = 1;
    const bool ok = Extend(pair, path, y);
    if (!ok) used_[x] = 0;
    return ok;
  }

  bool Extend(int pair, Path& path, Vertex y) {
    const Vertex head = path.back();
    if (head == y) {
      done_[pair] = 1;
      routed_[pair] = path;
      if (Solve()) return true;
      done_[pair] = 0;
      return false;
    }
    if (!Tick()) return false;
    // The target must stay reachable from the head.
    auto mask = Mask(pair);
    mask[head] = 1;
    if (!Reachable(t_, head, mask)[y]) return false;
    // Direct hop first, then other out-neighbours in id order.
    std::vector<Vertex> order;
    if (t_.beats(head, y)) order.push_back(y);
    for (Vertex w = 0; w < n_; ++w)
      if (w != y && w != head && t_.beats(head, w) && Allowed(w, pair)) order.push_back(w);
    for (Vertex w : order) {
      used_[w] = 1;
      path.push_back(w);
      if (Extend(pair, path, y)) return true;
      path.pop_back();
      used_[w] = 0;
      if (exhausted_) return false;
    }
    return false;
  }

  const Tournament& t_;
  const LinkageInstance& inst_;
  std::int64_t budget_;
  int n_;
  std::vector<char> used_;
  std::vector<int> terminal_owner_;
  std::vector<Path> routed_;
  std::vector<char> done_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

inline constexpr std::int64_t kDefaultLinkageBudget = 100'000'000;

/// Complete search for vertex-disjoint paths x_i -> y_i. Returns unknown only
/// when the node budget runs out.
inline LinkageVerdict FindLinkageExact(const Tournament& t, const LinkageInstance& inst,
                                       std::int64_t budget = kDefaultLinkageBudget) {
  CheckInstance(t, inst);
  detail::LinkageSearch search(t, inst, budget);
  return search.Run();
}

struct LinkednessOptions {
  enum class Mode { kExhaustive, kSampled } mode = Mode::kExhaustive;
  int trials = 100;
  std::uint64_t seed = 0;
  std::int64_t budget = kDefaultLinkageBudget;
};

struct LinkednessVerdict {
  int k = 0;
  bool linked = false;
  bool complete = true;  // false when some instance ended as unknown
  std::string reason;
  std::optional<LinkageInstance> witness;
  std::int64_t instances_checked = 0;
  std::int64_t nodes_explored = 0;
};

/// Decides k-linkedness over all endpoint configurations, or over `trials`
/// random ones. The first unlinked instance found is returned as a witness.
inline LinkednessVerdict IsKLinked(const Tournament& t, int k, const LinkednessOptions& opt = {}) {
  LinkednessVerdict v;
  v.k = k;
  const int n = t.size();
  if (k < 1) throw DomainError("k must be positive");
  if (n < 2 * k) {
    v.reason = "too few vertices";
    return v;
  }
  bool failed = false;
  auto check = [&](const LinkageInstance& inst) {
    auto r = FindLinkageExact(t, inst, opt.budget);
    ++v.instances_checked;
    v.nodes_explored += r.nodes_explored;
    if (r.status == LinkStatus::kLinked) return true;
    if (r.status == LinkStatus::kUnknown) {
      v.complete = false;
      return true;
    }
    failed = true;
    v.witness = inst;
    v.reason = "instance not linked";
    return false;
  };

  if (opt.mode == LinkednessOptions::Mode::kSampled) {
    Rng rng(opt.seed);
    std::vector<Vertex> ids(n);
    for (int trial = 0; trial < opt.trials; ++trial) {
      std::iota(ids.begin(), ids.end(), 0);
      std::shuffle(ids.begin(), ids.end(), rng);
      LinkageInstance inst;
      for (int i = 0; i < k; ++i) inst.pairs.emplace_back(ids[i], ids[k + i]);
      if (!check(inst)) break;
    }
  } else {
    // Sources as increasing k-subsets, sinks as ordered injective choices.
    std::vector<Vertex> xs;
    std::vector<char> taken(n, 0);
    std::vector<Vertex> ys;
    std::function<bool(int)> choose_y = [&](int i) -> bool {
      if (i == k) {
        LinkageInstance inst;
        for (int j = 0; j < k; ++j) inst.pairs.emplace_back(xs[j], ys[j]);
        return check(inst);
      }
      for (Vertex y = 0; y < n; ++y) {
        if (taken[y]) continue;
        taken[y] = 1;
        ys.push_back(y);
        const bool go = choose_y(i + 1);
        ys.pop_back();
        taken[y] = 0;
        if (!go) return false;
      }
      return true;
    };
    std::function<bool(Vertex)> choose_x = [&](Vertex from) -> bool {
      if (static_cast<int>(xs.size()) == k) return choose_y(0);
      for (Vertex x = from; x < n; ++x) {
        taken[x] = 1;
        xs.push_back(x);
        const bool go = choose_x(x + 1);
        xs.pop_back();
        taken[x] = 0;
        if (!go) return false;
      }
      return true;
    };
    choose_x(0);
  }
  // Budget-exhausted instances leave the verdict open rather than positive.
  v.linked = !failed && v.complete;
  if (!failed && !v.complete) v.reason = "some instances exhausted the budget";
  return v;
}

}  // namespace tourlink
