#pragma once

// Greedy T2 subdivisions of the complete digraph, the obstruction they leave
// behind when they fail, and the recursive construction of a (k, l)-good family.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tourlink/chains.hpp"
#include "tourlink/tournament.hpp"

namespace tourlink {

/// Branch set plus one connector path of length <= 3 per ordered branch pair.
struct Subdivision {
  VertexSet branch;
  std::map<std::pair<Vertex, Vertex>, Path> connector;

  VertexSet interiors() const {
    std::vector<Vertex> r;
    for (const auto& [ab, p] : connector)
      for (std::size_t i = 1; i + 1 < p.size(); ++i) r.push_back(p[i]);
    return VertexSet(std::move(r));
  }
  VertexSet vertices() const { return branch.united(interiors()); }
  const Path& path(Vertex a, Vertex b) const { return connector.at({a, b}); }
};

/// First violated subdivision invariant, or empty.
inline std::string AuditSubdivision(const Tournament& t, const Subdivision& s) {
  std::vector<char> interior(t.size(), 0);
  for (Vertex a : s.branch)
    for (Vertex b : s.branch) {
      if (a == b) continue;
      auto it = s.connector.find({a, b});
      if (it == s.connector.end()) return "missing connector " + std::to_string(a) + "->" + std::to_string(b);
      const Path& p = it->second;
      if (p.size() < 2 || p.front() != a || p.back() != b) return "connector endpoints wrong";
      if (p.size() > 4) return "connector longer than 3";
      if (!IsPath(t, p)) return "connector is not a path";
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (s.branch.contains(p[i])) return "connector passes through a branch vertex";
        if (interior[p[i]]) return "connectors share interior vertex " + std::to_string(p[i]);
        interior[p[i]] = 1;
      }
    }
  if (s.connector.size() != s.branch.size() * (s.branch.size() - 1)) return "extra connectors";
  return {};
}

/// Certificate that the greedy embedding got stuck at the ordered pair (x, y).
struct Obstruction {
  Vertex x = -1;
  Vertex y = -1;
  VertexSet used;   // branch set, forbidden vertices and connector interiors so far
  VertexSet X_set;  // N+(x) minus used
  VertexSet Y_set;  // N-(y) minus used
  int partial_interiors = 0;
};

/// First violated obstruction invariant, or empty.
inline std::string AuditObstruction(const Tournament& t, const Obstruction& o) {
  if (!t.valid_vertex(o.x) || !t.valid_vertex(o.y) || o.x == o.y) return "bad obstruction pair";
  if (t.beats(o.x, o.y)) return "direct edge x->y exists";
  if (!(o.X_set == t.out_neighbors(o.x).minus(o.used))) return "X set is not N+(x) minus used";
  if (!(o.Y_set == t.in_neighbors(o.y).minus(o.used))) return "Y set is not N-(y) minus used";
  for (Vertex w : t.out_neighbors(o.x).intersected(t.in_neighbors(o.y)))
    if (!o.used.contains(w)) return "common neighbour " + std::to_string(w) + " is unused";
  for (Vertex a : o.X_set)
    for (Vertex b : o.Y_set)
      if (a != b && t.beats(a, b)) return "edge " + std::to_string(a) + "->" + std::to_string(b) + " goes from X to Y";
  return {};
}

using EmbedResult = std::variant<Subdivision, Obstruction>;

/// Greedy T2 embedding on branch set B avoiding `forbidden`. Ordered pairs are
/// handled lexicographically; each takes the first of: direct edge, path via
/// the lowest free w, path via the lexicographically first free (w1, w2).
/// Vertices of `prefer` are tried before all others.
inline EmbedResult GreedyEmbedT2(const Tournament& t, const VertexSet& branch, const VertexSet& forbidden,
                                 const VertexSet& prefer = {}) {
  if (branch.size() < 2) throw DomainError("branch set needs at least two vertices");
  if (!branch.disjoint(forbidden)) throw DomainError("branch set meets the forbidden set");
  for (Vertex v : branch) t.CheckVertex(v);
  const int n = t.size();
  std::vector<char> used(n, 0);
  for (Vertex v : branch) used[v] = 1;
  for (Vertex v : forbidden) {
    t.CheckVertex(v);
    used[v] = 1;
  }
  std::vector<Vertex> order;
  for (Vertex v : prefer)
    if (t.valid_vertex(v)) order.push_back(v);
  for (Vertex v = 0; v < n; ++v)
    if (!prefer.contains(v)) order.push_back(v);

  Subdivision sub;
  sub.branch = branch;
  int interiors = 0;
  for (Vertex a : branch)
    for (Vertex b : branch) {
      if (a == b) continue;
      Path found;
      if (t.beats(a, b)) {
        found = {a, b};
      } else {
        for (Vertex w : order)
          if (!used[w] && t.beats(a, w) && t.beats(w, b)) {
            found = {a, w, b};
            break;
          }
        for (std::size_t i = 0; found.empty() && i < order.size(); ++i) {
          const Vertex w1 = order[i];
          if (used[w1] || !t.beats(a, w1)) continue;
          for (Vertex w2 : order)
            if (w2 != w1 && !used[w2] && t.beats(w1, w2) && t.beats(w2, b)) {
              found = {a, w1, w2, b};
              break;
            }
        }
      }
      if (found.empty()) {
        Obstruction o;
        o.x = a;
        o.y = b;
        std::vector<Vertex> u;
        for (Vertex v = 0; v < n; ++v)
          if (used[v]) u.push_back(v);
        o.used = VertexSet::FromUnique(std::move(u));
        o.X_set = t.out_neighbors(a).minus(o.used);
        o.Y_set = t.in_neighbors(b).minus(o.used);
        o.partial_interiors = interiors;
        return o;
      }
      for (std::size_t i = 1; i + 1 < found.size(); ++i) {
        used[found[i]] = 1;
        ++interiors;
      }
      sub.connector[{a, b}] = std::move(found);
    }
  return sub;
}

// ---------------------------------------------------------------------------

struct PartitionResult {
  bool ok = false;
  std::string failure;           // set when !ok
  std::vector<int> I;            // indices whose W' lies in Y_set
  std::vector<int> J;            // indices whose W' lies in X_set
  std::vector<VertexSet> reduced;  // W'_i
};

/// Splits the blocks along an obstruction so that every W'_i (i in I) lies in
/// Y_set and every W'_j (j in J) in X_set; Y_set -> X_set gives W'_I -> W'_J.
/// Block i may join I when |W_i & Y| >= |W_i|/10 and J when |W_i & X| >= |W_i|/10;
/// blocks eligible for both are spread to keep |I| and |J| as equal as possible.
inline PartitionResult PartitionByObstruction(const Tournament& t, const std::vector<VertexSet>& blocks,
                                              const Obstruction& o) {
  if (auto bad = AuditObstruction(t, o); !bad.empty()) throw DomainError("obstruction audit failed: " + bad);
  PartitionResult r;
  const int k = static_cast<int>(blocks.size());
  std::vector<int> both;
  std::vector<int> side(k, -1);  // 0 = I, 1 = J
  for (int i = 0; i < k; ++i) {
    const auto in_y = blocks[i].intersected(o.Y_set).size();
    const auto in_x = blocks[i].intersected(o.X_set).size();
    const bool y_ok = in_y > 0 && 10 * in_y >= blocks[i].size();
    const bool x_ok = in_x > 0 && 10 * in_x >= blocks[i].size();
    if (y_ok && x_ok) both.push_back(i);
    else if (y_ok) side[i] = 0;
    else if (x_ok) side[i] = 1;
    else {
      r.failure = "block " + std::to_string(i) + " meets neither side of the obstruction in a tenth of its vertices";
      return r;
    }
  }
  int count_i = static_cast<int>(std::count(side.begin(), side.end(), 0));
  int count_j = static_cast<int>(std::count(side.begin(), side.end(), 1));
  for (int i : both) {
    if (count_i <= count_j) {
      side[i] = 0;
      ++count_i;
    } else {
      side[i] = 1;
      ++count_j;
    }
  }
  r.reduced.resize(k);
  for (int i = 0; i < k; ++i) {
    if (side[i] == 0) {
      r.I.push_back(i);
      r.reduced[i] = blocks[i].intersected(o.Y_set);
    } else {
      r.J.push_back(i);
      r.reduced[i] = blocks[i].intersected(o.X_set);
    }
  }
  if (r.I.empty() || r.J.empty()) {
    r.failure = "partition leaves one side empty";
    return r;
  }
  r.ok = true;
  return r;
}

// ---------------------------------------------------------------------------

enum class SetLabel { kSubdivision, kNonSubdivision };

inline const char* ToString(SetLabel l) { return l == SetLabel::kSubdivision ? "subdivision" : "non-subdivision"; }

struct GoodFamily {
  std::vector<VertexSet> sets;
  std::vector<SetLabel> labels;
  std::map<int, Subdivision> subdivisions;
  // For non-subdivision pairs i < j: true when S_i -> S_j, false when S_j -> S_i.
  std::map<std::pair<int, int>, bool> orientation;

  int k() const { return static_cast<int>(sets.size()); }
  bool is_subdivision(int i) const { return labels[i] == SetLabel::kSubdivision; }
  /// True when S_i -> S_j is recorded for the non-subdivision pair (i, j).
  bool dominates(int i, int j) const {
    return i < j ? orientation.at({i, j}) : !orientation.at({j, i});
  }
};

struct GoodFamilyConfig {
  int ell = 8;
  std::int64_t w_size = 64;  // saturates for paper-scale values
  int ns_size = 48;

  /// Desk-scale defaults for k: l = max(2k+4, 8), w = max(4l^2, 64), ns = 12k^2.
  static GoodFamilyConfig Desk(int k) {
    GoodFamilyConfig c;
    c.ell = std::max(2 * k + 4, 8);
    c.w_size = std::max<std::int64_t>(4LL * c.ell * c.ell, 64);
    c.ns_size = 12 * k * k;
    return c;
  }
  /// Full-strength block size 12 k^22 l^2, saturating at the int64 maximum.
  static std::int64_t PaperWSize(int k, int ell) {
    long double v = 12.0L * static_cast<long double>(ell) * ell;
    for (int i = 0; i < 22; ++i) v *= k;
    const auto cap = static_cast<long double>(std::numeric_limits<std::int64_t>::max());
    return v >= cap ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(v);
  }
};

struct GoodFamilyStats {
  int subdivisions_embedded = 0;
  int obstructions = 0;
  int max_removed_per_subdivision = 0;  // connector interiors of one subdivision
};

struct GoodFamilyBuild {
  std::optional<GoodFamily> family;
  std::string failure;  // first unmet precondition when no family is returned
  GoodFamilyStats stats;
};

/// First violated good-family invariant relative to the blocks and config, or empty.
inline std::string AuditGoodFamily(const Tournament& t, const GoodFamily& f, const std::vector<VertexSet>& blocks,
                                   const GoodFamilyConfig& cfg) {
  const int k = f.k();
  if (static_cast<int>(blocks.size()) != k || static_cast<int>(f.labels.size()) != k) return "family size mismatch";
  std::vector<int> owner(t.size(), -1);
  for (int i = 0; i < k; ++i) {
    if (f.sets[i].empty()) return "set " + std::to_string(i) + " is empty";
    if (f.sets[i].minus(blocks[i]).size()) return "set " + std::to_string(i) + " leaves its block";
    for (Vertex v : f.sets[i]) {
      if (owner[v] >= 0) return "sets " + std::to_string(owner[v]) + " and " + std::to_string(i) + " overlap";
      owner[v] = i;
    }
  }
  std::vector<int> sub_owner(t.size(), -1);
  for (int i = 0; i < k; ++i) {
    if (f.is_subdivision(i)) {
      auto it = f.subdivisions.find(i);
      if (it == f.subdivisions.end()) return "set " + std::to_string(i) + " has no subdivision";
      const Subdivision& s = it->second;
      if (!(s.branch == f.sets[i])) return "set " + std::to_string(i) + " differs from its branch set";
      if (static_cast<int>(s.branch.size()) != cfg.ell) return "subdivision " + std::to_string(i) + " has wrong order";
      if (auto bad = AuditSubdivision(t, s); !bad.empty()) return "subdivision " + std::to_string(i) + ": " + bad;
      for (Vertex v : s.vertices()) {
        if (sub_owner[v] >= 0) return "subdivisions " + std::to_string(sub_owner[v]) + " and " + std::to_string(i) + " meet";
        sub_owner[v] = i;
        if (owner[v] >= 0 && owner[v] != i) return "subdivision " + std::to_string(i) + " meets set " + std::to_string(owner[v]);
      }
    } else {
      if (f.subdivisions.count(i)) return "non-subdivision set " + std::to_string(i) + " carries a subdivision";
      if (static_cast<int>(f.sets[i].size()) != cfg.ns_size) return "non-subdivision set " + std::to_string(i) + " has wrong size";
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (f.is_subdivision(i) || f.is_subdivision(j)) continue;
      auto it = f.orientation.find({i, j});
      if (it == f.orientation.end()) return "orientation of " + std::to_string(i) + "," + std::to_string(j) + " missing";
      const bool ok = it->second ? t.dominates(f.sets[i], f.sets[j]) : t.dominates(f.sets[j], f.sets[i]);
      if (!ok) return "sets " + std::to_string(i) + " and " + std::to_string(j) + " are not one-way";
    }
  return {};
}

namespace detail {

struct FamilyBuilder {
  const Tournament& t0;
  const GoodFamilyConfig& cfg;
  GoodFamily out;
  GoodFamilyStats stats;
  std::string failure;

  // Builds sets for `index` (original block ids) from the current blocks.
  bool Recurse(const std::vector<int>& index, std::vector<VertexSet> blocks) {
    const int k = static_cast<int>(index.size());
    if (k == 1) {
      if (static_cast<int>(blocks[0].size()) < cfg.ns_size) {
        failure = "block " + std::to_string(index[0]) + " shrank to " + std::to_string(blocks[0].size()) +
                  " vertices, below the non-subdivision size " + std::to_string(cfg.ns_size);
        return false;
      }
      out.sets[index[0]] = blocks[0].first(cfg.ns_size);
      out.labels[index[0]] = SetLabel::kNonSubdivision;
      return true;
    }
    VertexSet all;
    for (const auto& b : blocks) all = all.united(b);
    const auto sub = Induced(t0, all);
    const int want = k * cfg.ell;
    if (sub.tournament.size() < want) {
      failure = "only " + std::to_string(sub.tournament.size()) + " vertices left for a window of " + std::to_string(want);
      return false;
    }
    auto window = NearlyRegularWindowSubset(sub.tournament, want);
    const VertexSet a = sub.to_parent_set(window.members);
    int home = -1;
    std::size_t best = 0;
    for (int i = 0; i < k; ++i) {
      const auto c = blocks[i].intersected(a).size();
      if (c > best) {
        best = c;
        home = i;
      }
    }
    if (home < 0 || static_cast<int>(best) < cfg.ell) {
      failure = "no block holds " + std::to_string(cfg.ell) + " vertices of the nearly-regular window";
      return false;
    }
    const VertexSet branch = blocks[home].intersected(a).first(cfg.ell);
    auto result = GreedyEmbedT2(sub.tournament, sub.to_local_set(branch), {}, sub.to_local_set(blocks[home]));
    if (auto* s = std::get_if<Subdivision>(&result)) {
      Subdivision global;
      global.branch = branch;
      for (const auto& [ab, p] : s->connector)
        global.connector[{sub.parent(ab.first), sub.parent(ab.second)}] = sub.to_parent_path(p);
      const VertexSet removed = global.interiors();
      ++stats.subdivisions_embedded;
      stats.max_removed_per_subdivision = std::max(stats.max_removed_per_subdivision, static_cast<int>(removed.size()));
      out.sets[index[home]] = branch;
      out.labels[index[home]] = SetLabel::kSubdivision;
      out.subdivisions[index[home]] = std::move(global);
      std::vector<int> rest_index;
      std::vector<VertexSet> rest;
      for (int i = 0; i < k; ++i) {
        if (i == home) continue;
        rest_index.push_back(index[i]);
        rest.push_back(blocks[i].minus(removed));
      }
      return Recurse(rest_index, std::move(rest));
    }
    const Obstruction& local = std::get<Obstruction>(result);
    ++stats.obstructions;
    std::vector<VertexSet> local_blocks;
    for (const auto& b : blocks) local_blocks.push_back(sub.to_local_set(b));
    auto part = PartitionByObstruction(sub.tournament, local_blocks, local);
    if (!part.ok) {
      failure = part.failure;
      return false;
    }
    std::vector<int> i_index, j_index;
    std::vector<VertexSet> i_blocks, j_blocks;
    for (int i : part.I) {
      i_index.push_back(index[i]);
      i_blocks.push_back(sub.to_parent_set(part.reduced[i]));
    }
    for (int j : part.J) {
      j_index.push_back(index[j]);
      j_blocks.push_back(sub.to_parent_set(part.reduced[j]));
    }
    return Recurse(i_index, std::move(i_blocks)) && Recurse(j_index, std::move(j_blocks));
  }
};

}  // namespace detail

/// Recursive (k, l)-good family with S_i inside blocks[i]. Blocks are first cut
/// to cfg.w_size vertices; any unmet size condition along the way is reported
/// in `failure` instead of returning a family.
inline GoodFamilyBuild BuildGoodFamily(const Tournament& t, const std::vector<VertexSet>& blocks,
                                       const GoodFamilyConfig& cfg) {
  GoodFamilyBuild r;
  const int k = static_cast<int>(blocks.size());
  if (k < 1) throw DomainError("at least one block is required");
  if (cfg.ell < 2) throw DomainError("subdivision order must be at least 2");
  std::vector<char> seen(t.size(), 0);
  for (int i = 0; i < k; ++i)
    for (Vertex v : blocks[i]) {
      t.CheckVertex(v);
      if (seen[v]) throw DomainError("blocks overlap at vertex " + std::to_string(v));
      seen[v] = 1;
    }
  std::vector<VertexSet> cut;
  for (int i = 0; i < k; ++i) {
    if (static_cast<std::int64_t>(blocks[i].size()) < cfg.w_size) {
      r.failure = "block " + std::to_string(i) + " has " + std::to_string(blocks[i].size()) + " vertices, fewer than " +
                  std::to_string(cfg.w_size);
      return r;
    }
    cut.push_back(blocks[i].first(static_cast<std::size_t>(cfg.w_size)));
  }
  detail::FamilyBuilder b{t, cfg, {}, {}, {}};
  b.out.sets.resize(k);
  b.out.labels.assign(k, SetLabel::kNonSubdivision);
  std::vector<int> index(k);
  for (int i = 0; i < k; ++i) index[i] = i;
  const bool ok = b.Recurse(index, cut);
  r.stats = b.stats;
  if (!ok) {
    r.failure = b.failure;
    return r;
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (b.out.is_subdivision(i) || b.out.is_subdivision(j)) continue;
      if (t.dominates(b.out.sets[i], b.out.sets[j])) {
        b.out.orientation[{i, j}] = true;
      } else if (t.dominates(b.out.sets[j], b.out.sets[i])) {
        b.out.orientation[{i, j}] = false;
      } else {
        r.failure = "non-subdivision sets " + std::to_string(i) + " and " + std::to_string(j) + " are not one-way";
        return r;
      }
    }
  r.family = std::move(b.out);
  return r;
}

}  // namespace tourlink
