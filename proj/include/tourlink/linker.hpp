#pragma once

// Constructive k-linkage pipeline: carve out-neighbourhood blocks, build a good
// family on them, order it through the auxiliary digraph, route a minimal
// Menger system, free vertices in the non-subdivision sets and assemble the
// final paths. Every stage either succeeds with audited output or raises a
// structured failure, after which the exact oracle may take over.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tourlink/chains.hpp"
#include "tourlink/flow.hpp"
#include "tourlink/good_family.hpp"
#include "tourlink/linkage.hpp"
#include "tourlink/tournament.hpp"

namespace tourlink {

enum class Fallback { kExact, kNone };

struct LinkerConfig {
  GoodFamilyConfig family;
  int free_threshold = 20;
  std::int64_t bound_subdiv = 80'000;
  std::int64_t bound_paths = 160'000'000'000'000LL;
  Fallback fallback = Fallback::kExact;
  std::int64_t budget = kDefaultLinkageBudget;

  /// Desk-scale family constants with the remaining thresholds at their
  /// theoretical values 5k^2, 10^4 k^3 and 10^13 k^4.
  static LinkerConfig Desk(int k) {
    LinkerConfig c;
    c.family = GoodFamilyConfig::Desk(k);
    c.free_threshold = 5 * k * k;
    c.bound_subdiv = 10'000LL * k * k * k;
    c.bound_paths = 10'000'000'000'000LL * k * k * k * k;
    return c;
  }
  /// Like Desk but with the full block size 12 k^22 l^2.
  static LinkerConfig Paper(int k) {
    LinkerConfig c = Desk(k);
    c.family.w_size = GoodFamilyConfig::PaperWSize(k, c.family.ell);
    return c;
  }
};

struct StageFailure {
  std::string stage;
  std::string detail;
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& detail)
      : std::runtime_error(stage + ": " + detail), failure_{std::move(stage), detail} {}
  const StageFailure& failure() const { return failure_; }

 private:
  StageFailure failure_;
};

struct TraceEntry {
  std::string stage;
  std::string outcome;  // "ok", "failed", "skipped" or a case tag
  std::vector<std::pair<std::string, std::int64_t>> counts;
  std::string note;
};

// ---------------------------------------------------------------------------
// Auxiliary digraph on the family indices.

struct AuxiliaryDigraph {
  int k = 0;
  std::vector<std::vector<char>> adj;  // adj[i][j]: edge i -> j
  std::vector<SetLabel> labels;

  bool edge(int i, int j) const { return adj[i][j] != 0; }
};

namespace detail {

// At least |a|/2 vertices of `a` have at least |b|/2 out-neighbours (or
// in-neighbours) in `b`.
inline bool HalfHaveHalf(const Tournament& t, const VertexSet& a, const VertexSet& b, bool outward) {
  int qualifying = 0;
  for (Vertex v : a) {
    const int d = outward ? t.out_degree_into(v, b) : t.in_degree_from(v, b);
    if (2 * d >= static_cast<int>(b.size())) ++qualifying;
  }
  return 2 * qualifying >= static_cast<int>(a.size());
}

}  // namespace detail

/// Edges between family indices by the three rules: domination for two
/// non-subdivision sets, majority out- or in-degree for a mixed pair, and
/// majority out-degree in each direction for two subdivision sets.
/// Throws DomainError when some pair ends up with no edge.
inline AuxiliaryDigraph BuildAuxDigraph(const Tournament& t, const GoodFamily& f,
                                        const std::vector<VertexSet>* sets_override = nullptr) {
  const auto& sets = sets_override ? *sets_override : f.sets;
  AuxiliaryDigraph d;
  d.k = f.k();
  d.labels = f.labels;
  d.adj.assign(d.k, std::vector<char>(d.k, 0));
  for (int i = 0; i < d.k; ++i)
    for (int j = i + 1; j < d.k; ++j) {
      const bool si = f.is_subdivision(i);
      const bool sj = f.is_subdivision(j);
      if (!si && !sj) {
        if (t.dominates(sets[i], sets[j])) d.adj[i][j] = 1;
        else if (t.dominates(sets[j], sets[i])) d.adj[j][i] = 1;
        else throw DomainError("corrupt family: sets " + std::to_string(i) + " and " + std::to_string(j) + " are not one-way");
      } else if (si && sj) {
        if (detail::HalfHaveHalf(t, sets[i], sets[j], true)) d.adj[i][j] = 1;
        if (detail::HalfHaveHalf(t, sets[j], sets[i], true)) d.adj[j][i] = 1;
      } else {
        const int ns = si ? j : i;
        const int sub = si ? i : j;
        if (detail::HalfHaveHalf(t, sets[ns], sets[sub], true)) d.adj[ns][sub] = 1;
        if (detail::HalfHaveHalf(t, sets[ns], sets[sub], false)) d.adj[sub][ns] = 1;
      }
      if (!d.adj[i][j] && !d.adj[j][i]) {
        throw DomainError("auxiliary digraph has no edge between " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
  return d;
}

/// Hamiltonian path through `vertices` of a semicomplete digraph, by insertion.
inline std::vector<int> HamiltonianPathSemicomplete(const AuxiliaryDigraph& d, const std::vector<int>& vertices) {
  std::vector<int> path;
  for (int v : vertices) {
    if (path.empty() || d.edge(v, path.front())) {
      path.insert(path.begin(), v);
      continue;
    }
    if (d.edge(path.back(), v)) {
      path.push_back(v);
      continue;
    }
    bool placed = false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (d.edge(path[i], v) && d.edge(v, path[i + 1])) {
        path.insert(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, v);
        placed = true;
        break;
      }
    if (!placed) throw DomainError("digraph is not semicomplete");
  }
  return path;
}

// ---------------------------------------------------------------------------

enum class OriginCase {
  kNonSubdivisionOnly,  // no subdivision sets: O in ter(P^ns)
  kSubdivisionOnly,     // no non-subdivision sets: O in ter(P^s), no special vertex
  kTailOfNonSubdivision,  // i_r -> j_t in H: O in S_{j_t}
  kTailOfSubdivision,     // j_t -> i_r in H: O in S_{i_r}
};

inline const char* ToString(OriginCase c) {
  switch (c) {
    case OriginCase::kNonSubdivisionOnly: return "ns-only";
    case OriginCase::kSubdivisionOnly: return "s-only";
    case OriginCase::kTailOfNonSubdivision: return "case-1";
    case OriginCase::kTailOfSubdivision: return "case-2";
  }
  return "?";
}

struct LinkerState {
  GoodFamily family;
  std::vector<VertexSet> sets;  // family sets after the tail discard
  std::vector<int> ps_order;
  std::vector<int> pns_order;
  OriginCase origin_case = OriginCase::kNonSubdivisionOnly;
  std::string discard_rule;     // "in-neighbours", "out-neighbours" or "none"
  int discarded = 0;
  VertexSet origin;
  std::optional<Vertex> special;
  PathSystem system;

  /// True when O lies in the last non-subdivision set.
  bool origin_in_ns() const {
    return origin_case == OriginCase::kNonSubdivisionOnly || origin_case == OriginCase::kTailOfNonSubdivision;
  }
  /// Vertices of set i not used by the current system.
  VertexSet free_in(int i) const { return sets[i].minus(system.used()); }
};

/// Applies the tail discard and picks the origin O and the special vertex v.
inline LinkerState DiscardTailAndChooseOrigin(const Tournament& t, const GoodFamily& f, const AuxiliaryDigraph& h,
                                              const std::vector<int>& ps, const std::vector<int>& pns) {
  if (ps.empty() && pns.empty()) throw DomainError("both Hamiltonian orders are empty");
  LinkerState s;
  s.family = f;
  s.sets = f.sets;
  s.ps_order = ps;
  s.pns_order = pns;
  const int k = f.k();
  s.discard_rule = "none";
  int origin_set = -1;
  if (ps.empty()) {
    s.origin_case = OriginCase::kNonSubdivisionOnly;
    origin_set = pns.back();
  } else if (pns.empty()) {
    s.origin_case = OriginCase::kSubdivisionOnly;
    origin_set = ps.back();
  } else {
    const int ir = ps.back();
    const int jt = pns.back();
    const bool keep_in = h.edge(ir, jt);  // takes precedence over jt -> ir
    s.origin_case = keep_in ? OriginCase::kTailOfNonSubdivision : OriginCase::kTailOfSubdivision;
    origin_set = keep_in ? jt : ir;
    s.discard_rule = keep_in ? "in-neighbours" : "out-neighbours";
    const VertexSet& target = s.sets[ir];
    std::vector<Vertex> kept;
    for (Vertex v : s.sets[jt]) {
      const int d = keep_in ? t.in_degree_from(v, target) : t.out_degree_into(v, target);
      if (2 * d >= static_cast<int>(target.size())) kept.push_back(v);
    }
    s.discarded = static_cast<int>(s.sets[jt].size() - kept.size());
    s.sets[jt] = VertexSet::FromUnique(std::move(kept));
  }
  if (!pns.empty()) {
    const VertexSet& init = s.sets[pns.front()];
    Vertex best = -1;
    int best_deg = -1;
    for (Vertex v : init) {
      const int d = t.out_degree_into(v, init);
      if (d > best_deg) {
        best = v;
        best_deg = d;
      }
    }
    if (best >= 0) s.special = best;
  }
  const int want = s.special ? k + 1 : k;
  std::vector<Vertex> origin;
  for (Vertex v : s.sets[origin_set]) {
    if (static_cast<int>(origin.size()) == want) break;
    if (s.special && v == *s.special) continue;
    origin.push_back(v);
  }
  if (static_cast<int>(origin.size()) < want) {
    throw StageError("origin", "set " + std::to_string(origin_set) + " offers " + std::to_string(origin.size()) +
                                   " origin vertices, " + std::to_string(want) + " needed");
  }
  s.origin = VertexSet::FromUnique(std::move(origin));
  return s;
}

/// Minimum-total-size disjoint paths from O to Y plus the special vertex,
/// avoiding X. Throws InfeasibleSystem with a separator when none exists.
inline PathSystem BuildMengerSystem(const Tournament& t, const LinkerState& s, const VertexSet& x, const VertexSet& y) {
  return MinCostDisjointSystem(t, s.origin, y, s.special, x, static_cast<int>(s.origin.size()));
}

// ---------------------------------------------------------------------------
// Freeing vertices of the non-subdivision sets.

namespace detail {

inline int PathIndexEndingAt(const PathSystem& sys, Vertex v) {
  for (std::size_t i = 0; i < sys.paths.size(); ++i)
    if (sys.paths[i].back() == v) return static_cast<int>(i);
  return -1;
}

inline std::vector<std::size_t> PositionsIn(const Path& p, const VertexSet& s) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (s.contains(p[i])) r.push_back(i);
  return r;
}

inline int SubdivisionHits(const LinkerState& s) {
  const VertexSet used = s.system.used();
  int hits = 0;
  for (const auto& [i, sub] : s.family.subdivisions) hits += static_cast<int>(sub.vertices().intersected(used).size());
  return hits;
}

}  // namespace detail

struct FreeingReport {
  int swaps = 0;        // special path truncations
  int bypasses = 0;     // reroutes through the domination chain
  std::vector<int> free_counts;  // per position of P^ns after freeing
};

/// Frees vertices in S_{j_1}, ..., S_{j_t} in order. A set hit by at least
/// `threshold` system vertices (for the first set: all but at most one) is
/// relieved either by cutting the special path at its first entry into the
/// set, or by sending the special path's vertex through free vertices of
/// the intermediate sets to the last entry of the heaviest path, which gives
/// up its middle section. Ends with the quota audit |S'_{j_q}| >= q.
inline FreeingReport FreeNonsubdivisionSets(const Tournament& t, LinkerState& s, int threshold) {
  FreeingReport rep;
  const auto& pns = s.pns_order;
  const int tcount = static_cast<int>(pns.size());
  if (tcount == 0 || !s.special) return rep;
  const int last = s.origin_in_ns() ? tcount - 1 : tcount;
  const int hits_before = detail::SubdivisionHits(s);
  int zpos = 1;  // 1-based position of the set holding the special vertex

  auto apply = [&](int p, const VertexSet& hit_set) {
    PathSystem& sys = s.system;
    const int special_idx = detail::PathIndexEndingAt(sys, *s.special);
    int best = -1;
    std::size_t best_hits = 0;
    for (std::size_t i = 0; i < sys.paths.size(); ++i) {
      const auto c = detail::PositionsIn(sys.paths[i], hit_set).size();
      if (c > best_hits) {
        best_hits = c;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) return;
    Path& heavy = sys.paths[best];
    const auto pos = detail::PositionsIn(heavy, hit_set);
    if (best == special_idx) {
      heavy.resize(pos.front() + 1);
      s.special = heavy.back();
      sys.special_sink = s.special;
      ++rep.swaps;
      zpos = p;
      return;
    }
    if (pos.size() < 3) return;  // nothing would be freed
    // Chain from the special vertex through one free vertex per intermediate set.
    const VertexSet used = sys.used();
    Path bridge;
    Vertex prev = *s.special;
    for (int q = zpos + 1; q <= p - 1; ++q) {
      Vertex pick = -1;
      for (Vertex w : s.sets[pns[q - 1]].minus(used))
        if (t.beats(prev, w) && std::find(bridge.begin(), bridge.end(), w) == bridge.end()) {
          pick = w;
          break;
        }
      if (pick < 0) return;
      bridge.push_back(pick);
      prev = pick;
    }
    const Vertex ul = heavy[pos.back()];
    if (!t.beats(prev, ul)) return;
    Path rerouted = sys.paths[special_idx];
    rerouted.insert(rerouted.end(), bridge.begin(), bridge.end());
    rerouted.insert(rerouted.end(), heavy.begin() + static_cast<std::ptrdiff_t>(pos.back()), heavy.end());
    Path new_special(heavy.begin(), heavy.begin() + static_cast<std::ptrdiff_t>(pos.front()) + 1);
    sys.paths[special_idx] = std::move(rerouted);
    sys.paths[best] = std::move(new_special);
    s.special = sys.paths[best].back();
    sys.special_sink = s.special;
    ++rep.bypasses;
    zpos = p;
  };

  for (int p = 1; p <= last; ++p) {
    const VertexSet& sp = s.sets[pns[p - 1]];
    const int inter = static_cast<int>(sp.intersected(s.system.used()).size());
    if (p == 1) {
      if (inter >= static_cast<int>(sp.size()) - 1 && sp.contains(*s.special)) {
        apply(1, t.out_neighbors(*s.special).intersected(sp));
      }
    } else if (inter >= threshold) {
      apply(p, sp);
    }
  }
  if (auto bad = AuditPathSystem(t, s.system); !bad.empty()) throw StageError("free", "system broken: " + bad);
  if (detail::SubdivisionHits(s) > hits_before) throw StageError("free", "subdivision intersections grew");
  for (int q = 1; q <= tcount; ++q) rep.free_counts.push_back(static_cast<int>(s.free_in(pns[q - 1]).size()));
  for (int q = 1; q <= last; ++q) {
    if (rep.free_counts[q - 1] < q) {
      throw StageError("free", "set " + std::to_string(pns[q - 1]) + " at position " + std::to_string(q) + " has " +
                                   std::to_string(rep.free_counts[q - 1]) + " free vertices, needs " + std::to_string(q));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct BoundsReport {
  struct Entry {
    int set = -1;
    int branch_in_system = 0;   // branch vertices lying on the system
    int max_blocked_paths = 0;  // worst free branch vertex: connectors to free branch vertices meeting the system
  };
  std::vector<Entry> entries;
  std::int64_t bound_subdiv = 0;
  std::int64_t bound_paths = 0;
  bool ok = true;
};

/// Counts, per subdivision set, branch vertices on the system and, for each
/// free branch vertex, the connectors to other free branch vertices whose
/// interior meets the system. Flags counts above the bounds.
inline BoundsReport CheckSubdivisionBounds(const LinkerState& s, std::int64_t bound_subdiv, std::int64_t bound_paths) {
  BoundsReport r;
  r.bound_subdiv = bound_subdiv;
  r.bound_paths = bound_paths;
  const VertexSet used = s.system.used();
  for (const auto& [i, sub] : s.family.subdivisions) {
    BoundsReport::Entry e;
    e.set = i;
    e.branch_in_system = static_cast<int>(sub.branch.intersected(used).size());
    const VertexSet free_branch = sub.branch.minus(used);
    for (Vertex x : free_branch) {
      int blocked = 0;
      for (Vertex other : free_branch) {
        if (other == x) continue;
        for (const Path* p : {&sub.path(x, other), &sub.path(other, x)})
          for (std::size_t j = 1; j + 1 < p->size(); ++j)
            if (used.contains((*p)[j])) {
              ++blocked;
              break;
            }
      }
      e.max_blocked_paths = std::max(e.max_blocked_paths, blocked);
    }
    if (e.branch_in_system > bound_subdiv || e.max_blocked_paths > bound_paths) r.ok = false;
    r.entries.push_back(e);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rerouting a path system along subdivision connectors.

struct Improvement {
  PathSystem system;
  std::string move;  // "shortcut", "two-path", "three-path" or "chain"
};

namespace detail {

// Connector segment from a system vertex to another system vertex whose
// interior avoids the system.
struct Bridge {
  int from_path, from_pos;
  int to_path, to_pos;
  std::vector<Vertex> interior;
};

class Rerouter {
 public:
  Rerouter(const Tournament& t, const PathSystem& sys, const Subdivision& sub) : t_(t), sys_(sys), sub_(sub) {
    where_.assign(t.size(), {-1, -1});
    for (std::size_t i = 0; i < sys.paths.size(); ++i)
      for (std::size_t j = 0; j < sys.paths[i].size(); ++j) where_[sys.paths[i][j]] = {static_cast<int>(i), static_cast<int>(j)};
    for (const auto& [ab, p] : sub.connector) AddBridges(p);
  }

  std::optional<Improvement> Run() {
    if (auto r = Shortcut()) return r;
    if (auto r = ChainGuided()) return r;
    if (auto r = TwoCycle()) return r;
    if (auto r = ThreeCycle()) return r;
    return std::nullopt;
  }

 private:
  void AddBridges(const Path& p) {
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
      if (where_[p[s]].first < 0) continue;
      std::vector<Vertex> interior;
      for (std::size_t e = s + 1; e < p.size(); ++e) {
        if (where_[p[e]].first >= 0) {
          bridges_.push_back({where_[p[s]].first, where_[p[s]].second, where_[p[e]].first, where_[p[e]].second, interior});
          break;
        }
        interior.push_back(p[e]);
      }
    }
  }

  const Path& P(int i) const { return sys_.paths[i]; }

  std::optional<Improvement> Accept(PathSystem next, const char* move) const {
    if (!AuditPathSystem(t_, next).empty()) return std::nullopt;
    if (next.total_vertices() >= sys_.total_vertices()) return std::nullopt;
    // Endpoints and the special vertex stay put.
    std::vector<Vertex> a, b;
    for (const auto& p : sys_.paths) a.push_back(p.back());
    for (const auto& p : next.paths) b.push_back(p.back());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
    a.clear();
    b.clear();
    for (const auto& p : sys_.paths) a.push_back(p.front());
    for (const auto& p : next.paths) b.push_back(p.front());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
    return Improvement{std::move(next), move};
  }

  static Path Splice(const Path& head, int upto, const std::vector<Vertex>& mid, const Path& tail, int from) {
    Path r(head.begin(), head.begin() + upto + 1);
    r.insert(r.end(), mid.begin(), mid.end());
    r.insert(r.end(), tail.begin() + from, tail.end());
    return r;
  }

  static bool Disjoint(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    for (Vertex v : a)
      if (std::find(b.begin(), b.end(), v) != b.end()) return false;
    return true;
  }

  std::optional<Improvement> Shortcut() const {
    for (const auto& b : bridges_) {
      if (b.from_path != b.to_path || b.from_pos >= b.to_pos) continue;
      if (static_cast<int>(b.interior.size()) >= b.to_pos - b.from_pos - 1) continue;
      PathSystem next = sys_;
      next.paths[b.from_path] = Splice(P(b.from_path), b.from_pos, b.interior, P(b.from_path), b.to_pos);
      if (auto r = Accept(std::move(next), "shortcut")) return r;
    }
    return std::nullopt;
  }

  std::optional<Improvement> TryCycle(const std::vector<const Bridge*>& cyc, const char* move) const {
    // cyc[i] leads from path A_i to A_{i+1}; A_i keeps its head up to the
    // bridge start and takes the tail of A_{i+1} from the bridge end.
    const std::size_t c = cyc.size();
    for (std::size_t i = 0; i < c; ++i) {
      const Bridge& in = *cyc[(i + c - 1) % c];  // enters A_i
      const Bridge& out = *cyc[i];               // leaves A_i
      if (out.from_path != in.to_path) return std::nullopt;
      if (out.from_pos >= in.to_pos) return std::nullopt;
      for (std::size_t j = i + 1; j < c; ++j) {
        if (cyc[j]->from_path == out.from_path) return std::nullopt;
        if (!Disjoint(out.interior, cyc[j]->interior)) return std::nullopt;
      }
    }
    PathSystem next = sys_;
    for (std::size_t i = 0; i < c; ++i) {
      const Bridge& out = *cyc[i];
      next.paths[out.from_path] = Splice(P(out.from_path), out.from_pos, out.interior, P(out.to_path), out.to_pos);
    }
    return Accept(std::move(next), move);
  }

  std::optional<Improvement> TwoCycle() const {
    for (const auto& a : bridges_) {
      if (a.from_path == a.to_path) continue;
      for (const auto& b : bridges_) {
        if (b.from_path != a.to_path || b.to_path != a.from_path) continue;
        if (auto r = TryCycle({&a, &b}, "two-path")) return r;
      }
    }
    return std::nullopt;
  }

  std::optional<Improvement> ThreeCycle() const {
    for (const auto& a : bridges_) {
      if (a.from_path == a.to_path) continue;
      for (const auto& b : bridges_) {
        if (b.from_path != a.to_path || b.to_path == b.from_path || b.to_path == a.from_path) continue;
        for (const auto& c : bridges_) {
          if (c.from_path != b.to_path || c.to_path != a.from_path) continue;
          if (auto r = TryCycle({&a, &b, &c}, "three-path")) return r;
        }
      }
    }
    return std::nullopt;
  }

  // Nested connectors P_{u_i, u_{m-i+1}} between branch vertices met by one
  // path Q, grouped by which paths meet their interiors; a class whose two
  // interior vertices lie on paths M and N yields, through a chain monotone
  // on both M and N, three connectors that route Q -> M -> N -> Q.
  std::optional<Improvement> ChainGuided() const {
    for (std::size_t qi = 0; qi < sys_.paths.size(); ++qi) {
      std::vector<Vertex> met;
      for (Vertex v : P(static_cast<int>(qi)))
        if (sub_.branch.contains(v)) met.push_back(v);
      const std::size_t m = met.size();
      if (m < 6) continue;
      std::map<std::pair<int, int>, std::vector<const Path*>> classes;
      for (std::size_t i = 0; i < m / 2; ++i) {
        const Path& p = sub_.path(met[i], met[m - 1 - i]);
        if (p.size() != 4) continue;
        classes[{where_[p[1]].first, where_[p[2]].first}].push_back(&p);
      }
      for (const auto& [pattern, members] : classes) {
        const auto [mi, ni] = pattern;
        if (mi < 0 || ni < 0 || mi == ni || mi == static_cast<int>(qi) || ni == static_cast<int>(qi)) continue;
        if (members.size() < 3) continue;
        std::vector<std::vector<int>> ranks(2, std::vector<int>(members.size()));
        std::vector<std::pair<int, int>> by_m, by_n;
        for (std::size_t i = 0; i < members.size(); ++i) {
          by_m.emplace_back(where_[(*members[i])[1]].second, static_cast<int>(i));
          by_n.emplace_back(where_[(*members[i])[2]].second, static_cast<int>(i));
        }
        std::sort(by_m.begin(), by_m.end());
        std::sort(by_n.begin(), by_n.end());
        for (std::size_t r = 0; r < members.size(); ++r) {
          ranks[0][by_m[r].second] = static_cast<int>(r);
          ranks[1][by_n[r].second] = static_cast<int>(r);
        }
        const ChainWitness chain = MultiOrderMonotoneSubset(ranks);
        // Bridges along the chosen connectors: Q -> M (first edge), M -> N
        // (middle edge), N -> Q (last edge), tried over all role assignments.
        std::vector<Bridge> local;
        for (int idx : chain.items) {
          const Path& p = *members[idx];
          for (int s = 0; s < 3; ++s)
            local.push_back({where_[p[s]].first, where_[p[s]].second, where_[p[s + 1]].first, where_[p[s + 1]].second, {}});
        }
        for (const auto& a : local)
          for (const auto& b : local)
            for (const auto& c : local) {
              if (a.from_path != static_cast<int>(qi) || a.to_path != mi) continue;
              if (b.from_path != mi || b.to_path != ni || c.from_path != ni || c.to_path != static_cast<int>(qi)) continue;
              if (auto r = TryCycle({&a, &b, &c}, "chain")) return r;
            }
      }
    }
    return std::nullopt;
  }

  const Tournament& t_;
  const PathSystem& sys_;
  const Subdivision& sub_;
  std::vector<std::pair<int, int>> where_;  // vertex -> (path, position)
  std::vector<Bridge> bridges_;
};

}  // namespace detail

/// Searches for a strictly smaller system with the same endpoints by moving
/// path sections onto subdivision connectors: a free connector shortcut on one
/// path, or a cyclic exchange of tails among two or three paths along
/// connector segments with free interiors. Returns nothing when no such move
/// is found.
inline std::optional<Improvement> RerouteImprove(const Tournament& t, const PathSystem& sys, const Subdivision& sub) {
  if (auto bad = AuditSubdivision(t, sub); !bad.empty()) throw DomainError("subdivision audit failed: " + bad);
  if (auto bad = AuditPathSystem(t, sys); !bad.empty()) throw DomainError("path system audit failed: " + bad);
  detail::Rerouter r(t, sys, sub);
  return r.Run();
}

// ---------------------------------------------------------------------------

/// Links each pair (u, v) inside the subdivision through a hub branch vertex w:
/// connector u -> w then connector w -> v, all vertices outside `forbidden`
/// and unused by earlier pairs; the direct connector u -> v is the fallback.
/// Pair endpoints may lie in `forbidden`. Throws StageError when stuck.
inline std::vector<Path> LinkWithinSubdivision(const Tournament& t, const Subdivision& sub,
                                               const std::vector<std::pair<Vertex, Vertex>>& pairs,
                                               const VertexSet& forbidden) {
  (void)t;
  std::vector<char> blocked(t.size(), 0);
  for (Vertex v : forbidden) blocked[v] = 1;
  std::vector<char> endpoint(t.size(), 0);
  for (auto [u, v] : pairs) {
    if (!sub.branch.contains(u) || !sub.branch.contains(v)) throw DomainError("pair endpoint is not a branch vertex");
    endpoint[u] = endpoint[v] = 1;
  }
  auto interior_free = [&](const Path& p) {
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
      if (blocked[p[i]] || endpoint[p[i]]) return false;
    return true;
  };
  std::vector<Path> out;
  for (auto [u, v] : pairs) {
    Path found;
    if (u == v) {
      found = {u};
    } else {
      for (Vertex w : sub.branch) {
        if (blocked[w] || endpoint[w]) continue;
        const Path& a = sub.path(u, w);
        const Path& b = sub.path(w, v);
        if (!interior_free(a) || !interior_free(b)) continue;
        found = a;
        found.insert(found.end(), b.begin() + 1, b.end());
        break;
      }
      if (found.empty() && interior_free(sub.path(u, v))) found = sub.path(u, v);
    }
    if (found.empty()) {
      throw StageError("within-subdivision", "no free hub links " + std::to_string(u) + " to " + std::to_string(v));
    }
    for (Vertex w : found) blocked[w] = 1;
    out.push_back(std::move(found));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace detail {

class Assembler {
 public:
  Assembler(const Tournament& t, const LinkerState& s, const std::vector<Vertex>& x, const std::vector<Vertex>& y)
      : t_(t), s_(s), x_(x), y_(y), blocked_(t.size(), 0) {
    for (const auto& p : s.system.paths)
      for (Vertex v : p) blocked_[v] = 1;
    for (Vertex v : x) blocked_[v] = 1;
    for (Vertex v : y) blocked_[v] = 1;
    // z_i: origin of the system path ending at y_i.
    z_.assign(x.size(), -1);
    for (const auto& p : s.system.paths)
      for (std::size_t i = 0; i < y.size(); ++i)
        if (p.back() == y[i]) z_[i] = p.front();
    for (std::size_t i = 0; i < y.size(); ++i)
      if (z_[i] < 0) throw StageError("assemble", "no system path ends at y_" + std::to_string(i));
  }

  std::vector<Path> Run() {
    const int k = static_cast<int>(x_.size());
    std::vector<Path> chains(k);
    const auto& ps = s_.ps_order;
    const auto& pns = s_.pns_order;
    const bool case1 = s_.origin_in_ns();
    // Targets inside ter(P^s) for the subdivision chains.
    std::vector<Vertex> target(k, -1);
    std::vector<Vertex> proxy(k, -1);
    if (case1 && !ps.empty()) {
      const int ir = ps.back();
      for (int i : ps) {
        Vertex pick = -1;
        for (Vertex w : s_.sets[ir])
          if (!blocked_[w] && !reserved_.contains(w) && t_.beats(w, z_[i])) {
            pick = w;
            break;
          }
        if (pick < 0) throw StageError("assemble", "no free in-neighbour of z_" + std::to_string(i) + " in the last subdivision set");
        proxy[i] = pick;
        reserved_.insert(pick);
        target[i] = pick;
      }
    } else {
      for (int i : ps) target[i] = z_[i];
    }
    // Non-subdivision chains, earliest position first.
    for (std::size_t q = 0; q < pns.size(); ++q) {
      const int i = pns[q];
      Path c{x_[i]};
      if (case1) {
        for (std::size_t p = q; p + 1 < pns.size(); ++p) c.push_back(TakeFree(pns[p], c.back(), -1));
        if (!t_.beats(c.back(), z_[i])) throw StageError("assemble", "domination chain does not reach z_" + std::to_string(i));
        c.push_back(z_[i]);
      } else {
        for (std::size_t p = q; p < pns.size(); ++p) {
          const bool last = p + 1 == pns.size();
          c.push_back(TakeFree(pns[p], c.back(), last ? ps.back() : -1));
        }
        EnterAndLink(ps.back(), c, z_[i]);
      }
      Commit(c);
      chains[i] = std::move(c);
    }
    // Subdivision chains along P^s.
    for (std::size_t p = 0; p < ps.size(); ++p) {
      const int i = ps[p];
      Path c{x_[i]};
      reserved_.erase(target[i]);
      if (p + 1 == ps.size()) {
        c.push_back(target[i]);
      } else {
        // Enter S_{i_p} at a stepping stone with a free out-neighbour in the next set.
        Vertex stone = Stone(ps[p], ps[p + 1], -1);
        if (stone < 0) throw StageError("assemble", "no stepping stone in set " + std::to_string(ps[p]));
        c.push_back(stone);
        for (std::size_t q = p + 1; q < ps.size(); ++q) {
          const bool last = q + 1 == ps.size();
          Vertex entry = -1;
          if (last && t_.beats(c.back(), target[i])) entry = target[i];
          if (entry < 0) entry = Stone(ps[q], last ? -1 : ps[q + 1], c.back());
          if (entry < 0) throw StageError("assemble", "cannot step into set " + std::to_string(ps[q]));
          c.push_back(entry);
          Vertex goal = last ? target[i] : entry;
          if (!last) {
            // Move within the set to a vertex stepping onward, if needed.
            if (FreeOutInto(entry, ps[q + 1]) < 0) {
              goal = Stone(ps[q], ps[q + 1], -1);
              if (goal < 0) throw StageError("assemble", "no stepping stone in set " + std::to_string(ps[q]));
            }
          }
          if (goal != entry) Within(ps[q], c, goal);
        }
      }
      if (proxy[i] >= 0) c.push_back(z_[i]);
      Commit(c);
      chains[i] = std::move(c);
    }
    std::vector<Path> out(k);
    for (int i = 0; i < k; ++i) {
      const Path* q = nullptr;
      for (const auto& p : s_.system.paths)
        if (p.front() == z_[i]) q = &p;
      out[i] = chains[i];
      out[i].insert(out[i].end(), q->begin() + 1, q->end());
    }
    return out;
  }

 private:
  bool Usable(Vertex v) const { return !blocked_[v] && !reserved_.contains(v); }

  void Commit(const Path& c) {
    for (Vertex v : c) blocked_[v] = 1;
  }

  // Free vertex of set `idx` entered from `from`; when `onward` >= 0 prefer
  // one with a usable out-neighbour in that set.
  Vertex TakeFree(int idx, Vertex from, int onward) {
    Vertex fallback = -1;
    for (Vertex w : s_.sets[idx]) {
      if (!Usable(w) || !t_.beats(from, w)) continue;
      if (onward < 0 || FreeOutInto(w, onward) >= 0) {
        blocked_[w] = 1;
        return w;
      }
      if (fallback < 0) fallback = w;
    }
    if (fallback < 0) throw StageError("assemble", "set " + std::to_string(idx) + " has no free vertex left");
    blocked_[fallback] = 1;
    return fallback;
  }

  Vertex FreeOutInto(Vertex v, int idx) const {
    for (Vertex w : s_.sets[idx])
      if (Usable(w) && t_.beats(v, w)) return w;
    return -1;
  }

  // Lowest usable vertex of set `idx` (an out-neighbour of `from` when given)
  // with a usable out-neighbour in set `onward` (any, when onward < 0).
  Vertex Stone(int idx, int onward, Vertex from) const {
    for (Vertex w : s_.sets[idx]) {
      if (!Usable(w)) continue;
      if (from >= 0 && !t_.beats(from, w)) continue;
      if (onward < 0 || FreeOutInto(w, onward) >= 0) return w;
    }
    if (from >= 0 && onward >= 0) {
      for (Vertex w : s_.sets[idx])
        if (Usable(w) && t_.beats(from, w)) return w;
    }
    return -1;
  }

  void Within(int idx, Path& c, Vertex goal) {
    const auto sub = s_.family.subdivisions.find(idx);
    if (sub == s_.family.subdivisions.end()) throw StageError("assemble", "set " + std::to_string(idx) + " has no subdivision");
    std::vector<Vertex> blocked;
    for (Vertex v = 0; v < t_.size(); ++v)
      if (blocked_[v] || reserved_.contains(v)) blocked.push_back(v);
    for (Vertex v : c) blocked.push_back(v);
    auto links = LinkWithinSubdivision(t_, sub->second, {{c.back(), goal}}, VertexSet(std::move(blocked)));
    c.insert(c.end(), links[0].begin() + 1, links[0].end());
  }

  // From the current chain end, enter the subdivision set `idx` and link to `goal`.
  void EnterAndLink(int idx, Path& c, Vertex goal) {
    if (t_.beats(c.back(), goal)) {
      c.push_back(goal);
      return;
    }
    Vertex entry = -1;
    for (Vertex w : s_.sets[idx])
      if (Usable(w) && t_.beats(c.back(), w)) {
        entry = w;
        break;
      }
    if (entry < 0) throw StageError("assemble", "cannot enter set " + std::to_string(idx));
    c.push_back(entry);
    Within(idx, c, goal);
  }

  const Tournament& t_;
  const LinkerState& s_;
  const std::vector<Vertex>& x_;
  const std::vector<Vertex>& y_;
  std::vector<char> blocked_;
  VertexSet reserved_;
  std::vector<Vertex> z_;
};

}  // namespace detail

/// Final x_i -> z_i chains through the free vertices, followed by the system
/// path from z_i to y_i. Throws StageError when a step cannot be completed.
inline std::vector<Path> AssembleFinalPaths(const Tournament& t, const LinkerState& s, const std::vector<Vertex>& x,
                                            const std::vector<Vertex>& y) {
  detail::Assembler a(t, s, x, y);
  auto paths = a.Run();
  LinkageInstance inst;
  for (std::size_t i = 0; i < x.size(); ++i) inst.pairs.emplace_back(x[i], y[i]);
  if (auto check = ValidatePathSystem(t, inst, paths); !check.ok) {
    throw StageError("assemble", check.violation + ": " + check.detail);
  }
  return paths;
}

// ---------------------------------------------------------------------------

/// Disjoint W_i inside N+(x_i) minus X and Y, filled round-robin by lowest id.
inline std::vector<VertexSet> CarveBlocks(const Tournament& t, const std::vector<Vertex>& x,
                                          const std::vector<Vertex>& y, std::int64_t size) {
  const int k = static_cast<int>(x.size());
  VertexSet ends(x);
  ends = ends.united(VertexSet(y));
  std::vector<VertexSet> cand(k);
  for (int i = 0; i < k; ++i) {
    cand[i] = t.out_neighbors(x[i]).minus(ends);
    if (static_cast<std::int64_t>(cand[i].size()) < size) {
      throw StageError("carve", "x_" + std::to_string(i) + " = " + std::to_string(x[i]) + " has " +
                                    std::to_string(cand[i].size()) + " usable out-neighbours, " + std::to_string(size) +
                                    " needed");
    }
  }
  std::vector<char> taken(t.size(), 0);
  std::vector<std::vector<Vertex>> w(k);
  std::vector<std::size_t> cursor(k, 0);
  for (std::int64_t round = 0; round < size; ++round)
    for (int i = 0; i < k; ++i) {
      while (cursor[i] < cand[i].size() && taken[cand[i][cursor[i]]]) ++cursor[i];
      if (cursor[i] == cand[i].size()) {
        throw StageError("carve", "x_" + std::to_string(i) + " = " + std::to_string(x[i]) +
                                      " ran out of out-neighbours not claimed by other blocks");
      }
      const Vertex v = cand[i][cursor[i]++];
      taken[v] = 1;
      w[i].push_back(v);
    }
  std::vector<VertexSet> out;
  for (auto& b : w) out.push_back(VertexSet::FromUnique(std::move(b)));
  return out;
}

struct LinkResult {
  LinkageVerdict verdict;
  std::string method;  // "constructive", "exact" or "none"
  std::optional<StageFailure> failure;
  std::vector<TraceEntry> trace;
};

/// Links x_i to y_i. Runs the constructive pipeline; on a structured failure
/// the exact oracle decides when the config allows it.
inline LinkResult Link(const Tournament& t, const std::vector<Vertex>& x, const std::vector<Vertex>& y,
                       const LinkerConfig& cfg) {
  if (x.size() != y.size() || x.empty()) throw DomainError("X and Y must be nonempty and of equal size");
  LinkageInstance inst;
  for (std::size_t i = 0; i < x.size(); ++i) inst.pairs.emplace_back(x[i], y[i]);
  CheckInstance(t, inst);
  const int k = static_cast<int>(x.size());
  LinkResult r;
  auto note = [&](std::string stage, std::string outcome, std::vector<std::pair<std::string, std::int64_t>> counts = {},
                  std::string text = {}) {
    r.trace.push_back({std::move(stage), std::move(outcome), std::move(counts), std::move(text)});
  };
  try {
    const auto blocks = CarveBlocks(t, x, y, cfg.family.w_size);
    note("carve", "ok", {{"blocks", k}, {"block_size", cfg.family.w_size}});

    auto build = BuildGoodFamily(t, blocks, cfg.family);
    if (!build.family) throw StageError("good-family", build.failure);
    if (auto bad = AuditGoodFamily(t, *build.family, blocks, cfg.family); !bad.empty()) {
      throw StageError("good-family", "audit: " + bad);
    }
    const GoodFamily& fam = *build.family;
    int nsub = 0;
    for (int i = 0; i < k; ++i) nsub += fam.is_subdivision(i);
    note("good-family", "ok",
         {{"subdivision_sets", nsub},
          {"non_subdivision_sets", k - nsub},
          {"obstructions", build.stats.obstructions},
          {"max_interiors_per_subdivision", build.stats.max_removed_per_subdivision}});

    AuxiliaryDigraph h;
    try {
      h = BuildAuxDigraph(t, fam);
    } catch (const DomainError& e) {
      throw StageError("aux-digraph", e.what());
    }
    std::vector<int> sub_idx, ns_idx;
    for (int i = 0; i < k; ++i) (fam.is_subdivision(i) ? sub_idx : ns_idx).push_back(i);
    const auto ps = HamiltonianPathSemicomplete(h, sub_idx);
    const auto pns = HamiltonianPathSemicomplete(h, ns_idx);
    note("hamiltonian", "ok", {{"ps_length", static_cast<std::int64_t>(ps.size())}, {"pns_length", static_cast<std::int64_t>(pns.size())}});

    LinkerState state = DiscardTailAndChooseOrigin(t, fam, h, ps, pns);
    note("origin", ToString(state.origin_case),
         {{"origin_size", static_cast<std::int64_t>(state.origin.size())}, {"discarded", state.discarded}},
         "discard by " + state.discard_rule);

    try {
      state.system = BuildMengerSystem(t, state, VertexSet(x), VertexSet(y));
    } catch (const InfeasibleSystem& e) {
      throw StageError("menger", std::string(e.what()) + "; separator of size " + std::to_string(e.separator().size()));
    }
    int improvements = 0;
    for (const auto& [i, sub] : fam.subdivisions)
      while (auto better = RerouteImprove(t, state.system, sub)) {
        state.system = std::move(better->system);
        ++improvements;
      }
    note("menger", "ok", {{"paths", static_cast<std::int64_t>(state.system.paths.size())},
                          {"total_vertices", state.system.total_vertices()},
                          {"reroute_improvements", improvements}});

    const auto freeing = FreeNonsubdivisionSets(t, state, cfg.free_threshold);
    std::vector<std::pair<std::string, std::int64_t>> fc{{"swaps", freeing.swaps}, {"bypasses", freeing.bypasses}};
    for (std::size_t q = 0; q < freeing.free_counts.size(); ++q) fc.emplace_back("free_q" + std::to_string(q + 1), freeing.free_counts[q]);
    note("free", "ok", fc);

    const auto bounds = CheckSubdivisionBounds(state, cfg.bound_subdiv, cfg.bound_paths);
    std::int64_t worst_branch = 0, worst_paths = 0;
    for (const auto& e : bounds.entries) {
      worst_branch = std::max<std::int64_t>(worst_branch, e.branch_in_system);
      worst_paths = std::max<std::int64_t>(worst_paths, e.max_blocked_paths);
    }
    note("bounds", bounds.ok ? "ok" : "failed",
         {{"branch_in_system", worst_branch}, {"bound_subdiv", cfg.bound_subdiv},
          {"blocked_paths", worst_paths}, {"bound_paths", cfg.bound_paths}});
    if (!bounds.ok) throw StageError("bounds", "subdivision counts exceed the configured bounds");

    auto paths = AssembleFinalPaths(t, state, x, y);
    note("assemble", "ok", {{"paths", k}});
    r.verdict.status = LinkStatus::kLinked;
    r.verdict.paths = std::move(paths);
    r.method = "constructive";
    return r;
  } catch (const StageError& e) {
    r.failure = e.failure();
    note(e.failure().stage, "failed", {}, e.failure().detail);
  }
  if (cfg.fallback == Fallback::kExact) {
    r.verdict = FindLinkageExact(t, inst, cfg.budget);
    r.method = "exact";
    note("fallback", ToString(r.verdict.status), {{"nodes", r.verdict.nodes_explored}});
  } else {
    r.verdict.status = LinkStatus::kUnknown;
    r.method = "none";
  }
  return r;
}

}  // namespace tourlink
