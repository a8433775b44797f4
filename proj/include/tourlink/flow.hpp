#pragma once

// Menger machinery on tournaments: unit-vertex-capacity max flow, minimum
// vertex cuts, strong k-connectivity, and minimum-total-length systems of
// vertex-disjoint paths (successive shortest augmenting paths).

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "tourlink/tournament.hpp"

namespace tourlink {

/// Minimum s-t vertex separator together with a matching family of
/// internally disjoint s-t paths.
struct CutCertificate {
  Vertex s = -1;
  Vertex t = -1;
  // An edge s -> t cannot be cut by deleting vertices; `cut` is then the
  // residual separator of the remaining internal paths.
  bool uncuttable = false;
  VertexSet cut;
  std::vector<Path> witness_paths;

  /// Number of internally disjoint s-t paths, the direct edge counted once.
  int local_connectivity() const { return static_cast<int>(witness_paths.size()); }
};

namespace detail {

// Max flow with unit capacity on every vertex except s and t, run directly on
// the tournament's adjacency (implicit vertex-split residual graph). The direct
// edge s -> t is never used.
class UnitVertexFlow {
 public:
  UnitVertexFlow(const Tournament& t, Vertex s, Vertex sink, const std::vector<char>& allowed)
      : t_(t), n_(t.size()), s_(s), t_sink_(sink), allowed_(allowed),
        flow_(static_cast<std::size_t>(n_) * n_, 0), through_(n_, 0), prev_(n_, -1) {}

  /// Augments until the flow reaches `limit` or no augmenting path remains.
  int Run(int limit) {
    while (value_ < limit && Augment()) ++value_;
    return value_;
  }

  int value() const { return value_; }

  std::vector<Path> Paths() const {
    std::vector<Path> paths;
    for (Vertex w = 0; w < n_; ++w) {
      if (!Flow(s_, w)) continue;
      Path p{s_, w};
      Vertex cur = w;
      while (cur != t_sink_) {
        Vertex nxt = -1;
        for (Vertex x = 0; x < n_; ++x)
          if (Flow(cur, x)) { nxt = x; break; }
        p.push_back(nxt);
        cur = nxt;
      }
      paths.push_back(std::move(p));
    }
    return paths;
  }

  /// Internal vertices whose split edge crosses the residual cut.
  VertexSet Cut() const {
    auto seen = ResidualReach();
    std::vector<Vertex> cut;
    for (Vertex v = 0; v < n_; ++v)
      if (v != s_ && v != t_sink_ && seen[In(v)] && !seen[Out(v)]) cut.push_back(v);
    return VertexSet::FromUnique(std::move(cut));
  }

 private:
  static int In(Vertex v) { return 2 * v; }
  static int Out(Vertex v) { return 2 * v + 1; }
  bool Flow(Vertex u, Vertex w) const { return flow_[static_cast<std::size_t>(u) * n_ + w] != 0; }
  char& FlowRef(Vertex u, Vertex w) { return flow_[static_cast<std::size_t>(u) * n_ + w]; }
  bool Terminal(Vertex v) const { return v == s_ || v == t_sink_; }

  // Residual successors of a split node, in increasing id order.
  template <typename Visit>
  void Successors(int node, Visit&& visit) const {
    const Vertex v = node / 2;
    if (node % 2 == 1) {
      // v_out: forward along tournament edges, which are uncapacitated; only
      // vertices carry unit capacity.
      for (Vertex w = 0; w < n_; ++w) {
        if (w == v || w == s_ || !allowed_[w] || !t_.beats(v, w)) continue;
        if (v == s_ && w == t_sink_) continue;
        visit(In(w));
      }
      if (!Terminal(v) && through_[v]) visit(In(v));
    } else {
      // v_in: through the vertex if unused, or back along the flow edge into v.
      if (Terminal(v)) {
        visit(Out(v));
      } else {
        if (!through_[v]) visit(Out(v));
        if (prev_[v] >= 0) visit(Out(prev_[v]));
      }
    }
  }

  std::vector<char> ResidualReach() const {
    std::vector<char> seen(2 * n_, 0);
    std::vector<int> stack{Out(s_)};
    seen[Out(s_)] = 1;
    while (!stack.empty()) {
      int node = stack.back();
      stack.pop_back();
      if (node == In(t_sink_)) continue;
      Successors(node, [&](int nxt) {
        if (!seen[nxt]) {
          seen[nxt] = 1;
          stack.push_back(nxt);
        }
      });
    }
    return seen;
  }

  bool Augment() {
    std::vector<int> parent(2 * n_, -1);
    std::vector<int> queue{Out(s_)};
    parent[Out(s_)] = Out(s_);
    const int goal = In(t_sink_);
    bool found = false;
    for (std::size_t head = 0; head < queue.size() && !found; ++head) {
      int node = queue[head];
      Successors(node, [&](int nxt) {
        if (found || parent[nxt] >= 0) return;
        parent[nxt] = node;
        if (nxt == goal) { found = true; return; }
        queue.push_back(nxt);
      });
    }
    if (!found) return false;
    std::vector<int> chain{goal};
    while (chain.back() != Out(s_)) chain.push_back(parent[chain.back()]);
    std::reverse(chain.begin(), chain.end());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const int a = chain[i];
      const int b = chain[i + 1];
      const Vertex va = a / 2;
      const Vertex vb = b / 2;
      if (a % 2 == 1 && b % 2 == 0 && va != vb) {
        FlowRef(va, vb) = 1;  // forward edge
        if (!Terminal(vb)) prev_[vb] = va;
      } else if (a % 2 == 0 && b % 2 == 1 && va != vb) {
        FlowRef(vb, va) = 0;  // cancel flow on vb -> va
      } else if (a % 2 == 0 && b % 2 == 1) {
        if (!Terminal(va)) through_[va] = 1;
      } else {
        if (!Terminal(va)) {
          through_[va] = 0;
          prev_[va] = -1;
        }
      }
    }
    return true;
  }

  const Tournament& t_;
  int n_;
  Vertex s_;
  Vertex t_sink_;
  const std::vector<char>& allowed_;
  std::vector<char> flow_;
  std::vector<char> through_;
  std::vector<Vertex> prev_;
  int value_ = 0;
};

}  // namespace detail

/// Minimum internal vertex cut separating s from t, certified by a family of
/// internally disjoint paths of the same size. Throws DomainError when s == t.
inline CutCertificate MinVertexCut(const Tournament& t, Vertex s, Vertex target,
                                   int limit = std::numeric_limits<int>::max()) {
  t.CheckVertex(s);
  t.CheckVertex(target);
  if (s == target) throw DomainError("min vertex cut needs distinct endpoints");
  std::vector<char> allowed(t.size(), 1);
  detail::UnitVertexFlow flow(t, s, target, allowed);
  flow.Run(limit);
  CutCertificate cert;
  cert.s = s;
  cert.t = target;
  cert.uncuttable = t.beats(s, target);
  if (cert.uncuttable) cert.witness_paths.push_back({s, target});
  for (auto& p : flow.Paths()) cert.witness_paths.push_back(std::move(p));
  if (flow.value() < limit || limit == std::numeric_limits<int>::max()) cert.cut = flow.Cut();
  return cert;
}

/// Number of internally disjoint s -> t paths (a direct edge counts as one),
/// capped at `limit`.
inline int LocalConnectivity(const Tournament& t, Vertex s, Vertex target,
                             int limit = std::numeric_limits<int>::max()) {
  std::vector<char> allowed(t.size(), 1);
  const int direct = t.beats(s, target) ? 1 : 0;
  if (direct >= limit) return direct;
  detail::UnitVertexFlow flow(t, s, target, allowed);
  return direct + flow.Run(limit - direct);
}

/// One flow computation performed while certifying connectivity.
struct PairCheck {
  Vertex s;
  Vertex t;
  int paths;  // internally disjoint s -> t paths found (capped at k)
};

struct ConnectivityVerdict {
  int k = 0;
  bool connected = false;
  std::string reason;              // empty when connected
  VertexSet pivots;                // the fixed vertex set U of the pair family
  std::vector<PairCheck> checks;   // every pair tested (positive verdicts)
  std::optional<VertexSet> separator;
  std::optional<std::pair<Vertex, Vertex>> separated;  // (s, t) cut apart by `separator`
};

/// Strong k-connectivity. Fixes U = {0..k-1} and runs a capped flow for every
/// ordered non-adjacent pair with one end in U; a separator of size < k must
/// miss some vertex of U, so these pairs certify the verdict.
inline ConnectivityVerdict IsKConnected(const Tournament& t, int k) {
  ConnectivityVerdict v;
  v.k = k;
  if (t.size() < k + 1) {
    v.reason = "too few vertices";
    return v;
  }
  if (k <= 0) {
    v.connected = true;
    return v;
  }
  std::vector<char> allowed(t.size(), 1);
  std::vector<Vertex> pivots;
  for (Vertex u = 0; u < k; ++u) pivots.push_back(u);
  v.pivots = VertexSet(pivots);
  auto test = [&](Vertex a, Vertex b) {
    detail::UnitVertexFlow flow(t, a, b, allowed);
    const int value = flow.Run(k);
    if (value < k) {
      v.separator = flow.Cut();
      v.separated = std::make_pair(a, b);
      v.reason = "separator of size " + std::to_string(v.separator->size());
      return false;
    }
    v.checks.push_back({a, b, value});
    return true;
  };
  for (Vertex u : pivots) {
    for (Vertex w = 0; w < t.size(); ++w) {
      if (w == u) continue;
      if (!t.beats(u, w) && !test(u, w)) return v;
      // Pairs inside U are visited from both ends; test each once.
      if (!t.beats(w, u) && !(w < k) && !test(w, u)) return v;
    }
  }
  v.connected = true;
  return v;
}

/// Largest k such that the tournament is strongly k-connected.
inline int VertexConnectivity(const Tournament& t) {
  const int n = t.size();
  if (n <= 1) return 0;
  int best = n - 1;
  for (Vertex i = 0; i < n && i <= best; ++i) {
    for (Vertex j = 0; j < n; ++j) {
      if (j == i) continue;
      if (!t.beats(i, j)) best = std::min(best, LocalConnectivity(t, i, j, best));
      if (!t.beats(j, i)) best = std::min(best, LocalConnectivity(t, j, i, best));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

/// Vertex-disjoint paths from `sources` to `sinks` plus an optional extra sink.
struct PathSystem {
  std::vector<Path> paths;
  VertexSet sources;
  VertexSet sinks;
  std::optional<Vertex> special_sink;

  /// Vertices used by all paths.
  VertexSet used() const {
    std::vector<Vertex> all;
    for (const auto& p : paths) all.insert(all.end(), p.begin(), p.end());
    return VertexSet(std::move(all));
  }
  int total_vertices() const {
    int c = 0;
    for (const auto& p : paths) c += static_cast<int>(p.size());
    return c;
  }
  /// Index of the path ending at the special sink, or -1.
  int special_index() const {
    if (!special_sink) return -1;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (!paths[i].empty() && paths[i].back() == *special_sink) return static_cast<int>(i);
    return -1;
  }
};

/// First violated PathSystem invariant, or empty when valid.
inline std::string AuditPathSystem(const Tournament& t, const PathSystem& sys) {
  std::vector<char> seen(t.size(), 0);
  std::vector<char> end_used(t.size(), 0);
  for (std::size_t i = 0; i < sys.paths.size(); ++i) {
    const Path& p = sys.paths[i];
    if (p.empty()) return "path " + std::to_string(i) + " is empty";
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!t.valid_vertex(p[j])) return "path " + std::to_string(i) + " has an invalid vertex";
      if (seen[p[j]]) return "paths are not vertex-disjoint at vertex " + std::to_string(p[j]);
      seen[p[j]] = 1;
      if (j > 0 && !t.beats(p[j - 1], p[j])) {
        return "path " + std::to_string(i) + " uses missing edge " + std::to_string(p[j - 1]) + "->" +
               std::to_string(p[j]);
      }
    }
    if (!sys.sources.contains(p.front())) return "path " + std::to_string(i) + " does not start in sources";
    const bool sink_end = sys.sinks.contains(p.back()) || (sys.special_sink && *sys.special_sink == p.back());
    if (!sink_end) return "path " + std::to_string(i) + " does not end in sinks";
  }
  return {};
}

/// Raised when fewer than the requested number of disjoint paths exist; carries
/// a Menger separator of size < count.
class InfeasibleSystem : public std::runtime_error {
 public:
  InfeasibleSystem(VertexSet separator, int count, int achievable)
      : std::runtime_error("only " + std::to_string(achievable) + " of " + std::to_string(count) +
                           " disjoint paths exist"),
        separator_(std::move(separator)), achievable_(achievable) {}
  const VertexSet& separator() const { return separator_; }
  int achievable() const { return achievable_; }

 private:
  VertexSet separator_;
  int achievable_;
};

namespace detail {

class MinCostFlow {
 public:
  struct Edge {
    int to;
    int rev;
    int cap;
    int cost;
    int original;  // capacity at construction, 0 for residual back edges
  };

  explicit MinCostFlow(int nodes) : graph_(nodes) {}

  void AddEdge(int from, int to, int cap, int cost) {
    graph_[from].push_back({to, static_cast<int>(graph_[to].size()), cap, cost, cap});
    graph_[to].push_back({from, static_cast<int>(graph_[from].size()) - 1, 0, -cost, 0});
  }

  /// Pushes up to `want` units along successive shortest paths. Dijkstra with
  /// potentials; all original costs are non-negative.
  int Run(int source, int sink, int want) {
    const int n = static_cast<int>(graph_.size());
    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> potential(n, 0);
    int flow = 0;
    while (flow < want) {
      std::vector<long long> dist(n, kInf);
      std::vector<int> prev_node(n, -1), prev_edge(n, -1);
      using Item = std::pair<long long, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[source] = 0;
      pq.push({0, source});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        for (int e = 0; e < static_cast<int>(graph_[u].size()); ++e) {
          const Edge& ed = graph_[u][e];
          if (ed.cap <= 0) continue;
          const long long nd = d + ed.cost + potential[u] - potential[ed.to];
          if (nd < dist[ed.to]) {
            dist[ed.to] = nd;
            prev_node[ed.to] = u;
            prev_edge[ed.to] = e;
            pq.push({nd, ed.to});
          }
        }
      }
      if (dist[sink] >= kInf) break;
      for (int v = 0; v < n; ++v)
        if (dist[v] < kInf) potential[v] += dist[v];
      for (int v = sink; v != source; v = prev_node[v]) {
        Edge& ed = graph_[prev_node[v]][prev_edge[v]];
        ed.cap -= 1;
        graph_[v][ed.rev].cap += 1;
      }
      ++flow;
    }
    return flow;
  }

  std::vector<char> Reach(int source) const {
    std::vector<char> seen(graph_.size(), 0);
    std::vector<int> stack{source};
    seen[source] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const Edge& e : graph_[u])
        if (e.cap > 0 && !seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
    }
    return seen;
  }

  const std::vector<Edge>& out(int u) const { return graph_[u]; }

 private:
  std::vector<std::vector<Edge>> graph_;
};

}  // namespace detail

/// Exactly `count` vertex-disjoint paths from `sources` to `sinks` (plus the
/// optional `special` sink) avoiding `forbidden`, minimizing the total number
/// of edges (equivalently vertices). Throws InfeasibleSystem with a Menger
/// separator when fewer than `count` paths exist.
inline PathSystem MinCostDisjointSystem(const Tournament& t, const VertexSet& sources, const VertexSet& sinks,
                                        std::optional<Vertex> special, const VertexSet& forbidden, int count) {
  const int n = t.size();
  for (Vertex v : sources) t.CheckVertex(v);
  for (Vertex v : sinks) t.CheckVertex(v);
  for (Vertex v : forbidden) t.CheckVertex(v);
  if (special) t.CheckVertex(*special);
  VertexSet targets = sinks;
  if (special) targets.insert(*special);
  if (count < 0) throw DomainError("negative path count");
  if (static_cast<int>(sources.size()) < count) throw DomainError("fewer sources than requested paths");
  if (!sources.disjoint(targets)) throw DomainError("sources and sinks overlap");
  if (!forbidden.disjoint(sources.united(targets))) throw DomainError("forbidden set meets sources or sinks");

  std::vector<char> allowed(n, 1);
  for (Vertex v : forbidden) allowed[v] = 0;
  const int super_source = 2 * n;
  const int super_sink = 2 * n + 1;
  auto in = [](Vertex v) { return 2 * v; };
  auto out = [](Vertex v) { return 2 * v + 1; };
  detail::MinCostFlow mcf(2 * n + 2);
  for (Vertex v : sources) mcf.AddEdge(super_source, in(v), 1, 0);
  for (Vertex v = 0; v < n; ++v) {
    if (!allowed[v]) continue;
    mcf.AddEdge(in(v), out(v), 1, 0);
  }
  for (Vertex u = 0; u < n; ++u) {
    if (!allowed[u]) continue;
    for (Vertex w = 0; w < n; ++w)
      if (w != u && allowed[w] && t.beats(u, w)) mcf.AddEdge(out(u), in(w), count + 1, 1);
  }
  for (Vertex v : targets) mcf.AddEdge(out(v), super_sink, 1, 0);

  const int achieved = mcf.Run(super_source, super_sink, count);
  if (achieved < count) {
    auto seen = mcf.Reach(super_source);
    std::vector<Vertex> sep;
    for (Vertex v = 0; v < n; ++v) {
      if (!allowed[v]) continue;
      const bool cut_split = seen[in(v)] && !seen[out(v)];
      const bool cut_source = sources.contains(v) && !seen[in(v)];
      const bool cut_sink = targets.contains(v) && seen[out(v)];
      if (cut_split || cut_source || cut_sink) sep.push_back(v);
    }
    throw InfeasibleSystem(VertexSet(std::move(sep)), count, achieved);
  }

  // Decompose: follow edges carrying flow from each used source.
  PathSystem sys;
  sys.sources = sources;
  sys.sinks = sinks;
  sys.special_sink = special;
  for (const auto& e : mcf.out(super_source)) {
    if (e.cap != 0) continue;
    Path p;
    int node = e.to;  // in(v)
    while (node != super_sink) {
      const Vertex v = node / 2;
      p.push_back(v);
      // in(v) -> out(v) -> next in(w) or super sink.
      int next = -1;
      for (const auto& f : mcf.out(out(v)))
        if (f.original > 0 && f.cap < f.original) {
          next = f.to;
          break;
        }
      node = next;
    }
    sys.paths.push_back(std::move(p));
  }
  std::sort(sys.paths.begin(), sys.paths.end());
  return sys;
}

}  // namespace tourlink
