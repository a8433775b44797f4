#pragma once

// Dense tournament representation and the vertex-set / path vocabulary shared
// by every other header in the library.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tourlink {

using Vertex = int;
using Path = std::vector<Vertex>;

/// Raised for argument/domain violations (out-of-range vertex, empty set, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an orientation table or text file does not describe a tournament.
class MalformedInput : public std::runtime_error {
 public:
  MalformedInput(const std::string& what, int line = -1, int column = -1)
      : std::runtime_error(Format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string Format(const std::string& what, int line, int column) {
    if (line < 0) return what;
    std::ostringstream os;
    os << "line " << line;
    if (column >= 0) os << ", column " << column;
    os << ": " << what;
    return os.str();
  }

  int line_;
  int column_;
};

/// Sorted, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<Vertex> vs) : members_(vs) { Normalize(); }
  explicit VertexSet(std::vector<Vertex> vs) : members_(std::move(vs)) { Normalize(); }

  /// Builds a set from a list that must not contain duplicates.
  static VertexSet FromUnique(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) {
      throw DomainError("vertex set contains duplicates");
    }
    VertexSet s;
    s.members_ = std::move(vs);
    return s;
  }

  bool contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }
  void insert(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }
  void erase(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
  }

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  Vertex operator[](std::size_t i) const { return members_[i]; }
  Vertex front() const { return members_.front(); }
  const std::vector<Vertex>& vec() const { return members_; }

  VertexSet united(const VertexSet& o) const {
    VertexSet r;
    std::set_union(begin(), end(), o.begin(), o.end(), std::back_inserter(r.members_));
    return r;
  }
  VertexSet intersected(const VertexSet& o) const {
    VertexSet r;
    std::set_intersection(begin(), end(), o.begin(), o.end(), std::back_inserter(r.members_));
    return r;
  }
  VertexSet minus(const VertexSet& o) const {
    VertexSet r;
    std::set_difference(begin(), end(), o.begin(), o.end(), std::back_inserter(r.members_));
    return r;
  }
  bool disjoint(const VertexSet& o) const {
    auto a = begin();
    auto b = o.begin();
    while (a != end() && b != o.end()) {
      if (*a == *b) return false;
      if (*a < *b) ++a; else ++b;
    }
    return true;
  }
  /// First `count` members in id order.
  VertexSet first(std::size_t count) const {
    VertexSet r;
    r.members_.assign(members_.begin(), members_.begin() + std::min(count, size()));
    return r;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  void Normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  std::vector<Vertex> members_;
};

/// One cell of an orientation table, read as "row u relative to column v".
enum class Orientation : std::uint8_t { kNone, kForward, kBackward };

/// Name of the pseudo-random stream used for every seeded generator.
inline constexpr std::string_view kGeneratorName = "mt19937_64/v1";

using Rng = std::mt19937_64;

/// Complete oriented graph on vertices 0..n-1. Immutable after construction.
class Tournament {
 public:
  Tournament() = default;

  /// Transitive tournament with i -> j for all i < j.
  static Tournament Transitive(int n) {
    Tournament t(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) t.SetEdge(u, v);
    return t;
  }

  /// Rotational tournament on odd n: i -> i+1, ..., i+(n-1)/2 (mod n).
  static Tournament Rotational(int n) {
    if (n < 1 || n % 2 == 0) throw DomainError("rotational tournament needs odd n");
    Tournament t(n);
    for (int u = 0; u < n; ++u)
      for (int d = 1; d <= (n - 1) / 2; ++d) t.SetEdge(u, (u + d) % n);
    return t;
  }

  static Tournament FromMatrix(int n, const std::vector<std::vector<Orientation>>& rows);

  /// Builds a tournament from an edge predicate evaluated on every pair u < v.
  template <typename Pred>
  static Tournament FromPredicate(int n, Pred&& u_beats_v) {
    Tournament t(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (u_beats_v(u, v)) t.SetEdge(u, v); else t.SetEdge(v, u);
      }
    return t;
  }

  int size() const { return n_; }

  /// True iff u -> v.
  bool beats(Vertex u, Vertex v) const {
    return (rows_[Index(u, v)] >> (v & 63)) & 1u;
  }

  int out_degree(Vertex v) const {
    CheckVertex(v);
    int d = 0;
    for (int w = 0; w < words_; ++w) d += std::popcount(rows_[static_cast<std::size_t>(v) * words_ + w]);
    return d;
  }
  int in_degree(Vertex v) const { return n_ - 1 - out_degree(v); }

  VertexSet out_neighbors(Vertex v) const {
    CheckVertex(v);
    std::vector<Vertex> r;
    for (int u = 0; u < n_; ++u)
      if (u != v && beats(v, u)) r.push_back(u);
    return VertexSet::FromUnique(std::move(r));
  }
  VertexSet in_neighbors(Vertex v) const {
    CheckVertex(v);
    std::vector<Vertex> r;
    for (int u = 0; u < n_; ++u)
      if (u != v && beats(u, v)) r.push_back(u);
    return VertexSet::FromUnique(std::move(r));
  }

  /// Per-vertex (out-degree, in-degree).
  std::vector<std::pair<int, int>> degrees() const {
    std::vector<std::pair<int, int>> d(n_);
    for (int v = 0; v < n_; ++v) {
      int out = out_degree(v);
      d[v] = {out, n_ - 1 - out};
    }
    return d;
  }

  /// Number of out-neighbours of v inside `set`.
  int out_degree_into(Vertex v, const VertexSet& set) const {
    int d = 0;
    for (Vertex u : set)
      if (u != v && beats(v, u)) ++d;
    return d;
  }
  int in_degree_from(Vertex v, const VertexSet& set) const {
    int d = 0;
    for (Vertex u : set)
      if (u != v && beats(u, v)) ++d;
    return d;
  }

  /// True iff every edge between a and b is oriented a -> b.
  bool dominates(const VertexSet& a, const VertexSet& b) const {
    for (Vertex u : a)
      for (Vertex v : b)
        if (u != v && !beats(u, v)) return false;
    return true;
  }

  bool valid_vertex(Vertex v) const { return v >= 0 && v < n_; }
  void CheckVertex(Vertex v) const {
    if (!valid_vertex(v)) throw DomainError("vertex " + std::to_string(v) + " out of range");
  }

  friend bool operator==(const Tournament&, const Tournament&) = default;

 private:
  friend Tournament RandomTournament(int, std::uint64_t);
  friend class MutableTournament;

  explicit Tournament(int n)
      : n_(n), words_((n + 63) / 64), rows_(static_cast<std::size_t>(n) * ((n + 63) / 64), 0) {}

  std::size_t Index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * words_ + static_cast<std::size_t>(v >> 6);
  }
  void SetEdge(Vertex u, Vertex v) {
    rows_[Index(u, v)] |= (std::uint64_t{1} << (v & 63));
    rows_[Index(v, u)] &= ~(std::uint64_t{1} << (u & 63));
  }

  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// Edit buffer for generators: starts from some tournament, flips edges, then
/// freezes into an immutable Tournament.
class MutableTournament {
 public:
  explicit MutableTournament(int n) : t_(n) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) t_.SetEdge(u, v);
  }
  explicit MutableTournament(Tournament t) : t_(std::move(t)) {}

  int size() const { return t_.size(); }
  void orient(Vertex u, Vertex v) {
    if (u == v) throw DomainError("self-loop requested");
    t_.SetEdge(u, v);
  }
  bool beats(Vertex u, Vertex v) const { return t_.beats(u, v); }
  /// Copies the orientation of `sub` onto the vertices listed in `ids`.
  void embed(const Tournament& sub, const std::vector<Vertex>& ids) {
    for (int a = 0; a < sub.size(); ++a)
      for (int b = a + 1; b < sub.size(); ++b) {
        if (sub.beats(a, b)) orient(ids[a], ids[b]); else orient(ids[b], ids[a]);
      }
  }
  const Tournament& view() const { return t_; }
  Tournament freeze() && { return std::move(t_); }

 private:
  Tournament t_;
};

inline Tournament Tournament::FromMatrix(int n, const std::vector<std::vector<Orientation>>& rows) {
  if (n < 1) throw MalformedInput("tournament needs at least one vertex");
  if (static_cast<int>(rows.size()) != n) throw MalformedInput("expected " + std::to_string(n) + " rows");
  for (int u = 0; u < n; ++u) {
    if (static_cast<int>(rows[u].size()) != n) {
      throw MalformedInput("row " + std::to_string(u) + " has wrong length");
    }
  }
  Tournament t(n);
  for (int u = 0; u < n; ++u) {
    if (rows[u][u] != Orientation::kNone) {
      throw MalformedInput("self-loop at vertex " + std::to_string(u));
    }
    for (int v = u + 1; v < n; ++v) {
      const Orientation a = rows[u][v];
      const Orientation b = rows[v][u];
      const std::string pair = "pair (" + std::to_string(u) + "," + std::to_string(v) + ")";
      if (a == Orientation::kForward && b == Orientation::kForward) {
        throw MalformedInput("both directions present for " + pair);
      }
      if (a == Orientation::kBackward && b == Orientation::kBackward) {
        throw MalformedInput("both directions present for " + pair);
      }
      if (a == Orientation::kNone && b == Orientation::kNone) {
        throw MalformedInput("missing orientation for " + pair);
      }
      const bool forward = a == Orientation::kForward || (a == Orientation::kNone && b == Orientation::kBackward);
      const bool backward = a == Orientation::kBackward || (a == Orientation::kNone && b == Orientation::kForward);
      if (forward == backward) throw MalformedInput("inconsistent orientation for " + pair);
      if (forward) t.SetEdge(u, v); else t.SetEdge(v, u);
    }
  }
  return t;
}

/// Orients each pair u < v by one bit of an mt19937_64 stream seeded with `seed`,
/// pairs visited in row-major order.
inline Tournament RandomTournament(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("random tournament needs n >= 1");
  Rng rng(seed);
  Tournament t(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (rng() >> 63) t.SetEdge(u, v); else t.SetEdge(v, u);
    }
  return t;
}

/// Induced subtournament plus the id maps in both directions.
struct InducedTournament {
  Tournament tournament;
  std::vector<Vertex> to_parent;  // local id -> parent id
  std::vector<Vertex> to_local;   // parent id -> local id, -1 when absent

  Vertex local(Vertex parent) const { return to_local[parent]; }
  Vertex parent(Vertex local) const { return to_parent[local]; }
  VertexSet to_parent_set(const VertexSet& s) const {
    std::vector<Vertex> r;
    r.reserve(s.size());
    for (Vertex v : s) r.push_back(to_parent[v]);
    return VertexSet(std::move(r));
  }
  VertexSet to_local_set(const VertexSet& s) const {
    std::vector<Vertex> r;
    r.reserve(s.size());
    for (Vertex v : s)
      if (to_local[v] >= 0) r.push_back(to_local[v]);
    return VertexSet(std::move(r));
  }
  Path to_parent_path(const Path& p) const {
    Path r;
    r.reserve(p.size());
    for (Vertex v : p) r.push_back(to_parent[v]);
    return r;
  }
};

inline InducedTournament Induced(const Tournament& t, const VertexSet& s) {
  if (s.empty()) throw DomainError("induced subtournament of an empty set");
  for (Vertex v : s) t.CheckVertex(v);
  InducedTournament r;
  r.to_parent = s.vec();
  r.to_local.assign(t.size(), -1);
  for (std::size_t i = 0; i < r.to_parent.size(); ++i) r.to_local[r.to_parent[i]] = static_cast<Vertex>(i);
  const auto& ids = r.to_parent;
  r.tournament = Tournament::FromPredicate(static_cast<int>(ids.size()),
                                           [&](int a, int b) { return t.beats(ids[a], ids[b]); });
  return r;
}

/// True iff `p` is a nonempty sequence of distinct vertices joined by forward edges.
inline bool IsPath(const Tournament& t, std::span<const Vertex> p) {
  if (p.empty()) return false;
  std::vector<char> seen(t.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!t.valid_vertex(p[i]) || seen[p[i]]) return false;
    seen[p[i]] = 1;
    if (i > 0 && !t.beats(p[i - 1], p[i])) return false;
  }
  return true;
}

/// Vertices reachable from `source` using only vertices with allowed[v] set.
inline std::vector<char> Reachable(const Tournament& t, Vertex source, const std::vector<char>& allowed) {
  std::vector<char> seen(t.size(), 0);
  if (!allowed[source]) return seen;
  std::vector<Vertex> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v = 0; v < t.size(); ++v) {
      if (!seen[v] && allowed[v] && v != u && t.beats(u, v)) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

/// Shortest path from `source` to `target` through allowed vertices; empty if none.
inline Path ShortestPath(const Tournament& t, Vertex source, Vertex target, const std::vector<char>& allowed) {
  if (!allowed[source] || !allowed[target]) return {};
  if (source == target) return {source};
  std::vector<Vertex> parent(t.size(), -1);
  std::vector<Vertex> queue{source};
  parent[source] = source;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex u = queue[head];
    for (Vertex v = 0; v < t.size(); ++v) {
      if (parent[v] < 0 && allowed[v] && v != u && t.beats(u, v)) {
        parent[v] = u;
        if (v == target) {
          Path p{v};
          while (p.back() != source) p.push_back(parent[p.back()]);
          std::reverse(p.begin(), p.end());
          return p;
        }
        queue.push_back(v);
      }
    }
  }
  return {};
}

inline bool IsStronglyConnected(const Tournament& t, const std::vector<char>& allowed) {
  Vertex first = -1;
  int count = 0;
  for (Vertex v = 0; v < t.size(); ++v)
    if (allowed[v]) {
      if (first < 0) first = v;
      ++count;
    }
  if (count <= 1) return true;
  auto fwd = Reachable(t, first, allowed);
  for (Vertex v = 0; v < t.size(); ++v)
    if (allowed[v] && !fwd[v]) return false;
  // Reverse reachability: BFS over in-edges.
  std::vector<char> seen(t.size(), 0);
  std::vector<Vertex> stack{first};
  seen[first] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v = 0; v < t.size(); ++v)
      if (!seen[v] && allowed[v] && v != u && t.beats(v, u)) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == count;
}

inline bool IsStronglyConnected(const Tournament& t) {
  return IsStronglyConnected(t, std::vector<char>(t.size(), 1));
}

inline std::vector<char> MaskOf(int n, const VertexSet& s) {
  std::vector<char> m(n, 0);
  for (Vertex v : s) m[v] = 1;
  return m;
}

// ---------------------------------------------------------------------------
// Text format: "n\n" then n rows over {'1','0','-'}, each ending in '\n'.

inline std::string Serialize(const Tournament& t) {
  std::string out = std::to_string(t.size());
  out += '\n';
  for (int u = 0; u < t.size(); ++u) {
    for (int v = 0; v < t.size(); ++v) out += u == v ? '-' : (t.beats(u, v) ? '1' : '0');
    out += '\n';
  }
  return out;
}

inline Tournament Parse(std::string_view text) {
  std::size_t pos = 0;
  int line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string_view::npos) {
      throw MalformedInput("missing terminating linefeed", line_no, static_cast<int>(text.size() - pos) + 1);
    }
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return true;
  };
  std::string_view header;
  if (!next_line(header)) throw MalformedInput("empty input", 1, 1);
  if (header.empty()) throw MalformedInput("expected vertex count", 1, 1);
  long long n = 0;
  for (std::size_t i = 0; i < header.size(); ++i) {
    char c = header[i];
    if (c < '0' || c > '9') throw MalformedInput("expected decimal vertex count", 1, static_cast<int>(i) + 1);
    n = n * 10 + (c - '0');
    if (n > 1'000'000) throw MalformedInput("vertex count too large", 1, static_cast<int>(i) + 1);
  }
  if (n < 1) throw MalformedInput("vertex count must be positive", 1, 1);
  std::vector<std::vector<Orientation>> rows(n, std::vector<Orientation>(n, Orientation::kNone));
  for (int u = 0; u < n; ++u) {
    std::string_view line;
    if (!next_line(line)) throw MalformedInput("missing row", line_no + 1, 1);
    if (static_cast<long long>(line.size()) != n) {
      throw MalformedInput("row has " + std::to_string(line.size()) + " characters, expected " + std::to_string(n),
                           line_no, static_cast<int>(std::min<std::size_t>(line.size(), n)) + 1);
    }
    for (int v = 0; v < n; ++v) {
      char c = line[v];
      if (u == v) {
        if (c != '-') throw MalformedInput("diagonal entry must be '-'", line_no, v + 1);
        continue;
      }
      if (c == '1') rows[u][v] = Orientation::kForward;
      else if (c == '0') rows[u][v] = Orientation::kBackward;
      else throw MalformedInput(std::string("unexpected character '") + c + "'", line_no, v + 1);
    }
  }
  if (pos != text.size()) throw MalformedInput("trailing content after last row", line_no + 1, 1);
  // Antisymmetry: the '1'/'0' cells must mirror each other.
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((rows[u][v] == Orientation::kForward) == (rows[v][u] == Orientation::kForward)) {
        throw MalformedInput("entries (" + std::to_string(u) + "," + std::to_string(v) + ") and (" +
                                 std::to_string(v) + "," + std::to_string(u) + ") are not antisymmetric",
                             u + 2, v + 1);
      }
  return Tournament::FromMatrix(static_cast<int>(n), rows);
}

inline std::ostream& operator<<(std::ostream& os, const VertexSet& s) {
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  return os << '}';
}

}  // namespace tourlink
