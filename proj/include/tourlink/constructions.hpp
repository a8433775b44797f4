#pragma once

// The two counterexample families: a (2k-1)-connected tournament with large
// minimum semi-degree that is not k-linked, and a (5k-1)-connected one that is
// not 2k-linked. Certificates are JSON documents checked by VerifyCertificate,
// which only reads T and the payload.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tourlink/flow.hpp"
#include "tourlink/linkage.hpp"
#include "tourlink/tournament.hpp"

namespace tourlink {

using Json = nlohmann::json;

inline constexpr int kCertificateSchemaVersion = 1;
inline constexpr int kRegenerationAttempts = 64;

class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, std::vector<std::string> log)
      : std::runtime_error(what), log_(std::move(log)) {}
  const std::vector<std::string>& attempts() const { return log_; }

 private:
  std::vector<std::string> log_;
};

struct Construction31Params {
  int k = 2;
  int m = 4;
  int n = 41;
  std::uint64_t seed = 0;
  int blob_floor = -1;  // blob size at which random blobs are tried first; -1 means 4m+4
};

struct Construction32Params {
  int k = 3;
  int n = 150;
  std::uint64_t seed = 0;
  int w_floor = 1;
};

// A, B carry the terminals x_i = A[i], y_i = B[i]; X and Y are the two blobs.
struct Parts31 {
  VertexSet A, B, C, X, Y;
  std::vector<std::string> log;  // one line per blob attempt
};

struct Parts32 {
  VertexSet X, Y, S, W;
  std::vector<Vertex> y_prime;  // y'_i in S, with y'_i -> x_i
  std::vector<Vertex> x_prime;  // x'_i in S, with y_i -> x'_i
};

struct Built31 {
  Tournament tournament;
  Parts31 parts;
};

struct Built32 {
  Tournament tournament;
  Parts32 parts;
};

struct Certificate {
  int schema_version = kCertificateSchemaVersion;
  std::string kind;  // connectivity | degree | not-linked-31 | not-linked-32
  Json params = Json::object();
  std::uint64_t seed = 0;
  Json payload = Json::object();
  bool verdict = false;
};

inline Json ToJson(const Certificate& c) {
  return Json{{"schema_version", c.schema_version}, {"kind", c.kind},       {"params", c.params},
              {"seed", c.seed},                     {"payload", c.payload}, {"verdict", c.verdict}};
}

inline Certificate CertificateFromJson(const Json& j) {
  Certificate c;
  c.schema_version = j.at("schema_version").get<int>();
  c.kind = j.at("kind").get<std::string>();
  c.params = j.value("params", Json::object());
  c.seed = j.value("seed", std::uint64_t{0});
  c.payload = j.at("payload");
  c.verdict = j.at("verdict").get<bool>();
  return c;
}

namespace detail {

inline void OrientRandom(MutableTournament& mt, const std::vector<Vertex>& ids, Rng& rng) {
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      if (rng() >> 63) mt.orient(ids[a], ids[b]); else mt.orient(ids[b], ids[a]);
    }
}

inline void OrientAll(MutableTournament& mt, const VertexSet& from, const VertexSet& to) {
  for (Vertex u : from)
    for (Vertex v : to) mt.orient(u, v);
}

inline std::vector<Vertex> Range(Vertex lo, int count) {
  std::vector<Vertex> r(count);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

// Rotational tournament on 2r+1 vertices (r-connected), plus one vertex with r
// out- and r in-neighbours when `size` is even, under a random relabelling.
inline Tournament StructuredBlob(int size, Rng& rng) {
  const int odd = size % 2 == 1 ? size : size - 1;
  const Tournament rot = Tournament::Rotational(odd);
  std::vector<Vertex> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  MutableTournament mt(size);
  for (int a = 0; a < odd; ++a)
    for (int b = a + 1; b < odd; ++b) {
      if (rot.beats(a, b)) mt.orient(perm[a], perm[b]); else mt.orient(perm[b], perm[a]);
    }
  if (odd < size) {
    const Vertex extra = perm[odd];
    for (int a = 0; a < odd; ++a) {
      if (a % 2 == 0) mt.orient(extra, perm[a]); else mt.orient(perm[a], extra);
    }
  }
  return std::move(mt).freeze();
}

// A blob tournament that the flow checker certifies as `need`-connected.
inline Tournament ConnectedBlob(int size, int need, int floor, Rng& rng, std::vector<std::string>& log) {
  if (size >= floor) {
    for (int attempt = 0; attempt < kRegenerationAttempts; ++attempt) {
      Tournament cand = RandomTournament(size, rng());
      const auto v = IsKConnected(cand, need);
      log.push_back("random blob attempt " + std::to_string(attempt) + ": " + (v.connected ? "ok" : v.reason));
      if (v.connected) return cand;
    }
  }
  Tournament cand = StructuredBlob(size, rng);
  const auto v = IsKConnected(cand, need);
  log.push_back(std::string("rotational blob: ") + (v.connected ? "ok" : v.reason));
  if (!v.connected) {
    throw GenerationError("no " + std::to_string(need) + "-connected blob on " + std::to_string(size) + " vertices", log);
  }
  return cand;
}

inline Json SetJson(const VertexSet& s) { return Json(s.vec()); }

inline VertexSet SetFromJson(const Json& j) { return VertexSet(j.get<std::vector<Vertex>>()); }

// Closure of `source` under out-edges inside `allowed`.
inline VertexSet ReachSet(const Tournament& t, Vertex source, const std::vector<char>& allowed) {
  const auto seen = Reachable(t, source, allowed);
  std::vector<Vertex> r;
  for (Vertex v = 0; v < t.size(); ++v)
    if (seen[v]) r.push_back(v);
  return VertexSet::FromUnique(std::move(r));
}

// `closure` contains `source`, avoids `target`, lies inside `allowed` and has
// no out-edge to an allowed vertex outside it: then `target` is unreachable.
inline bool ClosureWitnessHolds(const Tournament& t, Vertex source, Vertex target, const VertexSet& allowed,
                                const VertexSet& closure) {
  if (!t.valid_vertex(source) || !t.valid_vertex(target)) return false;
  if (!closure.contains(source) || closure.contains(target) || !allowed.contains(target)) return false;
  for (Vertex v : closure) {
    if (!t.valid_vertex(v) || !allowed.contains(v)) return false;
    for (Vertex w : allowed)
      if (!closure.contains(w) && t.beats(v, w)) return false;
  }
  return true;
}

}  // namespace detail

/// Builds the first family. Vertex ids: A = [0,k), B = [k,2k), C = [2k,3k-1),
/// then the X blob and the Y blob. Orientation as drawn: Y->X, A->C, C->B,
/// X->C, C->Y, Y->A, B->X, A->B except y_i -> x_i, and A<->X, B<->Y random
/// with at least m edges each way per terminal.
inline Built31 BuildConstruction31(const Construction31Params& p) {
  if (p.k < 2) throw DomainError("k must be at least 2");
  if (p.m < 2 * p.k) throw DomainError("m must be at least 2k");
  if ((p.n - 3 * p.k + 1) % 2 != 0 || p.n - 3 * p.k + 1 <= 0) throw DomainError("n - 3k + 1 must be positive and even");
  const int k = p.k;
  const int blob = (p.n - 3 * k + 1) / 2;
  if (blob < 2 * p.m) throw DomainError("blob of " + std::to_string(blob) + " vertices cannot host 2m out- and in-edges per terminal");
  if (blob < 4 * p.m + 1) {
    // 2m-connectivity needs at least 4m+1 vertices.
    throw DomainError("blob of " + std::to_string(blob) + " vertices cannot be " + std::to_string(2 * p.m) + "-connected");
  }
  Rng rng(p.seed);
  Built31 out;
  Parts31& parts = out.parts;
  parts.A = VertexSet(detail::Range(0, k));
  parts.B = VertexSet(detail::Range(k, k));
  parts.C = VertexSet(detail::Range(2 * k, k - 1));
  const auto xs = detail::Range(3 * k - 1, blob);
  const auto ys = detail::Range(3 * k - 1 + blob, blob);
  parts.X = VertexSet(xs);
  parts.Y = VertexSet(ys);
  const int floor = p.blob_floor >= 0 ? p.blob_floor : 4 * p.m + 4;

  MutableTournament mt(p.n);
  detail::OrientRandom(mt, parts.A.vec(), rng);
  detail::OrientRandom(mt, parts.B.vec(), rng);
  detail::OrientRandom(mt, parts.C.vec(), rng);
  mt.embed(detail::ConnectedBlob(blob, 2 * p.m, floor, rng, parts.log), xs);
  mt.embed(detail::ConnectedBlob(blob, 2 * p.m, floor, rng, parts.log), ys);
  detail::OrientAll(mt, parts.Y, parts.X);
  detail::OrientAll(mt, parts.A, parts.C);
  detail::OrientAll(mt, parts.C, parts.B);
  detail::OrientAll(mt, parts.X, parts.C);
  detail::OrientAll(mt, parts.C, parts.Y);
  detail::OrientAll(mt, parts.Y, parts.A);
  detail::OrientAll(mt, parts.B, parts.X);
  detail::OrientAll(mt, parts.A, parts.B);
  for (int i = 0; i < k; ++i) mt.orient(parts.B[i], parts.A[i]);
  // Terminal vs blob: first m of a shuffle out, next m in, the rest random.
  auto mix = [&](const VertexSet& terminals, const std::vector<Vertex>& blob_ids) {
    for (Vertex a : terminals) {
      std::vector<Vertex> order = blob_ids;
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const bool out_edge = i < static_cast<std::size_t>(p.m) ? true
                              : i < static_cast<std::size_t>(2 * p.m) ? false
                              : (rng() >> 63) != 0;
        if (out_edge) mt.orient(a, order[i]); else mt.orient(order[i], a);
      }
    }
  };
  mix(parts.A, xs);
  mix(parts.B, ys);
  out.tournament = std::move(mt).freeze();
  return out;
}

/// Builds the second family. Vertex ids: X = [0,k), Y = [k,2k), S = the next
/// 4k-1, W = the rest. Orientation as drawn: X->Y, Y->W, W->X, X->S except
/// y'_i -> x_i, S->Y except y_i -> x'_i; y'_i = S[i], x'_i = S[k+i].
inline Built32 BuildConstruction32(const Construction32Params& p) {
  if (p.k < 3) throw DomainError("k must be at least 3");
  const int k = p.k;
  const int wsize = p.n - 6 * k + 1;
  if (wsize < std::max(1, p.w_floor)) throw DomainError("W would have " + std::to_string(wsize) + " vertices");
  Rng rng(p.seed);
  Built32 out;
  Parts32& parts = out.parts;
  parts.X = VertexSet(detail::Range(0, k));
  parts.Y = VertexSet(detail::Range(k, k));
  const auto ss = detail::Range(2 * k, 4 * k - 1);
  const auto ws = detail::Range(6 * k - 1, wsize);
  parts.S = VertexSet(ss);
  parts.W = VertexSet(ws);
  for (int i = 0; i < k; ++i) {
    parts.y_prime.push_back(ss[i]);
    parts.x_prime.push_back(ss[k + i]);
  }
  std::vector<Vertex> sw = ss;
  sw.insert(sw.end(), ws.begin(), ws.end());
  std::vector<std::string> log;
  auto pick = [&](const std::vector<Vertex>& ids, auto&& accept, const char* what) {
    for (int attempt = 0; attempt < kRegenerationAttempts; ++attempt) {
      Tournament cand = RandomTournament(static_cast<int>(ids.size()), rng());
      std::string why;
      if (accept(cand, why)) return cand;
      log.push_back(std::string(what) + " attempt " + std::to_string(attempt) + ": " + why);
    }
    throw GenerationError(std::string("retry budget exhausted for ") + what, log);
  };
  const Tournament sw_t = pick(sw, [&](const Tournament& c, std::string& why) {
    const auto v = IsKConnected(c, 5 * k - 1);
    why = v.reason;
    return v.connected;
  }, "S+W");
  const Tournament x_t = pick(parts.X.vec(), [](const Tournament& c, std::string& why) {
    why = "not strongly connected";
    return IsStronglyConnected(c);
  }, "X");
  const Tournament y_t = pick(parts.Y.vec(), [](const Tournament& c, std::string& why) {
    why = "not strongly connected";
    return IsStronglyConnected(c);
  }, "Y");
  MutableTournament mt(p.n);
  mt.embed(sw_t, sw);
  mt.embed(x_t, parts.X.vec());
  mt.embed(y_t, parts.Y.vec());
  detail::OrientAll(mt, parts.X, parts.Y);
  detail::OrientAll(mt, parts.Y, parts.W);
  detail::OrientAll(mt, parts.W, parts.X);
  detail::OrientAll(mt, parts.X, parts.S);
  detail::OrientAll(mt, parts.S, parts.Y);
  for (int i = 0; i < k; ++i) {
    mt.orient(parts.y_prime[i], parts.X[i]);
    mt.orient(parts.Y[i], parts.x_prime[i]);
  }
  out.tournament = std::move(mt).freeze();
  return out;
}

// ---------------------------------------------------------------------------
// Part maps.

inline Json PartsToJson(const Parts31& p) {
  return Json{{"kind", "c31"},
              {"A", detail::SetJson(p.A)},
              {"B", detail::SetJson(p.B)},
              {"C", detail::SetJson(p.C)},
              {"X", detail::SetJson(p.X)},
              {"Y", detail::SetJson(p.Y)}};
}

inline Json PartsToJson(const Parts32& p) {
  return Json{{"kind", "c32"},
              {"X", detail::SetJson(p.X)},
              {"Y", detail::SetJson(p.Y)},
              {"S", detail::SetJson(p.S)},
              {"W", detail::SetJson(p.W)},
              {"y_prime", p.y_prime},
              {"x_prime", p.x_prime}};
}

inline Parts31 Parts31FromJson(const Json& j) {
  Parts31 p;
  p.A = detail::SetFromJson(j.at("A"));
  p.B = detail::SetFromJson(j.at("B"));
  p.C = detail::SetFromJson(j.at("C"));
  p.X = detail::SetFromJson(j.at("X"));
  p.Y = detail::SetFromJson(j.at("Y"));
  return p;
}

inline Parts32 Parts32FromJson(const Json& j) {
  Parts32 p;
  p.X = detail::SetFromJson(j.at("X"));
  p.Y = detail::SetFromJson(j.at("Y"));
  p.S = detail::SetFromJson(j.at("S"));
  p.W = detail::SetFromJson(j.at("W"));
  p.y_prime = j.at("y_prime").get<std::vector<Vertex>>();
  p.x_prime = j.at("x_prime").get<std::vector<Vertex>>();
  return p;
}

// ---------------------------------------------------------------------------
// Certifiers.

/// Strong k-connectivity with, for every pair of the pivot family, k
/// internally disjoint witness paths. On failure the payload carries the
/// separator.
inline Certificate CertifyConnectivity(const Tournament& t, int k, std::uint64_t seed = 0) {
  Certificate c;
  c.kind = "connectivity";
  c.params = Json{{"k", k}, {"n", t.size()}};
  c.seed = seed;
  const auto verdict = IsKConnected(t, k);
  c.verdict = verdict.connected;
  if (!verdict.connected) {
    c.payload = Json{{"reason", verdict.reason}};
    if (verdict.separator) c.payload["separator"] = detail::SetJson(*verdict.separator);
    if (verdict.separated) c.payload["separated"] = {verdict.separated->first, verdict.separated->second};
    return c;
  }
  Json checks = Json::array();
  for (const auto& pc : verdict.checks) {
    const auto cert = MinVertexCut(t, pc.s, pc.t, k);
    checks.push_back(Json{{"s", pc.s}, {"t", pc.t}, {"paths", cert.witness_paths}});
  }
  c.payload = Json{{"pivots", detail::SetJson(verdict.pivots)}, {"checks", std::move(checks)}};
  return c;
}

/// Degree table with the measured minima against floor(m/2) and m.
inline Certificate CertifyDegrees(const Tournament& t, int m, std::uint64_t seed = 0) {
  Certificate c;
  c.kind = "degree";
  c.params = Json{{"m", m}, {"n", t.size()}};
  c.seed = seed;
  Json table = Json::array();
  int min_out = t.size();
  int min_in = t.size();
  for (const auto& [out, in] : t.degrees()) {
    table.push_back({out, in});
    min_out = std::min(min_out, out);
    min_in = std::min(min_in, in);
  }
  c.payload = Json{{"degrees", std::move(table)},
                   {"min_out", min_out},
                   {"min_in", min_in},
                   {"floor", m / 2},
                   {"meets_m", min_out >= m && min_in >= m}};
  c.verdict = min_out >= m / 2 && min_in >= m / 2;
  return c;
}

/// Every x_i -> y_i path that avoids the other terminals meets C, recorded as
/// the out-closure of x_i in T - C - (other terminals); with |C| < k no k
/// disjoint such paths exist. The exact oracle's verdict is attached.
inline Certificate CertifyNotLinked31(const Tournament& t, const Parts31& parts, std::uint64_t seed = 0,
                                      std::int64_t oracle_budget = kDefaultLinkageBudget) {
  Certificate c;
  c.kind = "not-linked-31";
  c.seed = seed;
  const int k = static_cast<int>(parts.A.size());
  c.params = Json{{"k", k}, {"n", t.size()}};
  bool ok = parts.B.size() == parts.A.size() && k >= 1;
  Json witnesses = Json::array();
  std::string failed;
  LinkageInstance inst;
  if (ok) {
    const VertexSet terminals = parts.A.united(parts.B);
    for (int i = 0; i < k; ++i) {
      const Vertex x = parts.A[i];
      const Vertex y = parts.B[i];
      inst.pairs.emplace_back(x, y);
      VertexSet blocked = parts.C.united(terminals);
      blocked.erase(x);
      blocked.erase(y);
      std::vector<char> allowed(t.size(), 1);
      for (Vertex v : blocked) allowed[v] = 0;
      const VertexSet closure = detail::ReachSet(t, x, allowed);
      const bool cut = !closure.contains(y);
      if (!cut && failed.empty()) failed = "pair " + std::to_string(i) + " reaches y_i without C";
      ok = ok && cut;
      witnesses.push_back(Json{{"x", x}, {"y", y}, {"blocked", detail::SetJson(blocked)}, {"closure", detail::SetJson(closure)}, {"cut", cut}});
    }
  }
  const bool pigeonhole = static_cast<int>(parts.C.size()) < k;
  if (!pigeonhole && failed.empty()) failed = "|C| = " + std::to_string(parts.C.size()) + " is not below k";
  ok = ok && pigeonhole;
  c.payload = Json{{"C", detail::SetJson(parts.C)}, {"pairs", std::move(witnesses)}, {"pigeonhole", pigeonhole}};
  if (ok) {
    const auto oracle = FindLinkageExact(t, inst, oracle_budget);
    c.payload["oracle"] = Json{{"status", ToString(oracle.status)}, {"nodes", oracle.nodes_explored}, {"budget", oracle_budget}};
    if (oracle.status == LinkStatus::kLinked) {
      ok = false;
      failed = "exact oracle found a linkage";
    }
  }
  if (!failed.empty()) c.payload["failed_check"] = failed;
  c.verdict = ok;
  return c;
}

/// For each of the 2k pairs (x_i, y'_i) and (x'_i, y_i), the target is
/// unreachable from the source inside W plus the two endpoints, so each path
/// spends a third vertex of X, Y or S; 6k of them exceed |X u Y u S| = 6k-1.
inline Certificate CertifyNotLinked32(const Tournament& t, const Parts32& parts, std::uint64_t seed = 0) {
  Certificate c;
  c.kind = "not-linked-32";
  c.seed = seed;
  const int k = static_cast<int>(parts.X.size());
  c.params = Json{{"k", k}, {"n", t.size()}};
  bool ok = parts.Y.size() == parts.X.size() && static_cast<int>(parts.y_prime.size()) == k &&
            static_cast<int>(parts.x_prime.size()) == k;
  std::string failed = ok ? "" : "part sizes disagree";
  Json witnesses = Json::array();
  if (ok) {
    auto add = [&](Vertex s, Vertex target, const char* label) {
      std::vector<char> allowed = MaskOf(t.size(), parts.W);
      allowed[s] = allowed[target] = 1;
      const VertexSet closure = detail::ReachSet(t, s, allowed);
      const bool cut = !closure.contains(target);
      if (!cut && failed.empty()) failed = std::string(label) + " pair reaches its target through W";
      ok = ok && cut;
      witnesses.push_back(Json{{"source", s}, {"target", target}, {"closure", detail::SetJson(closure)}, {"cut", cut}});
    };
    for (int i = 0; i < k; ++i) add(parts.X[i], parts.y_prime[i], "(x_i, y'_i)");
    for (int i = 0; i < k; ++i) add(parts.x_prime[i], parts.Y[i], "(x'_i, y_i)");
  }
  const int budget_vertices = static_cast<int>(parts.X.united(parts.Y).united(parts.S).size());
  const int needed = 2 * k * 3;
  if (ok && needed <= budget_vertices) {
    ok = false;
    failed = "counting bound does not bite";
  }
  c.payload = Json{{"W", detail::SetJson(parts.W)},
                   {"XYS", detail::SetJson(parts.X.united(parts.Y).united(parts.S))},
                   {"pairs", std::move(witnesses)},
                   {"needed", needed},
                   {"available", budget_vertices}};
  if (!failed.empty()) c.payload["failed_check"] = failed;
  c.verdict = ok;
  return c;
}

// ---------------------------------------------------------------------------

namespace detail {

inline bool InternallyDisjointWitness(const Tournament& t, Vertex s, Vertex target, const Json& paths, int k) {
  if (!paths.is_array() || static_cast<int>(paths.size()) < k) return false;
  std::vector<char> seen(t.size(), 0);
  for (const auto& pj : paths) {
    const auto p = pj.get<Path>();
    if (p.size() < 2 || p.front() != s || p.back() != target) return false;
    if (!IsPath(t, p)) return false;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      if (seen[p[i]]) return false;
      seen[p[i]] = 1;
    }
  }
  return true;
}

inline bool VerifyConnectivity(const Tournament& t, const Certificate& c) {
  const int k = c.params.at("k").get<int>();
  if (c.params.at("n").get<int>() != t.size()) return false;
  if (!c.verdict) {
    // A negative verdict stands when the separator really separates.
    if (!c.payload.contains("separator") || !c.payload.contains("separated")) return t.size() < k + 1;
    const VertexSet sep = SetFromJson(c.payload["separator"]);
    if (static_cast<int>(sep.size()) >= k) return false;
    const Vertex a = c.payload["separated"][0].get<Vertex>();
    const Vertex b = c.payload["separated"][1].get<Vertex>();
    if (!t.valid_vertex(a) || !t.valid_vertex(b) || sep.contains(a) || sep.contains(b) || t.beats(a, b)) return false;
    std::vector<char> allowed(t.size(), 1);
    for (Vertex v : sep) {
      if (!t.valid_vertex(v)) return false;
      allowed[v] = 0;
    }
    return !Reachable(t, a, allowed)[b];
  }
  if (t.size() < k + 1) return false;
  // Rebuild the pair family and match every pair to a witness entry.
  std::vector<std::vector<const Json*>> by_pair(t.size());
  std::vector<std::pair<Vertex, Vertex>> listed;
  for (const auto& chk : c.payload.at("checks")) listed.emplace_back(chk.at("s").get<Vertex>(), chk.at("t").get<Vertex>());
  std::sort(listed.begin(), listed.end());
  std::vector<std::pair<Vertex, Vertex>> needed;
  for (Vertex u = 0; u < k; ++u)
    for (Vertex w = 0; w < t.size(); ++w) {
      if (w == u) continue;
      if (!t.beats(u, w)) needed.emplace_back(u, w);
      if (!t.beats(w, u)) needed.emplace_back(w, u);
    }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  if (!std::includes(listed.begin(), listed.end(), needed.begin(), needed.end())) return false;
  for (const auto& chk : c.payload.at("checks")) {
    const Vertex s = chk.at("s").get<Vertex>();
    const Vertex target = chk.at("t").get<Vertex>();
    if (!t.valid_vertex(s) || !t.valid_vertex(target) || s == target) return false;
    if (!InternallyDisjointWitness(t, s, target, chk.at("paths"), k)) return false;
  }
  return true;
}

inline bool VerifyDegrees(const Tournament& t, const Certificate& c) {
  const int m = c.params.at("m").get<int>();
  const auto& table = c.payload.at("degrees");
  if (static_cast<int>(table.size()) != t.size()) return false;
  int min_out = t.size(), min_in = t.size();
  for (Vertex v = 0; v < t.size(); ++v) {
    if (table[v][0].get<int>() != t.out_degree(v) || table[v][1].get<int>() != t.in_degree(v)) return false;
    min_out = std::min(min_out, t.out_degree(v));
    min_in = std::min(min_in, t.in_degree(v));
  }
  if (c.payload.at("min_out").get<int>() != min_out || c.payload.at("min_in").get<int>() != min_in) return false;
  return c.verdict == (min_out >= m / 2 && min_in >= m / 2);
}

inline bool VerifyNotLinked31(const Tournament& t, const Certificate& c) {
  if (!c.verdict) return false;
  const int k = c.params.at("k").get<int>();
  const VertexSet cset = SetFromJson(c.payload.at("C"));
  if (static_cast<int>(cset.size()) >= k) return false;
  const auto& pairs = c.payload.at("pairs");
  if (static_cast<int>(pairs.size()) != k) return false;
  std::vector<Vertex> xs, ys;
  for (const auto& p : pairs) {
    xs.push_back(p.at("x").get<Vertex>());
    ys.push_back(p.at("y").get<Vertex>());
  }
  VertexSet terminals(xs);
  terminals = terminals.united(VertexSet(ys));
  if (static_cast<int>(terminals.size()) != 2 * k || !terminals.disjoint(cset)) return false;
  for (int i = 0; i < k; ++i) {
    // The blocked set must be C plus every other terminal, recomputed here.
    VertexSet blocked = cset.united(terminals);
    blocked.erase(xs[i]);
    blocked.erase(ys[i]);
    std::vector<Vertex> allowed_list;
    for (Vertex v = 0; v < t.size(); ++v)
      if (!blocked.contains(v)) allowed_list.push_back(v);
    const VertexSet allowed(allowed_list);
    if (!ClosureWitnessHolds(t, xs[i], ys[i], allowed, SetFromJson(pairs[i].at("closure")))) return false;
  }
  return true;
}

inline bool VerifyNotLinked32(const Tournament& t, const Certificate& c) {
  if (!c.verdict) return false;
  const int k = c.params.at("k").get<int>();
  const VertexSet w = SetFromJson(c.payload.at("W"));
  const VertexSet xys = SetFromJson(c.payload.at("XYS"));
  if (!w.disjoint(xys) || static_cast<int>(w.size() + xys.size()) != t.size()) return false;
  for (Vertex v : w)
    if (!t.valid_vertex(v)) return false;
  for (Vertex v : xys)
    if (!t.valid_vertex(v)) return false;
  const auto& pairs = c.payload.at("pairs");
  if (static_cast<int>(pairs.size()) != 2 * k) return false;
  std::vector<Vertex> ends;
  for (const auto& p : pairs) {
    const Vertex s = p.at("source").get<Vertex>();
    const Vertex target = p.at("target").get<Vertex>();
    if (!xys.contains(s) || !xys.contains(target)) return false;
    ends.push_back(s);
    ends.push_back(target);
    VertexSet allowed = w;
    allowed.insert(s);
    allowed.insert(target);
    if (!ClosureWitnessHolds(t, s, target, allowed, SetFromJson(p.at("closure")))) return false;
  }
  if (static_cast<int>(VertexSet(ends).size()) != 4 * k) return false;
  // Each path holds two endpoints and at least one more vertex of X u Y u S.
  return 3 * 2 * k > static_cast<int>(xys.size());
}

}  // namespace detail

/// Re-runs every sub-check of the certificate against T. Malformed payloads
/// verify as false.
inline bool VerifyCertificate(const Tournament& t, const Certificate& c) {
  if (c.schema_version != kCertificateSchemaVersion) return false;
  try {
    if (c.kind == "connectivity") return detail::VerifyConnectivity(t, c);
    if (c.kind == "degree") return detail::VerifyDegrees(t, c);
    if (c.kind == "not-linked-31") return detail::VerifyNotLinked31(t, c);
    if (c.kind == "not-linked-32") return detail::VerifyNotLinked32(t, c);
  } catch (const Json::exception&) {
    return false;
  } catch (const DomainError&) {
    return false;
  }
  return false;
}

}  // namespace tourlink
