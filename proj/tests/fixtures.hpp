#pragma once

// Hand-built inputs shared by the linker tests and the acceptance binary.

#include <optional>
#include <variant>

#include "tourlink/flow.hpp"
#include "tourlink/good_family.hpp"

namespace fixture {

using namespace tourlink;

struct Detour {
  Tournament t;
  Subdivision sub;
  PathSystem sys;
};

// Random walk from a to b through vertices outside `avoid`, at least `min_len`
// interior vertices long.
inline std::optional<Path> LongWalk(const Tournament& t, Vertex a, Vertex b, std::vector<char> avoid, int min_len,
                                    Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Path p{a};
    auto blocked = avoid;
    blocked[a] = blocked[b] = 1;
    while (true) {
      const Vertex u = p.back();
      if (static_cast<int>(p.size()) - 1 >= min_len && t.beats(u, b)) {
        p.push_back(b);
        return p;
      }
      std::vector<Vertex> next;
      for (Vertex v = 0; v < t.size(); ++v)
        if (!blocked[v] && t.beats(u, v)) next.push_back(v);
      if (next.empty() || static_cast<int>(p.size()) > min_len + 6) break;
      const Vertex v = next[rng() % next.size()];
      blocked[v] = 1;
      p.push_back(v);
    }
  }
  return std::nullopt;
}

// A system with one or two paths that each run between two branch vertices of
// a subdivision by a walk longer than the connector between them.
inline std::optional<Detour> NonMinimal(std::uint64_t seed) {
  Rng rng(seed);
  auto t = RandomTournament(40, seed);
  auto r = GreedyEmbedT2(t, VertexSet{0, 1, 2, 3, 4}, {});
  if (!std::holds_alternative<Subdivision>(r)) return std::nullopt;
  Detour d{t, std::get<Subdivision>(r), {}};
  std::vector<char> avoid(t.size(), 0);
  for (Vertex v : d.sub.vertices()) avoid[v] = 1;
  const int paths = 1 + static_cast<int>(seed % 2);
  std::vector<Vertex> srcs, snks;
  for (int i = 0; i < paths; ++i) {
    const Vertex a = 2 * i, b = 2 * i + 1;
    const auto& conn = d.sub.path(a, b);
    auto walk = LongWalk(t, a, b, avoid, static_cast<int>(conn.size()) - 1, rng);
    if (!walk) return std::nullopt;
    for (Vertex v : *walk) avoid[v] = 1;
    d.sys.paths.push_back(*walk);
    srcs.push_back(a);
    snks.push_back(b);
  }
  d.sys.sources = VertexSet(srcs);
  d.sys.sinks = VertexSet(snks);
  return d;
}

}  // namespace fixture
