// One line per acceptance criterion. Reference answers come from the brute
// force routines in tests/oracles.hpp, never from the library under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "tourlink/tourlink.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace tourlink;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Edge-by-edge check of disjoint paths x_i -> y_i.
bool PathsLink(const Tournament& t, const std::vector<std::pair<int, int>>& pairs, const std::vector<Path>& paths) {
  if (paths.size() != pairs.size()) return false;
  std::vector<char> seen(t.size(), 0);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.empty() || p.front() != pairs[i].first || p.back() != pairs[i].second) return false;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] < 0 || p[j] >= t.size() || seen[p[j]]) return false;
      seen[p[j]] = 1;
      if (j > 0 && !t.beats(p[j - 1], p[j])) return false;
    }
  }
  return true;
}

// Paths s -> target with pairwise disjoint interiors.
bool InternallyDisjoint(const Tournament& t, int s, int target, const std::vector<Path>& paths) {
  std::vector<char> seen(t.size(), 0);
  for (const auto& p : paths) {
    if (p.size() < 2 || p.front() != s || p.back() != target) return false;
    for (std::size_t j = 1; j < p.size(); ++j)
      if (!t.beats(p[j - 1], p[j])) return false;
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      if (seen[p[j]] || p[j] == s || p[j] == target) return false;
      seen[p[j]] = 1;
    }
  }
  return true;
}

Outcome Ac1() {
  const auto start = Clock::now();
  const Construction31Params p{2, 4, 41, 20240601};
  const auto b = BuildConstruction31(p);
  const auto& t = b.tournament;
  const auto conn = CertifyConnectivity(t, 3, p.seed);
  const auto deg = CertifyDegrees(t, p.m, p.seed);
  const auto nl = CertifyNotLinked31(t, b.parts, p.seed);
  const int kappa = VertexConnectivity(t);
  const int min_out = deg.payload.at("min_out").get<int>();
  const int min_in = deg.payload.at("min_in").get<int>();
  const auto oracle = nl.payload.contains("oracle") ? nl.payload["oracle"].at("status").get<std::string>() : "not run";
  const bool verified = VerifyCertificate(t, conn) && VerifyCertificate(t, deg) && VerifyCertificate(t, nl);
  const double secs = Seconds(start);
  std::ostringstream d;
  d << "kappa=" << kappa << " min_out=" << min_out << " min_in=" << min_in << " oracle=" << oracle
    << " certificates_verify=" << verified << " time=" << secs << "s";
  const bool ok = conn.verdict && kappa >= 3 && 2 * min_out >= p.m && 2 * min_in >= p.m && nl.verdict &&
                  oracle == "not-linked" && verified && secs < 60;
  return {ok, d.str()};
}

Outcome Ac2() {
  const auto start = Clock::now();
  const Construction32Params p{3, 150, 20240602};
  const auto b = BuildConstruction32(p);
  const auto& t = b.tournament;
  const auto conn = CertifyConnectivity(t, 14, p.seed);
  const auto nl = CertifyNotLinked32(t, b.parts, p.seed);
  int witnesses = 0;
  for (const auto& w : nl.payload.at("pairs")) witnesses += w.at("cut").get<bool>();
  const int needed = nl.payload.at("needed").get<int>();
  const int available = nl.payload.at("available").get<int>();
  const bool verified = VerifyCertificate(t, conn) && VerifyCertificate(t, nl);
  const double secs = Seconds(start);
  std::ostringstream d;
  d << "14-connected=" << conn.verdict << " witnesses=" << witnesses << "/6 needed=" << needed
    << " available=" << available << " certificates_verify=" << verified << " time=" << secs << "s";
  return {conn.verdict && nl.verdict && witnesses == 6 && needed > available && verified && secs < 120, d.str()};
}

Outcome Ac3() {
  long long agree = 0, total = 0, linked = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const auto t = RandomTournament(n, 1000 + seed);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
            const std::vector<std::pair<int, int>> pairs{{a, b}, {c, d}};
            const auto v = FindLinkageExact(t, LinkageInstance{pairs});
            const bool truth = oracle::Linked(t, pairs);
            bool ok = (v.status == LinkStatus::kLinked) == truth && v.status != LinkStatus::kUnknown;
            if (ok && truth) ok = v.paths && PathsLink(t, pairs, *v.paths);
            agree += ok;
            linked += truth;
            ++total;
          }
  }
  std::ostringstream d;
  d << agree << "/" << total << " instances agree (" << linked << " linked)";
  return {agree == total, d.str()};
}

Outcome Ac4() {
  long long cuts = 0, bad_cuts = 0, kappa_ok = 0;
  const int runs = 200;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    const int n = 5 + static_cast<int>(seed % 8);
    const auto t = RandomTournament(n, 2000 + seed);
    for (int s = 0; s < n; ++s)
      for (int u = 0; u < n; ++u) {
        if (s == u || t.beats(s, u)) continue;
        const auto c = MinVertexCut(t, s, u);
        ++cuts;
        bool ok = static_cast<int>(c.cut.size()) == c.local_connectivity() &&
                  static_cast<int>(c.cut.size()) == oracle::LocalCut(t, s, u) && InternallyDisjoint(t, s, u, c.witness_paths);
        std::vector<char> alive(n, 1);
        for (Vertex v : c.cut) alive[v] = 0;
        ok = ok && !c.cut.contains(s) && !c.cut.contains(u) && !oracle::Reaches(t, s, u, alive);
        bad_cuts += !ok;
      }
    kappa_ok += VertexConnectivity(t) == oracle::Connectivity(t);
  }
  std::ostringstream d;
  d << cuts - bad_cuts << "/" << cuts << " cut certificates hold, connectivity exact on " << kappa_ok << "/" << runs;
  return {bad_cuts == 0 && kappa_ok == runs, d.str()};
}

Outcome Ac5() {
  int exact = 0, instances = 0, minimal_checked = 0, minimal_clean = 0;
  for (std::uint64_t seed = 0; instances < 100; ++seed) {
    const int n = 7 + static_cast<int>(seed % 4);
    const auto t = RandomTournament(n, 3000 + seed);
    Rng rng(seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int count = 1 + static_cast<int>(seed % 2);
    const std::vector<int> src(order.begin(), order.begin() + count + 1);
    const std::vector<int> dst(order.begin() + count + 1, order.begin() + 2 * count + 2);
    const std::vector<int> forbidden{order[2 * count + 2]};
    const auto truth = oracle::MinSystemSize(t, src, dst, forbidden, count);
    ++instances;
    try {
      const auto sys = MinCostDisjointSystem(t, VertexSet(src), VertexSet(dst), std::nullopt, VertexSet(forbidden), count);
      const bool ok = truth && sys.total_vertices() == *truth && AuditPathSystem(t, sys).empty() &&
                      static_cast<int>(sys.paths.size()) == count;
      exact += ok;
      // A subdivision on vertices of the system lets reroute try its moves.
      for (const auto& branch : {VertexSet{order[0], order[1], order[count + 1]}, VertexSet{order[0], order[count + 1]}}) {
        const auto emb = GreedyEmbedT2(t, branch, {});
        if (!std::holds_alternative<Subdivision>(emb)) continue;
        ++minimal_checked;
        minimal_clean += !RerouteImprove(t, sys, std::get<Subdivision>(emb)).has_value();
        break;
      }
    } catch (const InfeasibleSystem&) {
      exact += !truth.has_value();
    }
  }
  int fixtures = 0, improved = 0;
  for (std::uint64_t seed = 0; fixtures < 100 && seed < 10000; ++seed) {
    const auto f = fixture::NonMinimal(seed);
    if (!f) continue;
    ++fixtures;
    const auto imp = RerouteImprove(f->t, f->sys, f->sub);
    if (!imp) continue;
    std::vector<std::pair<int, int>> ends;
    for (const auto& p : f->sys.paths) ends.emplace_back(p.front(), p.back());
    improved += imp->system.total_vertices() < f->sys.total_vertices() && PathsLink(f->t, ends, imp->system.paths);
  }
  std::ostringstream d;
  d << "min-cost exact on " << exact << "/" << instances << ", reroute none on " << minimal_clean << "/" << minimal_checked
    << " minimal systems, strict valid improvement on " << improved << "/" << fixtures << " fixtures";
  return {exact == instances && minimal_checked > 0 && minimal_clean == minimal_checked && fixtures == 100 &&
              improved == fixtures,
          d.str()};
}

Outcome Ac6() {
  int runs = 0, size_ok = 0, window_ok = 0, windows = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int n = std::vector<int>{50, 100, 200}[seed % 3];
    const auto t = RandomTournament(n, 4000 + seed);
    ++runs;
    const auto w = NearlyRegularSubset(t);
    bool ok = 10 * static_cast<int>(w.members.size()) >= n;
    for (Vertex v : w.members) {
      const int out = t.out_degree(v), in = t.in_degree(v);
      ok = ok && out <= 4 * in && in <= 4 * out;
    }
    size_ok += ok;
    for (int size : {3, 5, 10}) {
      const auto x = NearlyRegularWindowSubset(t, size);
      ++windows;
      bool good = static_cast<int>(x.members.size()) == size;
      for (Vertex v : x.members) {
        const int out = t.out_degree(v), in = t.in_degree(v);
        good = good && w.members.contains(v) && std::abs(in - x.center_m) <= 10 * size && out <= 4 * in && in <= 4 * out;
      }
      window_ok += good;
    }
  }
  std::ostringstream d;
  d << "size and ratio hold on " << size_ok << "/" << runs << ", windows exact on " << window_ok << "/" << windows;
  return {size_ok == runs && window_ok == windows, d.str()};
}

Outcome Ac7() {
  int ok = 0, total = 0;
  std::ostringstream d;
  for (auto [n, l] : std::vector<std::pair<int, int>>{{16, 2}, {81, 3}, {256, 3}}) {
    const int floor = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / std::pow(2.0, l - 1)) - 1e-9));
    int min_seen = n;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng(5000 + seed * 7 + n);
      std::vector<std::vector<int>> ranks(l, std::vector<int>(n));
      for (auto& r : ranks) {
        std::iota(r.begin(), r.end(), 0);
        std::shuffle(r.begin(), r.end(), rng);
      }
      const auto w = MultiOrderMonotoneSubset(ranks);
      bool good = static_cast<int>(w.items.size()) >= floor && static_cast<int>(w.increasing.size()) == l;
      for (int o = 0; o < l && good; ++o)
        for (std::size_t i = 1; i < w.items.size(); ++i)
          if ((ranks[o][w.items[i]] > ranks[o][w.items[i - 1]]) != (o == 0 || w.increasing[o])) good = false;
      min_seen = std::min<int>(min_seen, static_cast<int>(w.items.size()));
      ok += good;
      ++total;
    }
    d << "(" << n << "," << l << ") floor " << floor << " min " << min_seen << "; ";
  }
  d << ok << "/" << total << " audited";
  return {ok == total, d.str()};
}

// Every good-family invariant, recomputed from the tournament. A subdivision
// sits on S_i through its branch vertices; its connector interiors may lie
// outside S_i but must avoid every other set and every other subdivision.
std::string IndependentFamilyAudit(const Tournament& t, const GoodFamily& f, const std::vector<VertexSet>& blocks,
                                   const GoodFamilyConfig& cfg) {
  const int k = static_cast<int>(blocks.size());
  if (f.k() != k) return "size";
  std::vector<int> owner(t.size(), -1);
  for (int i = 0; i < k; ++i)
    for (Vertex v : f.sets[i]) {
      if (!blocks[i].contains(v)) return "set outside its block";
      if (owner[v] >= 0) return "sets overlap";
      owner[v] = i;
    }
  std::vector<int> taken(t.size(), -1);
  for (int i = 0; i < k; ++i) {
    if (f.is_subdivision(i)) {
      const auto& sub = f.subdivisions.at(i);
      if (!(sub.branch == f.sets[i])) return "set is not the branch set";
      if (static_cast<int>(sub.branch.size()) != cfg.ell) return "branch size";
      std::vector<Vertex> mine(sub.branch.begin(), sub.branch.end());
      for (Vertex a : sub.branch)
        for (Vertex b : sub.branch) {
          if (a == b) continue;
          const auto& p = sub.path(a, b);
          if (p.front() != a || p.back() != b || p.size() > 4) return "connector shape";
          for (std::size_t j = 1; j < p.size(); ++j)
            if (!t.beats(p[j - 1], p[j])) return "connector edge";
          for (std::size_t j = 1; j + 1 < p.size(); ++j) mine.push_back(p[j]);
        }
      for (Vertex v : mine) {
        if (taken[v] >= 0) return taken[v] == i ? "connector interiors overlap" : "subdivisions meet";
        taken[v] = i;
        if (owner[v] >= 0 && owner[v] != i) return "subdivision meets another set";
      }
    } else if (static_cast<int>(f.sets[i].size()) != cfg.ns_size) {
      return "non-subdivision set has the wrong size";
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (f.is_subdivision(i) || f.is_subdivision(j)) continue;
      bool forward = true, backward = true;
      for (Vertex u : f.sets[i])
        for (Vertex v : f.sets[j]) {
          if (t.beats(u, v)) backward = false; else forward = false;
        }
      if (!forward && !backward) return "non-subdivision sets are not one-way";
      if (f.dominates(i, j) != forward) return "recorded orientation is wrong";
    }
  return {};
}

Outcome Ac8() {
  int families = 0, refusals = 0, corrupt = 0;
  std::string first_problem;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int k = 2 + static_cast<int>(seed % 2);
    GoodFamilyConfig cfg = GoodFamilyConfig::Desk(k);
    cfg.ell = 8;
    cfg.w_size = 256;
    const auto t = RandomTournament(k * 256, 6000 + seed);
    std::vector<VertexSet> blocks;
    for (int i = 0; i < k; ++i) {
      std::vector<Vertex> vs(256);
      std::iota(vs.begin(), vs.end(), i * 256);
      blocks.push_back(VertexSet(vs));
    }
    const auto b = BuildGoodFamily(t, blocks, cfg);
    if (b.family) {
      ++families;
      const auto mine = IndependentFamilyAudit(t, *b.family, blocks, cfg);
      const auto theirs = AuditGoodFamily(t, *b.family, blocks, cfg);
      if (!mine.empty() || !theirs.empty()) {
        ++corrupt;
        if (first_problem.empty()) first_problem = "seed " + std::to_string(seed) + ": " + mine + " / " + theirs;
      }
    } else {
      ++refusals;
      corrupt += b.failure.empty();
    }
  }
  std::ostringstream d;
  d << families << " audited families, " << refusals << " structured refusals, " << corrupt << " corrupt";
  if (!first_problem.empty()) d << " (first: " << first_problem << ")";
  return {corrupt == 0, d.str()};
}

Outcome Ac9() {
  int agree = 0, linked = 0, validated = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 6 + static_cast<int>(seed % 7);
    const auto t = RandomTournament(n, 7000 + seed);
    Rng rng(seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::vector<std::pair<int, int>> pairs{{order[0], order[1]}, {order[2], order[3]}};
    const auto r = Link(t, {order[0], order[2]}, {order[1], order[3]}, LinkerConfig::Desk(2));
    const bool truth = oracle::Linked(t, pairs);
    agree += r.verdict.status != LinkStatus::kUnknown && (r.verdict.status == LinkStatus::kLinked) == truth;
    if (r.verdict.status == LinkStatus::kLinked) {
      ++linked;
      validated += r.verdict.paths && ValidatePathSystem(t, LinkageInstance{pairs}, *r.verdict.paths).ok &&
                   PathsLink(t, pairs, *r.verdict.paths);
    }
  }
  std::ostringstream d;
  d << agree << "/300 verdicts match, " << validated << "/" << linked << " linked verdicts validate";
  return {agree == 300 && validated == linked, d.str()};
}

Outcome Ac10(bool substitutes_passed) {
  // The block size alone outruns any tournament that fits in memory.
  std::ostringstream d;
  bool refused = true;
  for (int k : {2, 3}) {
    auto cfg = LinkerConfig::Paper(k);
    cfg.fallback = Fallback::kNone;
    const auto t = RandomTournament(400, 8000 + k);
    std::vector<Vertex> x, y;
    for (int i = 0; i < k; ++i) {
      x.push_back(i);
      y.push_back(k + i);
    }
    const auto r = Link(t, x, y, cfg);
    const bool carve = r.failure && r.failure->stage == "carve" && r.verdict.status == LinkStatus::kUnknown;
    refused = refused && carve;
    d << "k=" << k << " w_size=" << cfg.family.w_size << " -> " << (carve ? "carve refusal" : "unexpected") << "; ";
  }
  d << "substitute suites AC5/AC8/AC9 " << (substitutes_passed ? "passed" : "failed");
  return {refused && substitutes_passed, d.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 construction c31 (k=2, m=4, n=41)", Ac1},
      {"AC2 construction c32 (k=3, n=150)", Ac2},
      {"AC3 exact oracle vs path enumeration", Ac3},
      {"AC4 Menger duality and connectivity", Ac4},
      {"AC5 min-cost optimality and rerouting", Ac5},
      {"AC6 nearly-regular subsets", Ac6},
      {"AC7 multi-order monotone chains", Ac7},
      {"AC8 good-family audit", Ac8},
      {"AC9 link with fallback vs oracle", Ac9},
  };
  bool all = true;
  std::vector<bool> passed;
  for (const auto& [name, run] : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    passed.push_back(o.pass);
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << Seconds(start) << "s]" << std::endl;
  }
  const auto o = Ac10(passed[4] && passed[7] && passed[8]);
  all = all && o.pass;
  std::cout << (o.pass ? "PASS " : "FAIL ") << "AC10 paper constants out of reach: " << o.detail << std::endl;
  return all ? 0 : 1;
}
