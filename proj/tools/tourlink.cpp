// tourlink: generate, check, link and certify tournaments from the command line.
//
// Exit codes: 0 success, 1 verdict false, 2 usage or malformed input, 3 internal.

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tourlink/tourlink.hpp"

using namespace tourlink;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string kind;
  std::string what;
  std::string file;
  std::string parts_file;
  std::string cert_file;
  std::string spec_file;
  std::string out = "-";
  std::string format = "json";
  std::string pairs;
  std::string fallback = "exact";
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> ell;
  std::optional<std::int64_t> w_size;
  std::optional<int> ns_size;
  std::optional<int> free_threshold;
  std::optional<std::int64_t> bound_subdiv;
  std::optional<std::int64_t> bound_paths;
  std::optional<int> trials;
  std::int64_t budget = kDefaultLinkageBudget;
  bool trace = false;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Tournament LoadTournament(const std::string& path) {
  try {
    return Parse(ReadFile(path));
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

Json LoadJson(const std::string& path) {
  try {
    return Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

void TextLines(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, val] : j.items()) TextLines(val, prefix.empty() ? key : prefix + "." + key, os);
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void Emit(const Json& report, const Options& o) {
  if (o.format == "text") {
    std::ostringstream os;
    TextLines(report, "", os);
    WriteFile(o.out, os.str());
  } else {
    WriteFile(o.out, report.dump(2) + "\n");
  }
}

std::uint64_t RequireSeed(const Options& o, const std::string& cmd) {
  if (!o.seed) throw UsageError(cmd + " is randomized and needs --seed");
  return *o.seed;
}

int Require(const std::optional<int>& v, const char* flag, const std::string& cmd) {
  if (!v) throw UsageError(cmd + " needs " + flag);
  return *v;
}

double MillisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Json PathsJson(const std::vector<Path>& paths) { return Json(paths); }

// ---------------------------------------------------------------------------

int CmdGen(const Options& o) {
  const std::uint64_t seed = RequireSeed(o, "gen");
  if (o.out == "-" && o.kind != "random") throw UsageError("gen " + o.kind + " needs --out for the part map");
  Json report{{"kind", o.kind}, {"seed", seed}, {"generator", std::string(kGeneratorName)}};
  if (o.kind == "random") {
    const int n = Require(o.n, "--n", "gen random");
    if (n < 1) throw UsageError("--n must be positive");
    const auto t = RandomTournament(n, seed);
    WriteFile(o.out, Serialize(t));
    if (o.out == "-") return kExitOk;
    report["n"] = n;
  } else if (o.kind == "c31") {
    Construction31Params p;
    p.k = o.k.value_or(2);
    p.m = o.m.value_or(4);
    p.n = o.n.value_or(41);
    p.seed = seed;
    const auto b = BuildConstruction31(p);
    WriteFile(o.out, Serialize(b.tournament));
    Json parts = PartsToJson(b.parts);
    parts["params"] = Json{{"k", p.k}, {"m", p.m}, {"n", p.n}, {"seed", seed}};
    parts["log"] = b.parts.log;
    WriteFile(o.out + ".parts.json", parts.dump(2) + "\n");
    report["n"] = p.n;
    report["C"] = parts["C"];
  } else if (o.kind == "c32") {
    Construction32Params p;
    p.k = o.k.value_or(3);
    p.n = o.n.value_or(150);
    p.seed = seed;
    const auto b = BuildConstruction32(p);
    WriteFile(o.out, Serialize(b.tournament));
    Json parts = PartsToJson(b.parts);
    parts["params"] = Json{{"k", p.k}, {"n", p.n}, {"seed", seed}};
    WriteFile(o.out + ".parts.json", parts.dump(2) + "\n");
    report["n"] = p.n;
    report["S_size"] = b.parts.S.size();
  } else {
    throw UsageError("unknown kind " + o.kind);
  }
  report["out"] = o.out;
  if (o.kind != "random") report["parts"] = o.out + ".parts.json";
  Options quiet = o;
  quiet.out = "-";
  Emit(report, quiet);
  return kExitOk;
}

int CmdCheck(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tournament t = LoadTournament(o.file);
  Json report{{"what", o.what}, {"n", t.size()}};
  int code = kExitOk;
  if (o.what == "connectivity") {
    const int kappa = VertexConnectivity(t);
    report["kappa"] = kappa;
    report["verdict"] = true;
    const auto above = IsKConnected(t, kappa + 1);
    if (above.separator) {
      report["certificate"] = Json{{"separator", above.separator->vec()},
                                   {"separated", {above.separated->first, above.separated->second}}};
    } else {
      report["certificate"] = Json{{"reason", above.reason}};
    }
  } else if (o.what == "k-connected") {
    const int k = Require(o.k, "--k", "check k-connected");
    const Certificate c = CertifyConnectivity(t, k);
    report["k"] = k;
    report["verdict"] = c.verdict;
    report["certificate"] = ToJson(c);
    if (!c.verdict) code = kExitFalse;
  } else if (o.what == "linked") {
    const int k = Require(o.k, "--k", "check linked");
    LinkednessOptions opt;
    opt.budget = o.budget;
    if (o.trials) {
      opt.mode = LinkednessOptions::Mode::kSampled;
      opt.trials = *o.trials;
      opt.seed = RequireSeed(o, "check linked --trials");
      report["seed"] = opt.seed;
      report["trials"] = opt.trials;
    }
    const auto v = IsKLinked(t, k, opt);
    report["k"] = k;
    report["budget"] = o.budget;
    report["verdict"] = v.linked;
    report["status"] = v.linked ? "linked" : (v.complete ? "not-linked" : "unknown");
    report["instances_checked"] = v.instances_checked;
    report["nodes_explored"] = v.nodes_explored;
    if (!v.reason.empty()) report["reason"] = v.reason;
    if (v.witness) report["witness"] = v.witness->pairs;
    if (!v.linked) code = kExitFalse;
  } else {
    throw UsageError("unknown check " + o.what);
  }
  report["wall_ms"] = MillisSince(t0);
  Emit(report, o);
  return code;
}

std::vector<std::pair<Vertex, Vertex>> ParsePairs(const std::string& text) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("pair '" + item + "' is not of the form x:y");
    try {
      std::size_t a = 0, b = 0;
      const int x = std::stoi(item.substr(0, colon), &a);
      const int y = std::stoi(item.substr(colon + 1), &b);
      if (a != colon || b != item.size() - colon - 1) throw std::invalid_argument("trailing");
      pairs.emplace_back(x, y);
    } catch (const std::logic_error&) {
      throw UsageError("pair '" + item + "' is not of the form x:y");
    }
  }
  if (pairs.empty()) throw UsageError("--pairs is empty");
  return pairs;
}

int CmdLink(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tournament t = LoadTournament(o.file);
  const auto pairs = ParsePairs(o.pairs);
  std::vector<Vertex> x, y;
  for (auto [a, b] : pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  LinkageInstance inst{pairs};
  try {
    CheckInstance(t, inst);
  } catch (const DomainError& e) {
    throw UsageError(std::string("invalid pairs: ") + e.what());
  }
  const int k = static_cast<int>(pairs.size());
  LinkerConfig cfg = LinkerConfig::Desk(k);
  if (o.ell) cfg.family.ell = *o.ell;
  if (o.w_size) cfg.family.w_size = *o.w_size;
  if (o.ns_size) cfg.family.ns_size = *o.ns_size;
  if (o.free_threshold) cfg.free_threshold = *o.free_threshold;
  if (o.bound_subdiv) cfg.bound_subdiv = *o.bound_subdiv;
  if (o.bound_paths) cfg.bound_paths = *o.bound_paths;
  if (cfg.family.ell < 2 || cfg.family.w_size < 1 || cfg.family.ns_size < 1) throw UsageError("constant overrides must be positive");
  cfg.fallback = o.fallback == "none" ? Fallback::kNone : Fallback::kExact;
  cfg.budget = o.budget;
  const LinkResult r = Link(t, x, y, cfg);
  Json report{{"k", k},
              {"pairs", pairs},
              {"verdict", ToString(r.verdict.status)},
              {"method", r.method},
              {"config",
               {{"ell", cfg.family.ell},
                {"w_size", cfg.family.w_size},
                {"ns_size", cfg.family.ns_size},
                {"free_threshold", cfg.free_threshold},
                {"bound_subdiv", cfg.bound_subdiv},
                {"bound_paths", cfg.bound_paths},
                {"fallback", o.fallback},
                {"budget", o.budget}}}};
  if (r.verdict.paths) report["paths"] = PathsJson(*r.verdict.paths);
  if (r.failure) report["failure"] = Json{{"stage", r.failure->stage}, {"detail", r.failure->detail}};
  if (!r.verdict.refutation.empty()) report["refutation"] = r.verdict.refutation;
  if (o.trace) {
    Json trace = Json::array();
    for (const auto& e : r.trace) {
      Json counts = Json::object();
      for (const auto& [key, val] : e.counts) counts[key] = val;
      Json entry{{"stage", e.stage}, {"outcome", e.outcome}, {"counts", counts}};
      if (!e.note.empty()) entry["note"] = e.note;
      trace.push_back(std::move(entry));
    }
    report["trace"] = std::move(trace);
  }
  report["wall_ms"] = MillisSince(t0);
  Emit(report, o);
  return r.verdict.status == LinkStatus::kLinked ? kExitOk : kExitFalse;
}

int CmdCertify(const Options& o) {
  const Tournament t = LoadTournament(o.file);
  const Json parts = LoadJson(o.parts_file);
  const Json params = parts.value("params", Json::object());
  const std::uint64_t seed = params.value("seed", std::uint64_t{0});
  std::vector<Certificate> certs;
  try {
    if (o.kind == "c31") {
      const Parts31 p = Parts31FromJson(parts);
      for (const auto* s : {&p.A, &p.B, &p.C, &p.X, &p.Y})
        for (Vertex v : *s)
          if (!t.valid_vertex(v)) throw UsageError("part map does not fit the tournament");
      const int k = static_cast<int>(p.A.size());
      const int m = o.m.value_or(params.value("m", 2 * k));
      certs.push_back(CertifyConnectivity(t, 2 * k - 1, seed));
      certs.push_back(CertifyDegrees(t, m, seed));
      certs.push_back(CertifyNotLinked31(t, p, seed, o.budget));
    } else if (o.kind == "c32") {
      const Parts32 p = Parts32FromJson(parts);
      for (const auto* s : {&p.X, &p.Y, &p.S, &p.W})
        for (Vertex v : *s)
          if (!t.valid_vertex(v)) throw UsageError("part map does not fit the tournament");
      const int k = static_cast<int>(p.X.size());
      certs.push_back(CertifyConnectivity(t, 5 * k - 1, seed));
      certs.push_back(CertifyNotLinked32(t, p, seed));
    } else {
      throw UsageError("unknown kind " + o.kind);
    }
  } catch (const Json::exception& e) {
    throw MalformedInput(o.parts_file + ": " + e.what());
  }
  Json bundle{{"schema_version", kCertificateSchemaVersion}, {"certificates", Json::array()}};
  int code = kExitOk;
  for (const auto& c : certs) {
    bundle["certificates"].push_back(ToJson(c));
    if (!c.verdict) {
      std::string why = c.payload.value("failed_check", c.payload.value("reason", std::string("verdict false")));
      std::cerr << "certificate " << c.kind << " failed: " << why << "\n";
      code = kExitFalse;
    }
  }
  WriteFile(o.out, bundle.dump(2) + "\n");
  return code;
}

int CmdVerify(const Options& o) {
  const Tournament t = LoadTournament(o.file);
  const Json doc = LoadJson(o.cert_file);
  std::vector<Json> items;
  if (doc.contains("certificates")) {
    for (const auto& c : doc["certificates"]) items.push_back(c);
  } else {
    items.push_back(doc);
  }
  Json report{{"results", Json::array()}};
  bool all = !items.empty();
  for (const auto& j : items) {
    bool ok = false;
    std::string kind = "?";
    try {
      const Certificate c = CertificateFromJson(j);
      kind = c.kind;
      ok = VerifyCertificate(t, c);
    } catch (const Json::exception&) {
      ok = false;
    }
    all = all && ok;
    report["results"].push_back(Json{{"kind", kind}, {"valid", ok}});
  }
  report["verdict"] = all;
  Emit(report, o);
  return all ? kExitOk : kExitFalse;
}

// ---------------------------------------------------------------------------

Json RunCell(const std::string& kind, int k, int m, int n, std::uint64_t seed, std::int64_t budget) {
  Json row{{"kind", kind}, {"k", k}, {"m", m}, {"n", n}, {"seed", seed}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Tournament t;
    std::string linkage = "n/a";
    if (kind == "c31") {
      Construction31Params p{k, m, n, seed};
      auto b = BuildConstruction31(p);
      linkage = CertifyNotLinked31(b.tournament, b.parts, seed, budget).verdict ? "not-linked" : "unconfirmed";
      t = std::move(b.tournament);
    } else if (kind == "c32") {
      Construction32Params p{k, n, seed};
      auto b = BuildConstruction32(p);
      linkage = CertifyNotLinked32(b.tournament, b.parts, seed).verdict ? "not-linked" : "unconfirmed";
      t = std::move(b.tournament);
    } else if (kind == "random") {
      t = RandomTournament(n, seed);
    } else {
      throw DomainError("unknown kind " + kind);
    }
    row["kappa"] = VertexConnectivity(t);
    int min_out = t.size(), min_in = t.size();
    for (auto [out, in] : t.degrees()) {
      min_out = std::min(min_out, out);
      min_in = std::min(min_in, in);
    }
    row["min_out"] = min_out;
    row["min_in"] = min_in;
    row["linkage"] = linkage;
    row["error"] = "";
  } catch (const std::exception& e) {
    row["error"] = e.what();
  }
  row["runtime_ms"] = MillisSince(t0);
  return row;
}

std::string CsvField(const Json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

int CmdExperiment(const Options& o) {
  const Json spec = LoadJson(o.spec_file);
  const std::string kind = spec.value("kind", std::string("c32"));
  auto list = [&](const char* key, std::vector<long long> dflt) {
    if (!spec.contains(key)) return dflt;
    return spec.at(key).get<std::vector<long long>>();
  };
  const std::int64_t budget = spec.value("budget", o.budget);
  const auto ks = list("k", {kind == "c31" ? 2 : 3});
  const auto ms = list("m", {kind == "c31" ? 4 : 0});
  const auto ns = list("n", {kind == "c31" ? 41 : 150});
  const auto seeds = list("seeds", {});
  std::vector<std::tuple<long long, long long, long long, long long>> cells;
  std::set<std::tuple<long long, long long, long long, long long>> seen;
  for (auto k : ks)
    for (auto m : ms)
      for (auto n : ns)
        for (auto s : seeds) {
          auto cell = std::make_tuple(k, m, n, s);
          if (!seen.insert(cell).second) {
            std::cerr << "warning: duplicate cell k=" << k << " m=" << m << " n=" << n << " seed=" << s << " skipped\n";
            continue;
          }
          cells.push_back(cell);
        }
  Json rows = Json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [k, m, n, s] = cells[i];
    Json row = RunCell(kind, static_cast<int>(k), static_cast<int>(m), static_cast<int>(n), static_cast<std::uint64_t>(s), budget);
    row["index"] = i;
    rows.push_back(std::move(row));
  }
  const std::vector<std::string> cols{"index", "kind", "k", "m", "n", "seed", "kappa", "min_out", "min_in", "linkage", "runtime_ms", "error"};
  std::ostringstream csv;
  for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c];
  csv << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << CsvField(row.value(cols[c], Json()));
    csv << "\n";
  }
  const Json doc{{"spec", spec}, {"rows", rows}};
  if (o.out == "-") {
    std::cout << csv.str();
  } else {
    WriteFile(o.out + ".csv", csv.str());
    WriteFile(o.out + ".json", doc.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tournament linkage toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output path, - for stdout"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* gen = app.add_subcommand("gen", "generate a tournament");
  gen->add_option("kind", o.kind, "random | c31 | c32")->required()->check(CLI::IsMember({"random", "c31", "c32"}));
  gen->add_option("--n", o.n, "vertex count");
  gen->add_option("--k", o.k, "linkage order");
  gen->add_option("--m", o.m, "degree parameter (c31)");
  add_seed(gen);
  add_out(gen);

  auto* check = app.add_subcommand("check", "connectivity or linkedness report");
  check->add_option("what", o.what, "connectivity | k-connected | linked")
      ->required()
      ->check(CLI::IsMember({"connectivity", "k-connected", "linked"}));
  check->add_option("file", o.file, "tournament file")->required();
  check->add_option("--k", o.k, "order");
  check->add_option("--budget", o.budget, "search node budget per instance");
  check->add_option("--trials", o.trials, "sample this many instances instead of all");
  add_seed(check);
  add_out(check);
  add_format(check);

  auto* link = app.add_subcommand("link", "find disjoint paths x_i -> y_i");
  link->add_option("file", o.file, "tournament file")->required();
  link->add_option("--pairs", o.pairs, "x1:y1,x2:y2,...")->required();
  link->add_option("--ell", o.ell, "branch set size");
  link->add_option("--w-size", o.w_size, "block size");
  link->add_option("--ns-size", o.ns_size, "non-subdivision set size");
  link->add_option("--free-threshold", o.free_threshold, "freeing threshold");
  link->add_option("--bound-subdiv", o.bound_subdiv, "branch vertices allowed on the system");
  link->add_option("--bound-paths", o.bound_paths, "blocked connectors allowed per branch vertex");
  link->add_option("--budget", o.budget, "exact search node budget");
  link->add_option("--fallback", o.fallback, "exact | none")->check(CLI::IsMember({"exact", "none"}));
  link->add_flag("--trace", o.trace, "include per-stage diagnostics");
  add_out(link);
  add_format(link);

  auto* certify = app.add_subcommand("certify", "certify a construction");
  certify->add_option("kind", o.kind, "c31 | c32")->required()->check(CLI::IsMember({"c31", "c32"}));
  certify->add_option("file", o.file, "tournament file")->required();
  certify->add_option("parts", o.parts_file, "part map JSON")->required();
  certify->add_option("--m", o.m, "degree parameter (c31)");
  certify->add_option("--budget", o.budget, "oracle node budget");
  add_out(certify);

  auto* verify = app.add_subcommand("verify", "replay certificates against a tournament");
  verify->add_option("file", o.file, "tournament file")->required();
  verify->add_option("cert", o.cert_file, "certificate JSON")->required();
  add_out(verify);
  add_format(verify);

  auto* experiment = app.add_subcommand("experiment", "run a parameter grid");
  experiment->add_option("spec", o.spec_file, "grid spec JSON")->required();
  experiment->add_option("--budget", o.budget, "oracle node budget");
  add_out(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return CmdGen(o);
    if (*check) return CmdCheck(o);
    if (*link) return CmdLink(o);
    if (*certify) return CmdCertify(o);
    if (*verify) return CmdVerify(o);
    if (*experiment) return CmdExperiment(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    for (const auto& line : e.attempts()) std::cerr << "  " << line << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
