#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "containerbench.hpp"

namespace fs = std::filesystem;
using namespace cbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_workers() {
  if (const char* env = std::getenv("CONTAINER_BENCH_WORKERS")) {
    try {
      auto w = std::stoul(env);
      if (w >= 1) return w;
    } catch (...) {
    }
    throw UsageError(std::string("CONTAINER_BENCH_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Options shared by every verb.
struct Output {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
};

void add_output(CLI::App* cmd, Output& o, bool csv) {
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  if (csv)
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  else
    cmd->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));
}

void emit(const Output& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(o.out, text);
  }
}

Json meta(const std::string& verb, Json config) {
  return Json{{"tool", "cbench"}, {"version", kToolVersion}, {"verb", verb}, {"config", std::move(config)}};
}

Rational rational_option(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const PreconditionError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

Rational epsilon_option(const std::string& text) {
  auto eps = rational_option("epsilon", text);
  if (eps <= 0 || eps >= 1) throw UsageError("--epsilon must lie in (0, 1)");
  return eps;
}

Rational rho_option(const std::string& text) {
  auto rho = rational_option("rho", text);
  if (rho <= 0 || rho > 1) throw UsageError("--rho must lie in (0, 1]");
  return rho;
}

Rational probability_option(const std::string& name, const std::string& text) {
  auto p = rational_option(name, text);
  if (p < 0 || p > 1) throw UsageError("--" + name + " must lie in [0, 1]");
  return p;
}

std::vector<int> parse_vertex_list(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--set: '" + item + "' is not a vertex index");
    }
  }
  return out;
}

VertexSet vertex_set_option(const std::string& text, std::size_t universe) {
  VertexSet s(universe);
  for (int v : parse_vertex_list(text)) {
    if (v < 0 || static_cast<std::size_t>(v) >= universe)
      throw UsageError("--set: vertex " + std::to_string(v) + " out of range");
    s.insert(v);
  }
  return s;
}

std::string rational_json(const Rational& r) { return to_string(r); }

// Instance and certificate pairs of a corpus directory, in name order.
struct CorpusEntry {
  std::string name;
  Json instance;
  FarCertificate certificate;
};

std::vector<CorpusEntry> load_corpus(const std::string& dir, const std::string& kind) {
  if (!fs::is_directory(dir)) throw UsageError("corpus '" + dir + "' is not a directory");
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory() && fs::exists(e.path() / "instance.json")) subdirs.push_back(e.path());
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<CorpusEntry> out;
  for (const auto& p : subdirs) {
    if (!fs::exists(p / "certificate.json"))
      throw UsageError("corpus entry '" + p.string() + "' has no certificate.json");
    auto cert = certificate_from_json(read_json_file((p / "certificate.json").string()));
    if (cert.kind != kind) continue;
    out.push_back({p.filename().string(), read_json_file((p / "instance.json").string()), std::move(cert)});
  }
  return out;
}

// Reruns the oracle behind a certificate; a certificate that does not replay
// is reported as a counterexample record.
std::optional<Json> replay_certificate(const Json& instance, const FarCertificate& cert) {
  std::optional<FarCertificate> again;
  if (cert.kind == "csp") {
    again = certify_far(csp_from_json(instance), cert.epsilon, CspOracleConfig{cert.oracle_cap});
  } else {
    if (!cert.rho) return Json{{"reason", "graph certificate without rho"}};
    again = certify_far(graph_from_json(instance), *cert.rho, cert.epsilon, IndepSetOracleConfig{cert.oracle_cap});
  }
  if (again && *again == cert) return std::nullopt;
  return Json{{"reason", "certificate does not replay"},
              {"stored", to_json(cert)},
              {"recomputed", again ? to_json(*again) : Json(nullptr)}};
}

// ---------------------------------------------------------------- generators

struct GenOptions {
  Output o;
  std::size_t n = 6, k = 2, q = 2;
  std::string density = "1/2", falsifying = "1/2", p = "1/2", rho = "1/2", far;
  bool planted = false;
  std::string corpus;
  std::size_t count = 0;
  std::size_t max_attempts = 100000;
};

void write_corpus_entry(const fs::path& dir, const Json& instance, const FarCertificate& cert) {
  fs::create_directories(dir);
  write_text_file((dir / "instance.json").string(), dump(instance));
  write_text_file((dir / "certificate.json").string(), dump(to_json(cert)));
}

std::string entry_name(const std::string& prefix, std::size_t i) {
  std::ostringstream os;
  os << prefix << '-' << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

int run_gen_csp(const GenOptions& g) {
  auto density = probability_option("density", g.density);
  auto falsifying = probability_option("falsifying", g.falsifying);
  Json config{{"n", g.n}, {"k", g.k}, {"q", g.q}, {"density", to_string(density)},
              {"falsifying", to_string(falsifying)}, {"planted", g.planted}, {"seed", g.o.seed}};
  if (!g.corpus.empty()) {
    if (g.far.empty() || g.count == 0) throw UsageError("--corpus needs --far and --count");
    auto eps = epsilon_option(g.far);
    std::size_t kept = 0, attempt = 0;
    Json index = Json::array();
    for (; kept < g.count && attempt < g.max_attempts; ++attempt) {
      const auto seed = derive_seed(g.o.seed, attempt);
      auto phi = gen_random_csp(g.n, g.k, g.q, density, falsifying, seed);
      auto cert = certify_far(phi, eps);
      if (!cert) continue;
      auto name = entry_name("csp", kept++);
      auto inst = to_json(phi);
      inst["seed"] = seed;
      write_corpus_entry(fs::path(g.corpus) / name, inst, *cert);
      index.push_back({{"name", name}, {"seed", seed}, {"distance", to_string(cert->achieved)}});
    }
    if (kept < g.count)
      throw UsageError("only " + std::to_string(kept) + " far instances in " + std::to_string(attempt) + " attempts");
    config["far"] = to_string(eps);
    config["count"] = g.count;
    Json summary{{"meta", meta("gen-csp", config)}, {"corpus", g.corpus}, {"attempts", attempt}, {"entries", index}};
    write_text_file((fs::path(g.corpus) / "index.json").string(), dump(summary));
    emit(g.o, dump(summary));
    return kExitOk;
  }
  Json j;
  if (g.planted) {
    auto pc = gen_planted_sat_csp(g.n, g.k, g.q, density, g.o.seed, falsifying);
    j = to_json(pc.csp);
    j["planted"] = to_json(pc.planted);
  } else {
    j = to_json(gen_random_csp(g.n, g.k, g.q, density, falsifying, g.o.seed));
  }
  j["meta"] = meta("gen-csp", config);
  emit(g.o, dump(j));
  return kExitOk;
}

int run_gen_graph(const GenOptions& g) {
  auto p = probability_option("p", g.p);
  auto rho = rho_option(g.rho);
  Json config{{"n", g.n}, {"p", to_string(p)}, {"rho", to_string(rho)}, {"planted", g.planted}, {"seed", g.o.seed}};
  auto make = [&](std::uint64_t seed) {
    return g.planted ? gen_planted_is_graph(g.n, rho, p, seed) : gen_random_graph(g.n, p, seed);
  };
  if (!g.corpus.empty()) {
    if (g.far.empty() || g.count == 0) throw UsageError("--corpus needs --far and --count");
    auto eps = epsilon_option(g.far);
    std::size_t kept = 0, attempt = 0;
    Json index = Json::array();
    for (; kept < g.count && attempt < g.max_attempts; ++attempt) {
      const auto seed = derive_seed(g.o.seed, attempt);
      auto graph = make(seed);
      auto cert = certify_far(graph, rho, eps);
      if (!cert) continue;
      auto name = entry_name("graph", kept++);
      auto inst = to_json(graph);
      inst["seed"] = seed;
      write_corpus_entry(fs::path(g.corpus) / name, inst, *cert);
      index.push_back({{"name", name}, {"seed", seed}, {"distance", to_string(cert->achieved)}});
    }
    if (kept < g.count)
      throw UsageError("only " + std::to_string(kept) + " far instances in " + std::to_string(attempt) + " attempts");
    config["far"] = to_string(eps);
    config["count"] = g.count;
    Json summary{{"meta", meta("gen-graph", config)}, {"corpus", g.corpus}, {"attempts", attempt}, {"entries", index}};
    write_text_file((fs::path(g.corpus) / "index.json").string(), dump(summary));
    emit(g.o, dump(summary));
    return kExitOk;
  }
  auto j = to_json(make(g.o.seed));
  j["meta"] = meta("gen-graph", config);
  emit(g.o, dump(j));
  return kExitOk;
}

// ------------------------------------------------------- instances & oracles

struct InstanceOptions {
  Output o;
  std::string csp, graph, hypergraph, certificate, corpus;
  std::string epsilon, rho = "1/2";
  std::string set;
  bool all_sets = false;
  std::optional<std::size_t> n;
  std::uint64_t cap = std::uint64_t{1} << 24;
};

int run_build_hypergraph(const InstanceOptions& a) {
  if (a.csp.empty()) throw UsageError("--csp is required");
  auto phi = csp_from_json(read_json_file(a.csp));
  auto j = to_json(build_hypergraph(phi));
  j["meta"] = meta("build-hypergraph", Json{{"csp", a.csp}});
  emit(a.o, dump(j));
  return kExitOk;
}

int run_dist_csp(const InstanceOptions& a) {
  if (a.csp.empty()) throw UsageError("--csp is required");
  auto phi = csp_from_json(read_json_file(a.csp));
  auto d = distance_to_sat(phi, CspOracleConfig{a.cap});
  Json j{{"meta", meta("dist-csp", Json{{"csp", a.csp}, {"cap", a.cap}})},
         {"instance_hash", content_hash(to_json(phi))},
         {"min_falsified", d.min_falsified},
         {"distance", rational_json(d.distance)},
         {"witness", to_json(d.witness)}};
  emit(a.o, dump(j));
  return kExitOk;
}

int run_dist_graph(const InstanceOptions& a) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  auto rho = rho_option(a.rho);
  auto g = graph_from_json(read_json_file(a.graph));
  auto d = distance_to_rho_is(g, rho, IndepSetOracleConfig{a.cap});
  Json j{{"meta", meta("dist-graph", Json{{"graph", a.graph}, {"rho", to_string(rho)}, {"cap", a.cap}})},
         {"instance_hash", content_hash(to_json(g))},
         {"target_size", d.target_size},
         {"min_edits", d.min_edits},
         {"distance", rational_json(d.distance)},
         {"argmin", to_json(d.argmin)}};
  emit(a.o, dump(j));
  return kExitOk;
}

int run_certify(const InstanceOptions& a) {
  if (a.epsilon.empty()) throw UsageError("--epsilon is required");
  auto eps = epsilon_option(a.epsilon);
  Json config{{"epsilon", to_string(eps)}, {"cap", a.cap}};
  std::optional<FarCertificate> cert;
  if (!a.csp.empty()) {
    config["csp"] = a.csp;
    cert = certify_far(csp_from_json(read_json_file(a.csp)), eps, CspOracleConfig{a.cap});
  } else if (!a.graph.empty()) {
    auto rho = rho_option(a.rho);
    config["graph"] = a.graph;
    config["rho"] = to_string(rho);
    cert = certify_far(graph_from_json(read_json_file(a.graph)), rho, eps, IndepSetOracleConfig{a.cap});
  } else {
    throw UsageError("certify needs --csp or --graph");
  }
  Json j = cert ? to_json(*cert) : Json{{"far", false}};
  if (cert) j["far"] = true;
  j["meta"] = meta("certify", config);
  emit(a.o, dump(j));
  return kExitOk;
}

// ------------------------------------------------------------- containers

std::vector<VertexSet> sets_for(const Hypergraph& h, const InstanceOptions& a, bool variable_distinct) {
  if (!a.set.empty()) return {vertex_set_option(a.set, h.vertex_count())};
  if (!a.all_sets) throw UsageError("give --set or --all-independent-sets");
  EnumerationOptions opt;
  opt.variable_distinct = variable_distinct;
  return collect_independent_sets(h, opt);
}

std::vector<VertexSet> sets_for(const Graph& g, const InstanceOptions& a) {
  if (!a.set.empty()) return {vertex_set_option(a.set, g.vertex_count())};
  if (!a.all_sets) throw UsageError("give --set or --all-independent-sets");
  return collect_independent_sets(g);
}

struct HypergraphInput {
  Hypergraph h;
  std::size_t n;
  bool from_csp;
  std::optional<Csp> csp;
};

HypergraphInput load_hypergraph_input(const InstanceOptions& a) {
  if (!a.csp.empty()) {
    auto phi = csp_from_json(read_json_file(a.csp));
    auto h = build_hypergraph(phi);
    return {h, a.n.value_or(phi.variable_count()), true, phi};
  }
  if (!a.hypergraph.empty()) {
    if (!a.n) throw UsageError("--hypergraph needs --n");
    return {hypergraph_from_json(read_json_file(a.hypergraph)), *a.n, false, std::nullopt};
  }
  throw UsageError("give --csp or --hypergraph");
}

int run_containers_sat(const InstanceOptions& a) {
  auto in = load_hypergraph_input(a);
  auto sets = sets_for(in.h, a, in.from_csp);
  Json config{{"csp", a.csp}, {"hypergraph", a.hypergraph}, {"n", in.n}, {"set", a.set}, {"all", a.all_sets}};
  if (a.o.format == "csv") {
    std::ostringstream os;
    os << "set,t,fingerprint_size,container_size,container_vars\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto tr = run_generator(in.h, in.n, sets[i]);
      for (std::size_t t = 0; t <= tr.loop_length() + 1; ++t) {
        auto c = tr.container(t);
        os << i << ',' << t << ',' << tr.fingerprint(t).size() << ',' << c.size() << ',';
        if (in.h.labelled()) os << vars(in.h, c);
        os << '\n';
      }
    }
    emit(a.o, os.str());
    return kExitOk;
  }
  Json traces = Json::array();
  for (const auto& s : sets) traces.push_back(to_json(run_generator(in.h, in.n, s)));
  Json j{{"meta", meta("containers-sat", config)}, {"traces", traces}};
  emit(a.o, dump(j));
  return kExitOk;
}

int run_containers_star(const InstanceOptions& a) {
  if (a.graph.empty()) throw UsageError("--graph is required");
  auto g = graph_from_json(read_json_file(a.graph));
  auto sets = sets_for(g, a);
  Json config{{"graph", a.graph}, {"set", a.set}, {"all", a.all_sets}};
  if (a.o.format == "csv") {
    std::ostringstream os;
    os << "set,t,fingerprint_size,inner_size,outer_size\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto tr = run_star_generator(g, sets[i]);
      for (std::size_t t = 0; t <= tr.loop_length() + 1; ++t)
        os << i << ',' << t << ',' << tr.fingerprint(t).size() << ',' << tr.inner(t).size() << ','
           << tr.outer(t).size() << '\n';
    }
    emit(a.o, os.str());
    return kExitOk;
  }
  Json traces = Json::array();
  for (const auto& s : sets) traces.push_back(to_json(run_star_generator(g, s)));
  Json j{{"meta", meta("containers-star", config)}, {"traces", traces}};
  emit(a.o, dump(j));
  return kExitOk;
}

// ---------------------------------------------------------------- verifiers

struct VerifyOptions : InstanceOptions {
  std::string trace;
  std::size_t samples = 100000;
};

// Collects counterexample records and renders the verdict.
struct VerifyReport {
  std::string verb;
  Json config;
  std::size_t instances = 0;
  std::size_t checks = 0;
  Json counterexamples = Json::array();
  Json extra = Json::object();

  int finish(const Output& o) const {
    Json j{{"meta", meta(verb, config)},
           {"verdict", !counterexamples.empty() ? "counterexample" : checks == 0 ? "vacuous" : "pass"},
           {"instances", instances},
           {"checks", checks}};
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    j["counterexamples"] = counterexamples;
    emit(o, dump(j));
    if (!counterexamples.empty()) {
      std::cerr << "counterexample: " << counterexamples.front().dump() << "\n";
      return kExitCounterexample;
    }
    if (checks == 0) std::cerr << "note: no case met the preconditions; nothing was checked\n";
    return kExitOk;
  }
};

struct CspCase {
  std::string name;
  Csp csp;
  std::optional<FarCertificate> certificate;
  std::optional<Json> replay_failure;
};

std::vector<CspCase> csp_cases(const VerifyOptions& a, bool need_certificate) {
  std::vector<CspCase> out;
  if (!a.corpus.empty()) {
    for (auto& e : load_corpus(a.corpus, "csp"))
      out.push_back({e.name, csp_from_json(e.instance), e.certificate, replay_certificate(e.instance, e.certificate)});
    return out;
  }
  if (a.csp.empty()) throw UsageError("give --csp or --corpus");
  auto inst = read_json_file(a.csp);
  CspCase c{a.csp, csp_from_json(inst), std::nullopt, std::nullopt};
  if (!a.certificate.empty()) {
    c.certificate = certificate_from_json(read_json_file(a.certificate));
    c.replay_failure = replay_certificate(inst, *c.certificate);
  } else if (need_certificate) {
    if (a.epsilon.empty()) throw UsageError("give --certificate or --epsilon");
    c.certificate = certify_far(c.csp, epsilon_option(a.epsilon), CspOracleConfig{a.cap});
    if (!c.certificate) throw UsageError("instance is not " + a.epsilon + "-far from satisfiable");
  }
  out.push_back(std::move(c));
  return out;
}

struct GraphCase {
  std::string name;
  Graph graph;
  std::optional<FarCertificate> certificate;
  std::optional<Json> replay_failure;
};

std::vector<GraphCase> graph_cases(const VerifyOptions& a, bool need_certificate) {
  std::vector<GraphCase> out;
  if (!a.corpus.empty()) {
    for (auto& e : load_corpus(a.corpus, "graph"))
      out.push_back({e.name, graph_from_json(e.instance), e.certificate, replay_certificate(e.instance, e.certificate)});
    return out;
  }
  if (a.graph.empty()) throw UsageError("give --graph or --corpus");
  auto inst = read_json_file(a.graph);
  GraphCase c{a.graph, graph_from_json(inst), std::nullopt, std::nullopt};
  if (!a.certificate.empty()) {
    c.certificate = certificate_from_json(read_json_file(a.certificate));
    c.replay_failure = replay_certificate(inst, *c.certificate);
  } else if (need_certificate) {
    if (a.epsilon.empty()) throw UsageError("give --certificate or --epsilon");
    c.certificate = certify_far(c.graph, rho_option(a.rho), epsilon_option(a.epsilon), IndepSetOracleConfig{a.cap});
    if (!c.certificate) throw UsageError("graph is not " + a.epsilon + "-far from rho-IndepSet");
  }
  out.push_back(std::move(c));
  return out;
}

SatDistance as_sat_distance(const FarCertificate& c) {
  return {c.min_count, c.achieved, Assignment(c.witness)};
}

RhoDistance as_rho_distance(const FarCertificate& c, std::size_t n) {
  return {static_cast<std::size_t>(ceil(*c.rho * static_cast<std::int64_t>(n))), c.min_count, c.achieved,
          VertexSet::of(n, c.witness)};
}

int run_verify_gcl_sat(const VerifyOptions& a) {
  VerifyReport rep{"verify gcl-sat", Json{{"corpus", a.corpus}, {"csp", a.csp}, {"set", a.set}}};
  for (auto& c : csp_cases(a, true)) {
    ++rep.instances;
    if (c.replay_failure) {
      rep.counterexamples.push_back({{"instance", c.name}, {"certificate", *c.replay_failure}});
      continue;
    }
    const auto eps = a.epsilon.empty() ? c.certificate->epsilon : epsilon_option(a.epsilon);
    const auto dist = as_sat_distance(*c.certificate);
    auto h = build_hypergraph(c.csp);
    std::vector<VertexSet> sets;
    if (!a.set.empty()) sets.push_back(vertex_set_option(a.set, h.vertex_count()));
    else sets = collect_independent_sets(h, EnumerationOptions{std::nullopt, true, 30});
    for (const auto& s : sets) {
      ++rep.checks;
      auto r = verify_gcl_sat(c.csp, h, eps, s, dist);
      if (!r.witness_found)
        rep.counterexamples.push_back({{"instance", c.name},
                                       {"independent", to_json(s)},
                                       {"epsilon", to_string(eps)},
                                       {"t_max", r.t_max},
                                       {"min_vars", r.min_vars},
                                       {"trace", to_json(run_generator(h, c.csp.variable_count(), s))}});
    }
  }
  return rep.finish(a.o);
}

int run_verify_gcl_star(const VerifyOptions& a) {
  VerifyReport rep{"verify gcl-star", Json{{"corpus", a.corpus}, {"graph", a.graph}, {"set", a.set}}};
  std::size_t inner_failures = 0;
  for (auto& c : graph_cases(a, true)) {
    ++rep.instances;
    if (c.replay_failure) {
      rep.counterexamples.push_back({{"instance", c.name}, {"certificate", *c.replay_failure}});
      continue;
    }
    const auto eps = a.epsilon.empty() ? c.certificate->epsilon : epsilon_option(a.epsilon);
    const auto rho = *c.certificate->rho;
    const auto dist = as_rho_distance(*c.certificate, c.graph.vertex_count());
    std::vector<VertexSet> sets;
    if (!a.set.empty()) sets.push_back(vertex_set_option(a.set, c.graph.vertex_count()));
    else sets = collect_independent_sets(c.graph);
    for (const auto& s : sets) {
      ++rep.checks;
      auto r = verify_gcl_star(c.graph, rho, eps, s, dist);
      inner_failures += !r.inner_lemma_holds;
      if (!r.witness_found || !r.inner_lemma_holds)
        rep.counterexamples.push_back({{"instance", c.name},
                                       {"independent", to_json(s)},
                                       {"rho", to_string(rho)},
                                       {"epsilon", to_string(eps)},
                                       {"witness_found", r.witness_found},
                                       {"inner_lemma_holds", r.inner_lemma_holds},
                                       {"t_max", r.t_max},
                                       {"trace", to_json(run_star_generator(c.graph, s))}});
    }
  }
  rep.extra["inner_lemma_failures"] = inner_failures;
  return rep.finish(a.o);
}

// Checks one hypergraph trace file against a fresh run on its own I.
void check_trace_file(const Json& j, const VerifyOptions& a, VerifyReport& rep) {
  ++rep.checks;
  if (j.contains("arity")) {
    auto in = load_hypergraph_input(a);
    auto stored = container_trace_from_json(j);
    if (stored.vertex_count != in.h.vertex_count())
      throw UsageError("trace vertex count does not match the instance");
    Json record{{"trace", a.trace}};
    if (auto why = check_trace_invariants(stored)) record["invariant"] = *why;
    auto fresh = run_generator(in.h, stored.size_bound, stored.independent);
    if (to_json(fresh) != to_json(stored)) record["replay"] = "trace differs from a fresh run on its independent set";
    if (record.size() > 1) rep.counterexamples.push_back(record);
    return;
  }
  if (a.graph.empty()) throw UsageError("star trace needs --graph");
  auto g = graph_from_json(read_json_file(a.graph));
  auto stored = star_trace_from_json(j);
  if (stored.vertex_count != g.vertex_count()) throw UsageError("trace vertex count does not match the graph");
  Json record{{"trace", a.trace}};
  if (auto why = check_star_invariants(g, stored)) record["invariant"] = *why;
  if (to_json(run_star_generator(g, stored.independent)) != to_json(stored))
    record["replay"] = "trace differs from a fresh run on its independent set";
  if (record.size() > 1) rep.counterexamples.push_back(record);
}

void closure_on_graph(const std::string& name, const Graph& g, const VerifyOptions& a, VerifyReport& rep) {
  ++rep.instances;
  std::vector<VertexSet> sets;
  if (!a.set.empty()) sets.push_back(vertex_set_option(a.set, g.vertex_count()));
  else sets = collect_independent_sets(g);
  for (const auto& s : sets) {
    ++rep.checks;
    Json record{{"instance", name}, {"independent", to_json(s)}};
    if (auto why = check_star_invariants(g, run_star_generator(g, s))) record["invariant"] = *why;
    auto cl = check_star_closure(g, s);
    if (!cl.holds) record["closure_mismatch_t"] = *cl.first_mismatch;
    if (record.size() > 2) rep.counterexamples.push_back(record);
  }
}

void closure_on_hypergraph(const std::string& name, const HypergraphInput& in, const VerifyOptions& a,
                           VerifyReport& rep) {
  ++rep.instances;
  std::vector<VertexSet> sets;
  if (!a.set.empty()) {
    sets.push_back(vertex_set_option(a.set, in.h.vertex_count()));
  } else {
    EnumerationOptions opt;
    opt.variable_distinct = in.from_csp;
    sets = collect_independent_sets(in.h, opt);
  }
  for (const auto& s : sets) {
    ++rep.checks;
    Json record{{"instance", name}, {"independent", to_json(s)}};
    if (auto why = check_trace_invariants(run_generator(in.h, in.n, s))) record["invariant"] = *why;
    auto cl = check_closure(in.h, in.n, s);
    if (!cl.holds) record["closure_mismatch_t"] = *cl.first_mismatch;
    if (record.size() > 2) rep.counterexamples.push_back(record);
  }
}

int run_verify_closure(const VerifyOptions& a) {
  VerifyReport rep{"verify closure", Json{{"corpus", a.corpus}, {"csp", a.csp}, {"graph", a.graph},
                                          {"hypergraph", a.hypergraph}, {"trace", a.trace}, {"set", a.set}}};
  if (!a.trace.empty()) {
    auto j = read_json_file(a.trace);
    rep.instances = 1;
    if (j.contains("traces"))
      for (const auto& t : j.at("traces")) check_trace_file(t, a, rep);
    else
      check_trace_file(j, a, rep);
    return rep.finish(a.o);
  }
  if (!a.corpus.empty()) {
    auto csps = load_corpus(a.corpus, "csp");
    auto graphs = load_corpus(a.corpus, "graph");
    if (csps.empty() && graphs.empty()) throw UsageError("corpus '" + a.corpus + "' is empty");
    for (auto& e : csps) {
      auto phi = csp_from_json(e.instance);
      closure_on_hypergraph(e.name, HypergraphInput{build_hypergraph(phi), phi.variable_count(), true, phi}, a, rep);
    }
    for (auto& e : graphs) closure_on_graph(e.name, graph_from_json(e.instance), a, rep);
  } else if (!a.graph.empty()) {
    closure_on_graph(a.graph, graph_from_json(read_json_file(a.graph)), a, rep);
  } else {
    closure_on_hypergraph(a.csp.empty() ? a.hypergraph : a.csp, load_hypergraph_input(a), a, rep);
  }
  return rep.finish(a.o);
}

int run_verify_edges_bound(const VerifyOptions& a) {
  VerifyReport rep{"verify edges-bound", Json{{"csp", a.csp}, {"graph", a.graph}, {"hypergraph", a.hypergraph}}};
  Hypergraph h;
  if (!a.graph.empty()) h = as_hypergraph(graph_from_json(read_json_file(a.graph)));
  else if (!a.hypergraph.empty()) h = hypergraph_from_json(read_json_file(a.hypergraph));
  else if (!a.csp.empty()) h = build_hypergraph(csp_from_json(read_json_file(a.csp)));
  else throw UsageError("give --graph, --hypergraph or --csp");
  rep.instances = rep.checks = 1;
  auto r = check_edges_bound(h);
  rep.extra["heavy_count"] = r.heavy_count;
  rep.extra["degree_threshold"] = to_string(r.degree_threshold);
  rep.extra["lower_bound"] = to_string(r.lower_bound);
  if (!r.pass)
    rep.counterexamples.push_back({{"hypergraph", to_json(h)}, {"heavy_count", r.heavy_count},
                                   {"lower_bound", to_string(r.lower_bound)}});
  return rep.finish(a.o);
}

int run_verify_container_degree(const VerifyOptions& a) {
  VerifyReport rep{"verify container-degree", Json{{"corpus", a.corpus}, {"csp", a.csp}, {"set", a.set}}};
  std::optional<Rational> worst, worst_tight;
  std::size_t tight_failures = 0;
  for (auto& c : csp_cases(a, false)) {
    ++rep.instances;
    auto h = build_hypergraph(c.csp);
    const auto n = c.csp.variable_count();
    std::vector<VertexSet> sets;
    if (!a.set.empty()) sets.push_back(vertex_set_option(a.set, h.vertex_count()));
    else sets = collect_independent_sets(h, EnumerationOptions{std::nullopt, true, 30});
    for (const auto& s : sets) {
      ++rep.checks;
      auto tr = run_generator(h, n, s);
      auto r = check_container_degree(h, tr, c.csp.alphabet_size(), n);
      tight_failures += !r.tight_pass;
      if (r.worst_slack && (!worst || *r.worst_slack < *worst)) worst = r.worst_slack;
      if (r.worst_tight_slack && (!worst_tight || *r.worst_tight_slack < *worst_tight))
        worst_tight = r.worst_tight_slack;
      if (!r.pass) {
        Json steps = Json::array();
        for (const auto& st : r.steps)
          steps.push_back({{"t", st.t}, {"max_degree", st.max_degree}, {"bound", to_string(st.bound)}});
        rep.counterexamples.push_back({{"instance", c.name}, {"independent", to_json(s)}, {"steps", steps}});
      }
    }
  }
  rep.extra["worst_slack"] = worst ? Json(to_string(*worst)) : Json(nullptr);
  rep.extra["worst_tight_slack"] = worst_tight ? Json(to_string(*worst_tight)) : Json(nullptr);
  rep.extra["tight_failures"] = tight_failures;
  return rep.finish(a.o);
}

int run_verify_shrinking(const VerifyOptions& a) {
  VerifyReport rep{"verify shrinking",
                   Json{{"corpus", a.corpus}, {"graph", a.graph}, {"samples", a.samples}, {"seed", a.o.seed}}};
  std::size_t samples = 0, held = 0, near = 0;
  for (auto& c : graph_cases(a, true)) {
    ++rep.instances;
    if (c.replay_failure) {
      rep.counterexamples.push_back({{"instance", c.name}, {"certificate", *c.replay_failure}});
      continue;
    }
    const auto eps = a.epsilon.empty() ? c.certificate->epsilon : epsilon_option(a.epsilon);
    const auto rho = *c.certificate->rho;
    auto r = search_shrinking(c.graph, rho, eps, as_rho_distance(*c.certificate, c.graph.vertex_count()), a.samples,
                              derive_seed(a.o.seed, rep.instances - 1));
    samples += r.samples;
    held += r.premises_held;
    near += r.near_misses;
    rep.checks += r.samples;
    if (r.first_counterexample) {
      const auto& x = *r.first_counterexample;
      rep.counterexamples.push_back({{"instance", c.name},
                                     {"rho", to_string(rho)},
                                     {"epsilon", to_string(eps)},
                                     {"independent", to_json(x.independent)},
                                     {"t", x.t},
                                     {"D", to_json(x.dense_free)},
                                     {"alpha", to_string(x.alpha)},
                                     {"count", r.counterexamples}});
    }
  }
  rep.extra["samples"] = samples;
  rep.extra["premises_held"] = held;
  rep.extra["near_misses"] = near;
  return rep.finish(a.o);
}

// ------------------------------------------------------------------ testers

struct TestOptions {
  Output o;
  std::string tester;
  std::string csp, graph, hypergraph, spec;
  std::string epsilon = "1/10", rho = "1/2";
  std::optional<std::size_t> s, r;
  std::size_t k = 3;
  double c = 1.0, c1 = 1.0, c2 = 1.0;
  bool disjoint = false;
  std::size_t trials = 1;
  std::size_t workers = 0;
  std::string csv;
};

ShppSpec load_shpp_spec(const std::string& path) {
  auto j = read_json_file(path);
  ShppSpec spec;
  spec.k = detail::field<std::size_t>(j, "k");
  spec.lower = detail::field<std::vector<std::vector<int>>>(j, "lower");
  spec.upper = detail::field<std::vector<std::vector<int>>>(j, "upper");
  return spec;
}

// Binds the chosen tester to its instance; also returns the resolved config.
std::pair<TesterRun, Json> make_tester(const TestOptions& t) {
  Json config{{"tester", t.tester}};
  if (t.tester == "sat" || t.tester == "color" || t.tester == "shpp") {
    SatTesterParams params;
    params.epsilon = epsilon_option(t.epsilon);
    params.sample_size = t.s;
    params.c = t.c;
    std::shared_ptr<Csp> phi;
    if (t.tester == "sat") {
      if (t.csp.empty()) throw UsageError("test sat needs --csp");
      phi = std::make_shared<Csp>(csp_from_json(read_json_file(t.csp)));
      config["csp"] = t.csp;
    } else if (t.tester == "color") {
      Hypergraph h;
      if (!t.hypergraph.empty()) h = hypergraph_from_json(read_json_file(t.hypergraph));
      else if (!t.graph.empty()) h = as_hypergraph(graph_from_json(read_json_file(t.graph)));
      else throw UsageError("test color needs --hypergraph or --graph");
      phi = std::make_shared<Csp>(colorability_to_sat(h, t.k));
      config["hypergraph"] = t.hypergraph;
      config["graph"] = t.graph;
      config["k"] = t.k;
    } else {
      if (t.graph.empty() || t.spec.empty()) throw UsageError("test shpp needs --graph and --spec");
      phi = std::make_shared<Csp>(shpp_to_sat(graph_from_json(read_json_file(t.graph)), load_shpp_spec(t.spec)));
      config["graph"] = t.graph;
      config["spec"] = t.spec;
    }
    const auto s = resolve_sample_size(params, phi->variable_count(), phi->alphabet_size(), phi->arity());
    config["epsilon"] = to_string(params.epsilon);
    config["s"] = s;
    config["c"] = t.c;
    const std::string name = t.tester;
    return {[phi, params, name](std::uint64_t seed) {
              auto rep = canonical_sat_tester(*phi, params, seed);
              rep.tester = name;
              return rep;
            },
            config};
  }
  if (t.tester == "indepset" || t.tester == "canonical-is") {
    if (t.graph.empty()) throw UsageError("test " + t.tester + " needs --graph");
    auto g = std::make_shared<Graph>(graph_from_json(read_json_file(t.graph)));
    auto rho = rho_option(t.rho);
    config["graph"] = t.graph;
    config["rho"] = to_string(rho);
    if (t.tester == "canonical-is") {
      if (!t.s) throw UsageError("test canonical-is needs --s");
      config["s"] = *t.s;
      const auto s = *t.s;
      return {[g, rho, s](std::uint64_t seed) { return canonical_is_tester(*g, rho, s, seed); }, config};
    }
    StarTesterParams params;
    params.rho = rho;
    params.epsilon = epsilon_option(t.epsilon);
    params.r = t.r;
    params.s = t.s;
    params.c1 = t.c1;
    params.c2 = t.c2;
    params.disjoint_samples = t.disjoint;
    auto sizes = resolve_star_sizes(params, g->vertex_count());
    config["epsilon"] = to_string(params.epsilon);
    config["r"] = sizes.r;
    config["s"] = sizes.s;
    config["c1"] = t.c1;
    config["c2"] = t.c2;
    config["disjoint_samples"] = t.disjoint;
    return {[g, params](std::uint64_t seed) { return star_tester(*g, params, seed); }, config};
  }
  throw UsageError("unknown tester '" + t.tester + "'");
}

int run_test(const TestOptions& t, const std::string& verb) {
  auto [run, config] = make_tester(t);
  config["seed"] = t.o.seed;
  config["trials"] = t.trials;
  if (verb != "estimate" && t.trials == 1) {
    auto rep = run(derive_seed(t.o.seed, 0));
    if (t.o.format == "csv") {
      std::ostringstream os;
      os << "trial,seed,verdict,queries\n0," << rep.seed << ',' << (rep.accept ? "accept" : "reject") << ','
         << rep.query_count << '\n';
      emit(t.o, os.str());
    } else {
      auto j = to_json(rep);
      j["meta"] = meta(verb, config);
      emit(t.o, dump(j));
    }
    return kExitOk;
  }
  const auto workers = t.workers ? t.workers : default_workers();
  auto est = estimate_acceptance(run, t.trials, t.o.seed, workers);
  const auto csv = trials_csv(est);
  if (!t.csv.empty()) write_text_file(t.csv, csv);
  if (t.o.format == "csv") {
    emit(t.o, csv);
    return kExitOk;
  }
  std::size_t max_queries = 0;
  for (const auto& row : est.rows) max_queries = std::max(max_queries, row.queries);
  Json j{{"meta", meta(verb, config)},
         {"generator", kGeneratorName},
         {"trials", est.trials},
         {"accepts", est.accepts},
         {"accept_rate", est.rate},
         {"wilson95", {est.interval.low, est.interval.high}},
         {"max_queries", max_queries}};
  emit(t.o, dump(j));
  return kExitOk;
}

void add_tester_options(CLI::App* cmd, TestOptions& t) {
  add_output(cmd, t.o, true);
  cmd->add_option("--seed", t.o.seed, "Master seed");
  cmd->add_option("--csp", t.csp, "CSP JSON file");
  cmd->add_option("--graph", t.graph, "Graph JSON file");
  cmd->add_option("--hypergraph", t.hypergraph, "Hypergraph JSON file");
  cmd->add_option("--spec", t.spec, "Partition property JSON {k, lower, upper}");
  cmd->add_option("--epsilon", t.epsilon, "Distance parameter p/q");
  cmd->add_option("--rho", t.rho, "Independent set density p/q");
  cmd->add_option("--s", t.s, "Sample size (overrides the formula)");
  cmd->add_option("--r", t.r, "Core sample size for the star tester");
  cmd->add_option("--k", t.k, "Colours for test color");
  cmd->add_option("--c", t.c, "Constant in the SAT sample size");
  cmd->add_option("--c1", t.c1, "Constant in the core sample size");
  cmd->add_option("--c2", t.c2, "Constant in the body sample size");
  cmd->add_flag("--disjoint-samples", t.disjoint, "Draw R and S disjoint");
  cmd->add_option("--trials", t.trials, "Number of seeded runs")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", t.workers, "Worker threads (default: CONTAINER_BENCH_WORKERS or cores)");
  cmd->add_option("--csv", t.csv, "Also write per-trial CSV here");
}

void add_instance_options(CLI::App* cmd, InstanceOptions& a) {
  cmd->add_option("--csp", a.csp, "CSP JSON file");
  cmd->add_option("--graph", a.graph, "Graph JSON file");
  cmd->add_option("--hypergraph", a.hypergraph, "Hypergraph JSON file");
  cmd->add_option("--certificate", a.certificate, "Far certificate JSON file");
  cmd->add_option("--corpus", a.corpus, "Directory of instance.json + certificate.json pairs");
  cmd->add_option("--epsilon", a.epsilon, "Distance parameter p/q");
  cmd->add_option("--rho", a.rho, "Independent set density p/q");
  cmd->add_option("--set", a.set, "Independent set as comma-separated vertices");
  cmd->add_flag("--all-independent-sets", a.all_sets, "Run on every independent set");
  cmd->add_option("--n", a.n, "Size bound (defaults to the CSP variable count)");
  cmd->add_option("--cap", a.cap, "Oracle work cap")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Container-method workbench: generators, exact oracles, lemma verifiers and testers"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::function<int()> action;

  GenOptions gen_csp, gen_graph;
  auto* c_gen_csp = app.add_subcommand("gen-csp", "Generate a random or planted-satisfiable CSP");
  add_output(c_gen_csp, gen_csp.o, false);
  c_gen_csp->add_option("--seed", gen_csp.o.seed);
  c_gen_csp->add_option("--n", gen_csp.n)->check(CLI::PositiveNumber);
  c_gen_csp->add_option("--k", gen_csp.k)->check(CLI::PositiveNumber);
  c_gen_csp->add_option("--q", gen_csp.q)->check(CLI::PositiveNumber);
  c_gen_csp->add_option("--density", gen_csp.density, "Scope inclusion probability p/q");
  c_gen_csp->add_option("--falsifying", gen_csp.falsifying, "Falsifying tuple probability p/q");
  c_gen_csp->add_flag("--planted", gen_csp.planted, "Plant a satisfying assignment");
  c_gen_csp->add_option("--corpus", gen_csp.corpus, "Write certified far instances into this directory");
  c_gen_csp->add_option("--count", gen_csp.count, "Corpus size");
  c_gen_csp->add_option("--far", gen_csp.far, "Farness threshold p/q for corpus entries");
  c_gen_csp->callback([&] { action = [&] { return run_gen_csp(gen_csp); }; });

  auto* c_gen_graph = app.add_subcommand("gen-graph", "Generate G(n,p) or a planted independent set graph");
  add_output(c_gen_graph, gen_graph.o, false);
  c_gen_graph->add_option("--seed", gen_graph.o.seed);
  c_gen_graph->add_option("--n", gen_graph.n)->check(CLI::PositiveNumber);
  c_gen_graph->add_option("--p", gen_graph.p, "Edge probability p/q");
  c_gen_graph->add_option("--rho", gen_graph.rho, "Planted set density p/q");
  c_gen_graph->add_flag("--planted", gen_graph.planted, "Plant an independent set of ceil(rho n) vertices");
  c_gen_graph->add_option("--corpus", gen_graph.corpus, "Write certified far graphs into this directory");
  c_gen_graph->add_option("--count", gen_graph.count, "Corpus size");
  c_gen_graph->add_option("--far", gen_graph.far, "Farness threshold p/q for corpus entries");
  c_gen_graph->callback([&] { action = [&] { return run_gen_graph(gen_graph); }; });

  InstanceOptions inst;
  struct Simple {
    const char* name;
    const char* help;
    int (*run)(const InstanceOptions&);
    bool csv;
  };
  const Simple simple[] = {
      {"build-hypergraph", "Emit the falsifying-assignment hypergraph of a CSP", run_build_hypergraph, false},
      {"dist-csp", "Exact distance to satisfiability", run_dist_csp, false},
      {"dist-graph", "Exact distance to the rho-IndepSet property", run_dist_graph, false},
      {"certify", "Certify that an instance is epsilon-far", run_certify, false},
      {"containers-sat", "Fingerprint and container traces for a CSP hypergraph", run_containers_sat, true},
      {"containers-star", "Fingerprint and inner/outer container traces for a graph", run_containers_star, true},
  };
  for (const auto& s : simple) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_output(cmd, inst.o, s.csv);
    add_instance_options(cmd, inst);
    auto run = s.run;
    cmd->callback([&, run] { action = [&, run] { return run(inst); }; });
  }

  VerifyOptions ver;
  auto* c_verify = app.add_subcommand("verify", "Check a container lemma or proposition exhaustively");
  c_verify->require_subcommand(1);
  struct Verifier {
    const char* name;
    const char* help;
    int (*run)(const VerifyOptions&);
  };
  const Verifier verifiers[] = {
      {"gcl-sat", "Container lemma for far CSPs over every variable-distinct independent set", run_verify_gcl_sat},
      {"gcl-star", "Container lemma for independent set stars on far graphs", run_verify_gcl_star},
      {"closure", "Containers depend only on the fingerprint; with --trace, re-check a stored trace",
       run_verify_closure},
      {"edges-bound", "Heavy-vertex count lower bound on a hypergraph", run_verify_edges_bound},
      {"container-degree", "deg<=n bound inside every container", run_verify_container_degree},
      {"shrinking", "Randomized search for outer-container shrinking counterexamples", run_verify_shrinking},
  };
  for (const auto& [name, help, fn] : verifiers) {
    auto* cmd = c_verify->add_subcommand(name, help);
    add_output(cmd, ver.o, false);
    add_instance_options(cmd, ver);
    cmd->add_option("--seed", ver.o.seed);
    if (std::string(name) == "closure") cmd->add_option("--trace", ver.trace, "Trace JSON to re-check");
    if (std::string(name) == "shrinking") cmd->add_option("--samples", ver.samples, "Sampled tuples per graph");
    auto run = fn;
    cmd->callback([&, run] { action = [&, run] { return run(ver); }; });
  }

  TestOptions tst;
  auto* c_test = app.add_subcommand("test", "Run a property tester");
  c_test->require_subcommand(1);
  const std::pair<const char*, const char*> testers[] = {
      {"sat", "Canonical tester: satisfiability of the CSP restricted to s sampled variables"},
      {"color", "k-colourability of a graph or hypergraph through its CSP encoding"},
      {"shpp", "Partition property with 0/1 density bounds through its CSP encoding"},
      {"indepset", "Star tester for a rho n independent set (core sample r, body sample s)"},
      {"canonical-is", "Baseline: independent set of ceil(rho s) in a sampled induced subgraph"},
  };
  for (const auto& [name, help] : testers) {
    auto* cmd = c_test->add_subcommand(name, help);
    add_tester_options(cmd, tst);
    std::string tester = name;
    cmd->callback([&, tester] {
      tst.tester = tester;
      action = [&] { return run_test(tst, "test " + tst.tester); };
    });
  }
  auto* c_estimate = app.add_subcommand("estimate", "Monte Carlo acceptance estimate with a Wilson interval");
  add_tester_options(c_estimate, tst);
  c_estimate->add_option("--tester", tst.tester, "sat, color, shpp, indepset or canonical-is")->required();
  c_estimate->callback([&] { action = [&] { return run_test(tst, "estimate"); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const TrialFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}
