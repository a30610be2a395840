#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "containerbench/csp.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/hypergraph_containers.hpp"
#include "containerbench/star_containers.hpp"
#include "containerbench/testers.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

// Insertion-ordered so emitted files follow the documented field order and
// dump(parse(dump(x))) is byte-identical.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const VertexSet& s) { return Json(s.members()); }

inline VertexSet vertex_set_from_json(const Json& j, std::size_t universe) {
  if (!j.is_array()) throw PreconditionError("vertex set must be an array");
  VertexSet s(universe);
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw PreconditionError("vertex must be an integer");
    auto x = v.get<long long>();
    if (x < 0 || static_cast<std::size_t>(x) >= universe)
      throw PreconditionError("vertex " + std::to_string(x) + " out of range");
    s.insert(static_cast<Vertex>(x));
  }
  return s;
}

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"n", g.vertex_count()}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  auto n = detail::field<std::size_t>(j, "n");
  auto raw = detail::field<std::vector<std::vector<int>>>(j, "edges");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& e : raw) {
    if (e.size() != 2) throw PreconditionError("graph edge must have two endpoints");
    edges.emplace_back(e[0], e[1]);
  }
  try {
    return Graph(n, edges);
  } catch (const std::out_of_range& e) {
    throw PreconditionError(e.what());
  }
}

inline Json to_json(const Hypergraph& h) {
  Json labels = nullptr;
  if (h.labelled()) {
    labels = Json::array();
    for (const auto& l : *h.labels()) labels.push_back({l.variable, l.value});
  }
  return Json{{"q", h.arity()}, {"n", h.vertex_count()}, {"labels", labels}, {"edges", h.edges()}};
}

inline Hypergraph hypergraph_from_json(const Json& j) {
  auto q = detail::field<std::size_t>(j, "q");
  auto n = detail::field<std::size_t>(j, "n");
  auto edges = detail::field<std::vector<Edge>>(j, "edges");
  std::optional<std::vector<Label>> labels;
  if (j.contains("labels") && !j.at("labels").is_null()) {
    labels.emplace();
    for (const auto& p : detail::field<std::vector<std::vector<int>>>(j, "labels")) {
      if (p.size() != 2) throw PreconditionError("label must be [variable, value]");
      labels->push_back({p[0], p[1]});
    }
  }
  try {
    return Hypergraph(q, n, std::move(edges), std::move(labels));
  } catch (const std::out_of_range& e) {
    throw PreconditionError(e.what());
  }
}

inline Json to_json(const Csp& phi) {
  Json constraints = Json::array();
  for (const auto& c : phi.constraints()) {
    Json fals = Json::array();
    for (const auto& t : c.falsifying) fals.push_back(t);
    constraints.push_back(Json{{"scope", c.scope}, {"falsifying", fals}});
  }
  return Json{{"n", phi.variable_count()},
              {"k", phi.alphabet_size()},
              {"q", phi.arity()},
              {"constraints", constraints}};
}

inline Csp csp_from_json(const Json& j) {
  auto n = detail::field<std::size_t>(j, "n");
  auto k = detail::field<std::size_t>(j, "k");
  auto q = detail::field<std::size_t>(j, "q");
  std::vector<Constraint> constraints;
  if (!j.contains("constraints") || !j.at("constraints").is_array())
    throw PreconditionError("missing field 'constraints'");
  for (const auto& c : j.at("constraints")) {
    Constraint con;
    con.scope = detail::field<std::vector<int>>(c, "scope");
    for (auto& t : detail::field<std::vector<Tuple>>(c, "falsifying")) con.falsifying.insert(std::move(t));
    constraints.push_back(std::move(con));
  }
  try {
    return Csp(n, k, q, constraints);
  } catch (const std::out_of_range& e) {
    throw PreconditionError(e.what());
  }
}

inline Json to_json(const Assignment& a) { return Json(a.values); }

inline Json to_json(const ContainerTrace& tr) {
  Json its = Json::array();
  for (const auto& it : tr.iterations) {
    Json levels = Json::array();
    for (const auto& l : it.levels)
      levels.push_back(Json{{"arity", l.arity},
                            {"vertices", to_json(l.vertices)},
                            {"edge_count", l.edge_count},
                            {"selected", l.selected},
                            {"selected_degree", l.selected_degree},
                            {"excluded", to_json(l.excluded)},
                            {"degenerate", l.degenerate}});
    its.push_back(Json{{"t", it.t},
                       {"outer", it.outer},
                       {"outer_value", it.outer_value},
                       {"outer_excluded", to_json(it.outer_excluded)},
                       {"outer_witness", to_json(it.outer_witness)},
                       {"levels", levels},
                       {"final_level_edges", it.final_level_edges},
                       {"one_edge_removed", to_json(it.one_edge_removed)},
                       {"fingerprint", to_json(it.fingerprint)},
                       {"container", to_json(it.container)},
                       {"degenerate", it.degenerate},
                       {"truncated", it.truncated}});
  }
  return Json{{"arity", tr.arity},
              {"vertex_count", tr.vertex_count},
              {"size_bound", tr.size_bound},
              {"independent", to_json(tr.independent)},
              {"iterations", its}};
}

inline ContainerTrace container_trace_from_json(const Json& j) {
  using detail::field;
  ContainerTrace tr;
  tr.arity = field<std::size_t>(j, "arity");
  tr.vertex_count = field<std::size_t>(j, "vertex_count");
  tr.size_bound = field<std::size_t>(j, "size_bound");
  const auto n = tr.vertex_count;
  tr.independent = vertex_set_from_json(j.at("independent"), n);
  for (const auto& it : j.at("iterations")) {
    IterationRecord r;
    r.t = field<std::size_t>(it, "t");
    r.outer = field<Vertex>(it, "outer");
    r.outer_value = field<std::size_t>(it, "outer_value");
    r.outer_excluded = vertex_set_from_json(it.at("outer_excluded"), n);
    r.outer_witness = vertex_set_from_json(it.at("outer_witness"), n);
    for (const auto& l : it.at("levels")) {
      LevelRecord lr;
      lr.arity = field<std::size_t>(l, "arity");
      lr.vertices = vertex_set_from_json(l.at("vertices"), n);
      lr.edge_count = field<std::size_t>(l, "edge_count");
      lr.selected = field<Vertex>(l, "selected");
      lr.selected_degree = field<std::size_t>(l, "selected_degree");
      lr.excluded = vertex_set_from_json(l.at("excluded"), n);
      lr.degenerate = field<bool>(l, "degenerate");
      r.levels.push_back(std::move(lr));
    }
    r.final_level_edges = field<std::size_t>(it, "final_level_edges");
    r.one_edge_removed = vertex_set_from_json(it.at("one_edge_removed"), n);
    r.fingerprint = vertex_set_from_json(it.at("fingerprint"), n);
    r.container = vertex_set_from_json(it.at("container"), n);
    r.degenerate = field<bool>(it, "degenerate");
    r.truncated = field<bool>(it, "truncated");
    tr.iterations.push_back(std::move(r));
  }
  return tr;
}

inline Json to_json(const StarContainerTrace& tr) {
  Json its = Json::array();
  for (const auto& it : tr.iterations)
    its.push_back(Json{{"t", it.t},
                       {"u", it.u},
                       {"v", it.v},
                       {"fingerprint", to_json(it.fingerprint)},
                       {"inner", to_json(it.inner)},
                       {"outer", to_json(it.outer)}});
  return Json{{"vertex_count", tr.vertex_count}, {"independent", to_json(tr.independent)}, {"iterations", its}};
}

inline StarContainerTrace star_trace_from_json(const Json& j) {
  using detail::field;
  StarContainerTrace tr;
  tr.vertex_count = field<std::size_t>(j, "vertex_count");
  const auto n = tr.vertex_count;
  tr.independent = vertex_set_from_json(j.at("independent"), n);
  for (const auto& it : j.at("iterations")) {
    StarIterationRecord r;
    r.t = field<std::size_t>(it, "t");
    r.u = field<Vertex>(it, "u");
    r.v = field<Vertex>(it, "v");
    r.fingerprint = vertex_set_from_json(it.at("fingerprint"), n);
    r.inner = vertex_set_from_json(it.at("inner"), n);
    r.outer = vertex_set_from_json(it.at("outer"), n);
    tr.iterations.push_back(std::move(r));
  }
  return tr;
}

inline Json to_json(const TesterReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json j{{"tester", r.tester},
         {"verdict", r.accept ? "accept" : "reject"},
         {"sample", r.sample}};
  if (!r.core_sample.empty()) j["core_sample"] = r.core_sample;
  j["query_count"] = r.query_count;
  j["seed"] = r.seed;
  j["generator"] = r.generator;
  j["params"] = params;
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

/// 64-bit FNV-1a of the compact JSON form, as a 16-digit hex string.
inline std::string content_hash(const Json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace cbench
