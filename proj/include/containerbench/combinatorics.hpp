#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <algorithm>
#include <vector>

#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <typename G>
struct Induced {
  G graph;
  std::vector<Vertex> original;  // local index -> host vertex
};

namespace detail {
inline std::vector<Vertex> local_index(const VertexSet& u, std::size_t host_n) {
  if (u.universe() != host_n)
    throw std::out_of_range("vertex set universe " + std::to_string(u.universe()) +
                            " does not match host size " + std::to_string(host_n));
  std::vector<Vertex> local(host_n, -1);
  Vertex next = 0;
  u.for_each([&](Vertex v) { local[v] = next++; });
  return local;
}
}  // namespace detail

inline Induced<Graph> induced_subgraph(const Graph& g, const VertexSet& u) {
  auto local = detail::local_index(u, g.vertex_count());
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [a, b] : g.edges())
    if (u.contains(a) && u.contains(b)) edges.emplace_back(local[a], local[b]);
  return {Graph(u.size(), edges), u.members()};
}

inline Induced<Hypergraph> induced_subgraph(const Hypergraph& h, const VertexSet& u) {
  auto local = detail::local_index(u, h.vertex_count());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    if (!h.edge_within(i, u)) continue;
    Edge e;
    for (auto v : h.edge(i)) e.push_back(local[v]);
    edges.push_back(std::move(e));
  }
  std::optional<std::vector<Label>> labels;
  if (h.labelled()) {
    labels.emplace();
    u.for_each([&](Vertex v) { labels->push_back(h.label(v)); });
  }
  return {Hypergraph(h.arity(), u.size(), std::move(edges), std::move(labels)), u.members()};
}

inline bool is_independent(const Graph& g, const VertexSet& s) {
  if (s.universe() != g.vertex_count()) throw std::out_of_range("vertex set does not match host");
  bool ok = true;
  s.for_each([&](Vertex v) { ok = ok && !g.neighbours(v).intersects(s); });
  return ok;
}

inline bool is_independent(const Hypergraph& h, const VertexSet& s) {
  if (s.universe() != h.vertex_count()) throw std::out_of_range("vertex set does not match host");
  for (std::size_t i = 0; i < h.edge_count(); ++i)
    if (h.edge_within(i, s)) return false;
  return true;
}

inline std::size_t degree(const Graph& g, const VertexSet& u, Vertex v) {
  if (!u.contains(v)) throw PreconditionError("vertex " + std::to_string(v) + " not in U");
  return g.degree_in(v, u);
}

inline std::size_t degree(const Hypergraph& h, const VertexSet& u, Vertex v) {
  if (!u.contains(v)) throw PreconditionError("vertex " + std::to_string(v) + " not in U");
  return h.degree_in(v, u);
}

struct EnumerationOptions {
  std::optional<std::size_t> size;  // only sets of exactly this size
  bool variable_distinct = false;   // labels must name pairwise distinct variables
  std::size_t vertex_cap = 30;
};

namespace detail {

// Lexicographic DFS: a set is emitted before its extensions by larger vertices.
// A partial set is extended by v only while it stays independent, which is
// sound because independence is hereditary.
template <typename Host, typename Visit>
bool enumerate_from(const Host& host, VertexSet& current, std::vector<int>& used_vars, Vertex from,
                    const EnumerationOptions& opt, Visit& visit) {
  if (!opt.size || current.size() == *opt.size)
    if (!visit(static_cast<const VertexSet&>(current))) return false;
  if (opt.size && current.size() >= *opt.size) return true;
  const auto n = static_cast<Vertex>(host.vertex_count());
  for (Vertex v = from; v < n; ++v) {
    if (opt.size && current.size() + static_cast<std::size_t>(n - v) < *opt.size) break;
    int var = -1;
    if constexpr (!std::is_same_v<Host, Graph>) {
      if (opt.variable_distinct) {
        var = host.label(v).variable;
        if (used_vars[var]) continue;
      }
    }
    bool blocked = false;
    if constexpr (std::is_same_v<Host, Graph>) {
      blocked = host.neighbours(v).intersects(current);
    } else {
      current.insert(v);
      for (auto i : host.incident(v))
        if (host.edge_within(i, current)) {
          blocked = true;
          break;
        }
      current.erase(v);
    }
    if (blocked) continue;
    current.insert(v);
    if (var >= 0) used_vars[var] = 1;
    bool go_on = enumerate_from(host, current, used_vars, v + 1, opt, visit);
    if (var >= 0) used_vars[var] = 0;
    current.erase(v);
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

/// Streams every independent set of the host that passes the filters, each
/// once, in lexicographic order of sorted member lists. The visitor returns
/// false to stop early.
template <typename Host, typename Visit>
void enumerate_independent_sets(const Host& host, const EnumerationOptions& opt, Visit&& visit) {
  if (host.vertex_count() > opt.vertex_cap)
    throw CapExceeded("independent-set enumeration refused: " + std::to_string(host.vertex_count()) +
                      " vertices exceeds the cap of " + std::to_string(opt.vertex_cap));
  std::vector<int> used_vars;
  if (opt.variable_distinct) {
    if constexpr (std::is_same_v<Host, Graph>) {
      throw PreconditionError("variable-distinct enumeration needs a labelled hypergraph");
    } else {
      if (!host.labelled()) throw PreconditionError("variable-distinct enumeration needs labels");
      int max_var = -1;
      for (const auto& l : *host.labels()) max_var = std::max(max_var, l.variable);
      used_vars.assign(static_cast<std::size_t>(max_var + 1), 0);
    }
  }
  VertexSet current(host.vertex_count());
  detail::enumerate_from(host, current, used_vars, 0, opt, visit);
}

template <typename Host>
std::vector<VertexSet> collect_independent_sets(const Host& host, const EnumerationOptions& opt = {}) {
  std::vector<VertexSet> out;
  enumerate_independent_sets(host, opt, [&](const VertexSet& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace cbench
