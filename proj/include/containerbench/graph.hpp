#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "containerbench/errors.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

using Edge = std::vector<Vertex>;

/// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges)
      : n_(n), adjacency_(n, VertexSet(n)) {
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
        throw PreconditionError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                ") has an endpoint outside 0.." + std::to_string(n) + "-1");
      if (u == v) throw PreconditionError("self-loop at vertex " + std::to_string(u));
      if (adjacency_[u].contains(v))
        throw PreconditionError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
      adjacency_[u].insert(v);
      adjacency_[v].insert(u);
    }
    for (Vertex u = 0; u < static_cast<Vertex>(n_); ++u)
      adjacency_[u].for_each([&](Vertex v) {
        if (u < v) edges_.emplace_back(u, v);
      });
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

  bool adjacent(Vertex u, Vertex v) const { return adjacency_.at(u).contains(v); }
  const VertexSet& neighbours(Vertex v) const { return adjacency_.at(v); }

  /// Degree of v inside G[within].
  std::size_t degree_in(Vertex v, const VertexSet& within) const {
    return (adjacency_.at(v) & within).size();
  }

  /// Number of edges of G[within].
  std::size_t edges_within(const VertexSet& within) const {
    std::size_t twice = 0;
    within.for_each([&](Vertex v) { twice += degree_in(v, within); });
    return twice / 2;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<VertexSet> adjacency_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
};

/// (variable, value) label carried by a vertex of a CSP hypergraph.
struct Label {
  int variable = 0;
  int value = 0;
  friend bool operator==(const Label&, const Label&) = default;
};

/// q-uniform hypergraph, optionally labelled. Edges are stored sorted, in
/// lexicographic order. Immutable after construction.
class Hypergraph {
 public:
  Hypergraph() = default;

  Hypergraph(std::size_t q, std::size_t n, std::vector<Edge> edges,
             std::optional<std::vector<Label>> labels = std::nullopt)
      : q_(q), n_(n), labels_(std::move(labels)), incident_(n) {
    if (q_ < 1) throw PreconditionError("hyperedge arity must be positive");
    if (labels_ && labels_->size() != n_)
      throw PreconditionError("label count " + std::to_string(labels_->size()) +
                              " does not match vertex count " + std::to_string(n_));
    std::set<Edge> seen;
    for (auto& e : edges) {
      std::sort(e.begin(), e.end());
      if (e.size() != q_)
        throw PreconditionError("edge of size " + std::to_string(e.size()) + " in a " +
                                std::to_string(q_) + "-uniform hypergraph");
      if (std::adjacent_find(e.begin(), e.end()) != e.end())
        throw PreconditionError("edge with a repeated vertex");
      if (e.front() < 0 || static_cast<std::size_t>(e.back()) >= n_)
        throw PreconditionError("edge endpoint outside 0.." + std::to_string(n_) + "-1");
      if (labels_) {
        for (std::size_t i = 0; i < e.size(); ++i)
          for (std::size_t j = i + 1; j < e.size(); ++j)
            if ((*labels_)[e[i]].variable == (*labels_)[e[j]].variable)
              throw PreconditionError("edge joins two labels of variable " +
                                      std::to_string((*labels_)[e[i]].variable));
      }
      if (!seen.insert(e).second) throw PreconditionError("duplicate hyperedge");
    }
    edges_.assign(seen.begin(), seen.end());
    for (std::size_t i = 0; i < edges_.size(); ++i)
      for (auto v : edges_[i]) incident_[v].push_back(i);
  }

  std::size_t arity() const { return q_; }
  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<std::size_t>& incident(Vertex v) const { return incident_.at(v); }

  bool labelled() const { return labels_.has_value(); }
  const std::optional<std::vector<Label>>& labels() const { return labels_; }
  const Label& label(Vertex v) const {
    if (!labels_) throw PreconditionError("hypergraph is unlabelled");
    return labels_->at(v);
  }

  bool edge_within(std::size_t i, const VertexSet& within) const {
    for (auto v : edges_[i])
      if (!within.contains(v)) return false;
    return true;
  }

  /// Number of edges of H[within] containing v.
  std::size_t degree_in(Vertex v, const VertexSet& within) const {
    std::size_t d = 0;
    for (auto i : incident_.at(v)) d += edge_within(i, within);
    return d;
  }

  std::size_t edges_within(const VertexSet& within) const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) m += edge_within(i, within);
    return m;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.q_ == b.q_ && a.n_ == b.n_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  std::size_t q_ = 2;
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<Label>> labels_;
  std::vector<std::vector<std::size_t>> incident_;
};

inline Hypergraph as_hypergraph(const Graph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return Hypergraph(2, g.vertex_count(), std::move(edges));
}

}  // namespace cbench
