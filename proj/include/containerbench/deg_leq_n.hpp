#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

struct DegLeqNConfig {
  std::size_t relevant_cap = 24;  // at most 64
};

/// Maximum degree of v over induced subhypergraphs H[D], D a subset of C with
/// |D| <= n and v in D, plus the maximal set D realising it.
struct DegLeqNResult {
  std::size_t value = 0;
  VertexSet witness;
  std::size_t relevant = 0;  // vertices sharing an edge of H[C] with v
};

namespace detail {

// The search only ever looks at the co-vertices of edges through v; every
// other vertex of C leaves the degree of v unchanged.
class CoVertexProblem {
 public:
  CoVertexProblem(const Hypergraph& h, const VertexSet& c, Vertex v, std::size_t cap) {
    std::vector<int> local(h.vertex_count(), -1);
    for (auto i : h.incident(v)) {
      if (!h.edge_within(i, c)) continue;
      for (auto w : h.edge(i))
        if (w != v && local[w] < 0) {
          local[w] = 0;
          vertices.push_back(w);
        }
    }
    std::sort(vertices.begin(), vertices.end());
    if (vertices.size() > cap || vertices.size() > 64)
      throw CapExceeded("deg<=n search over " + std::to_string(vertices.size()) +
                        " relevant vertices exceeds the cap of " + std::to_string(std::min<std::size_t>(cap, 64)));
    for (std::size_t j = 0; j < vertices.size(); ++j) local[vertices[j]] = static_cast<int>(j);
    for (auto i : h.incident(v)) {
      if (!h.edge_within(i, c)) continue;
      std::uint64_t mask = 0;
      for (auto w : h.edge(i))
        if (w != v) mask |= std::uint64_t{1} << local[w];
      masks.push_back(mask);
    }
  }

  std::size_t covered(std::uint64_t chosen) const {
    std::size_t d = 0;
    for (auto m : masks) d += (m & ~chosen) == 0;
    return d;
  }

  // Upper bound on the degree reachable from `chosen` when only positions
  // >= pos are still open and at most `slots` more vertices may be added.
  std::size_t bound(std::uint64_t chosen, std::size_t pos, std::size_t slots) const {
    const std::uint64_t open = pos >= 64 ? 0 : (~std::uint64_t{0} << pos);
    std::size_t b = 0;
    for (auto m : masks) {
      auto missing = m & ~chosen;
      if (missing == 0) ++b;
      else if ((missing & ~open) == 0 && static_cast<std::size_t>(std::popcount(missing)) <= slots) ++b;
    }
    return b;
  }

  bool tight(std::uint64_t chosen) const {
    std::uint64_t used = 0;
    for (auto m : masks)
      if ((m & ~chosen) == 0) used |= m;
    return used == chosen;
  }

  std::vector<Vertex> vertices;
  std::vector<std::uint64_t> masks;
};

inline void best_value(const CoVertexProblem& p, std::uint64_t chosen, std::size_t pos, std::size_t slots,
                       std::size_t& best) {
  auto here = p.covered(chosen);
  if (here > best) best = here;
  if (best == p.masks.size() || pos == p.vertices.size()) return;
  if (p.bound(chosen, pos, slots) <= best) return;
  if (slots > 0) best_value(p, chosen | (std::uint64_t{1} << pos), pos + 1, slots - 1, best);
  best_value(p, chosen, pos + 1, slots, best);
}

// Include-first DFS. Optimal tight sets form an antichain, so the first one
// reached is the lexicographically smallest.
inline bool first_tight_optimum(const CoVertexProblem& p, std::uint64_t chosen, std::size_t pos, std::size_t slots,
                                std::size_t target, std::uint64_t& out) {
  if (p.bound(chosen, pos, slots) < target) return false;
  if (pos == p.vertices.size()) {
    if (p.covered(chosen) == target && p.tight(chosen)) {
      out = chosen;
      return true;
    }
    return false;
  }
  if (slots > 0 && first_tight_optimum(p, chosen | (std::uint64_t{1} << pos), pos + 1, slots - 1, target, out))
    return true;
  return first_tight_optimum(p, chosen, pos + 1, slots, target, out);
}

inline void check_deg_leq_n_args(const Hypergraph& h, const VertexSet& c, std::size_t n, Vertex v) {
  if (c.universe() != h.vertex_count()) throw std::out_of_range("container does not match host");
  if (!c.contains(v)) throw PreconditionError("vertex " + std::to_string(v) + " is not in C");
  if (n < 1) throw PreconditionError("size bound n must be at least 1");
}

}  // namespace detail

/// Exact value only (no witness); used where every vertex of a container is scored.
inline std::size_t deg_leq_n_value(const Hypergraph& h, const VertexSet& c, std::size_t n, Vertex v,
                                   const DegLeqNConfig& cfg = {}) {
  detail::check_deg_leq_n_args(h, c, n, v);
  detail::CoVertexProblem p(h, c, v, cfg.relevant_cap);
  std::size_t best = 0;
  detail::best_value(p, 0, 0, n - 1, best);
  return best;
}

/// Exact deg^{<=n}_{H[C]}(v) by branch-and-bound over the co-vertices of v.
/// The witness is the lexicographically smallest optimal support (v plus the
/// co-vertices of the counted edges), padded with the smallest-index vertices
/// of C up to size min(n, |C|).
inline DegLeqNResult deg_leq_n(const Hypergraph& h, const VertexSet& c, std::size_t n, Vertex v,
                               const DegLeqNConfig& cfg = {}) {
  detail::check_deg_leq_n_args(h, c, n, v);
  detail::CoVertexProblem p(h, c, v, cfg.relevant_cap);
  std::size_t best = 0;
  detail::best_value(p, 0, 0, n - 1, best);
  std::uint64_t support = 0;
  detail::first_tight_optimum(p, 0, 0, n - 1, best, support);

  VertexSet witness(h.vertex_count());
  witness.insert(v);
  for (std::size_t j = 0; j < p.vertices.size(); ++j)
    if (support >> j & 1) witness.insert(p.vertices[j]);
  const auto target = std::min(n, c.size());
  for (Vertex w = c.first(); w >= 0 && witness.size() < target; w = c.next(w)) witness.insert(w);
  return {best, std::move(witness), p.vertices.size()};
}

/// Greedy lower bound on deg^{<=n}: repeatedly adds the co-vertex that
/// completes the most edges. Not exact; never used by the verifiers.
inline std::size_t deg_leq_n_greedy(const Hypergraph& h, const VertexSet& c, std::size_t n, Vertex v) {
  detail::check_deg_leq_n_args(h, c, n, v);
  detail::CoVertexProblem p(h, c, v, 64);
  std::uint64_t chosen = 0;
  for (std::size_t added = 0; added + 1 < n && added < p.vertices.size(); ++added) {
    std::size_t best_gain = 0, best_partial = 0;
    int pick = -1;
    for (std::size_t j = 0; j < p.vertices.size(); ++j) {
      if (chosen >> j & 1) continue;
      auto next = chosen | (std::uint64_t{1} << j);
      auto gain = p.covered(next);
      std::size_t partial = 0;
      for (auto m : p.masks) partial += (m >> j & 1) != 0;
      if (pick < 0 || gain > best_gain || (gain == best_gain && partial > best_partial)) {
        pick = static_cast<int>(j);
        best_gain = gain;
        best_partial = partial;
      }
    }
    if (pick < 0) break;
    chosen |= std::uint64_t{1} << pick;
  }
  return p.covered(chosen);
}

}  // namespace cbench
