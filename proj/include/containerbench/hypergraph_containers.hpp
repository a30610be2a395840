#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "containerbench/combinatorics.hpp"
#include "containerbench/csp.hpp"
#include "containerbench/deg_leq_n.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/guarded.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

/// One step of the inner loop: the (arity)-uniform level hypergraph, the
/// fingerprint vertex taken from it, and the vertices that beat it.
struct LevelRecord {
  std::size_t arity = 0;
  VertexSet vertices;
  std::size_t edge_count = 0;
  Vertex selected = -1;
  std::size_t selected_degree = 0;
  VertexSet excluded;
  bool degenerate = false;  // no vertex of I was left in the level
};

struct IterationRecord {
  std::size_t t = 0;
  Vertex outer = -1;                // first fingerprint vertex of the iteration
  std::size_t outer_value = 0;      // its deg^{<=n} in H[C_{t-1}]
  VertexSet outer_excluded;         // strictly higher deg^{<=n}
  VertexSet outer_witness;          // maximal argmax set D
  std::vector<LevelRecord> levels;  // arity q-1 down to 2
  std::size_t final_level_edges = 0;
  VertexSet one_edge_removed;
  VertexSet fingerprint;
  VertexSet container;
  bool degenerate = false;
  bool truncated = false;  // fewer than q-1 vertices of I were left
};

/// Full output of the hypergraph fingerprint & container generator for one
/// independent set. Past the last iteration F_t = C_t = I.
struct ContainerTrace {
  std::size_t arity = 0;
  std::size_t vertex_count = 0;
  std::size_t size_bound = 0;
  VertexSet independent;
  std::vector<IterationRecord> iterations;

  std::size_t loop_length() const { return iterations.size(); }

  VertexSet fingerprint(std::size_t t) const {
    if (t == 0) return VertexSet(vertex_count);
    if (t > iterations.size()) return independent;
    return iterations[t - 1].fingerprint;
  }

  VertexSet container(std::size_t t) const {
    if (t == 0) return VertexSet::all(vertex_count);
    if (t > iterations.size()) return independent;
    return iterations[t - 1].container;
  }
};

namespace detail {

struct Level {
  std::size_t arity = 0;
  VertexSet vertices;
  std::vector<Edge> edges;

  std::size_t degree(Vertex w) const {
    std::size_t d = 0;
    for (const auto& e : edges)
      for (auto x : e) d += x == w;
    return d;
  }
};

// Smallest-index vertex of `among` maximising score; -1 when `among` is empty.
template <typename Score>
Vertex argmax_vertex(const VertexSet& among, Score&& score) {
  Vertex best = -1;
  std::size_t best_score = 0;
  among.for_each([&](Vertex w) {
    auto s = score(w);
    if (best < 0 || s > best_score) {
      best = w;
      best_score = s;
    }
  });
  return best;
}

}  // namespace detail

/// Runs the hypergraph fingerprint & container generator on independent set I
/// with size bound n. Deterministic: every tie breaks toward the smallest index.
inline ContainerTrace run_generator(const Hypergraph& h, std::size_t n, const VertexSet& independent,
                                    const DegLeqNConfig& cfg = {}) {
  if (independent.universe() != h.vertex_count()) throw std::out_of_range("I does not match host");
  if (n < 1 || n >= h.vertex_count())
    throw PreconditionError("size bound n=" + std::to_string(n) + " must lie in 1.." +
                            std::to_string(h.vertex_count() - 1));
  if (!is_independent(h, independent)) throw PreconditionError("I is not independent");

  const std::size_t q = h.arity();
  ContainerTrace trace{q, h.vertex_count(), n, independent, {}};
  VertexSet container = VertexSet::all(h.vertex_count());
  VertexSet fingerprint(h.vertex_count());

  for (std::size_t t = 1; !independent.is_subset_of(fingerprint); ++t) {
    IterationRecord rec;
    rec.t = t;
    const VertexSet remaining = independent - fingerprint;

    std::vector<std::size_t> value(h.vertex_count(), 0);
    container.for_each([&](Vertex w) { value[w] = deg_leq_n_value(h, container, n, w, cfg); });
    rec.outer = detail::argmax_vertex(remaining, [&](Vertex w) { return value[w]; });
    rec.outer_value = value[rec.outer];
    rec.outer_excluded = VertexSet(h.vertex_count());
    container.for_each([&](Vertex w) {
      if (value[w] > rec.outer_value) rec.outer_excluded.insert(w);
    });

    rec.outer_witness = deg_leq_n(h, container, n, rec.outer, cfg).witness;
    detail::Level level{q - 1, rec.outer_witness, {}};
    level.vertices.erase(rec.outer);
    for (auto i : h.incident(rec.outer)) {
      if (!h.edge_within(i, rec.outer_witness)) continue;
      Edge e;
      for (auto w : h.edge(i))
        if (w != rec.outer) e.push_back(w);
      level.edges.push_back(std::move(e));
    }

    VertexSet selected(h.vertex_count());
    selected.insert(rec.outer);
    const std::size_t to_select = std::min(q - 1, remaining.size());
    VertexSet removed = rec.outer_excluded;

    while (selected.size() < to_select) {
      LevelRecord lr;
      lr.arity = level.arity;
      lr.vertices = level.vertices;
      lr.edge_count = level.edges.size();
      lr.excluded = VertexSet(h.vertex_count());
      const VertexSet candidates = (remaining - selected) & level.vertices;
      detail::Level next{level.arity - 1, level.vertices, {}};
      if (!candidates.empty()) {
        lr.selected = detail::argmax_vertex(candidates, [&](Vertex w) { return level.degree(w); });
        lr.selected_degree = level.degree(lr.selected);
        level.vertices.for_each([&](Vertex w) {
          if (level.degree(w) > lr.selected_degree) lr.excluded.insert(w);
        });
        next.vertices.erase(lr.selected);
        for (const auto& e : level.edges) {
          if (std::find(e.begin(), e.end(), lr.selected) == e.end()) continue;
          Edge shorter;
          for (auto w : e)
            if (w != lr.selected) shorter.push_back(w);
          next.edges.push_back(std::move(shorter));
        }
      } else {
        lr.degenerate = true;
        rec.degenerate = true;
        lr.selected = (remaining - selected).first();
        lr.selected_degree = 0;
        level.vertices.for_each([&](Vertex w) {
          if (level.degree(w) > 0) lr.excluded.insert(w);
        });
      }
      selected.insert(lr.selected);
      removed |= lr.excluded;
      rec.levels.push_back(std::move(lr));
      level = std::move(next);
    }

    rec.truncated = to_select < q - 1;
    rec.final_level_edges = level.edges.size();
    rec.one_edge_removed = VertexSet(h.vertex_count());
    if (!rec.truncated && level.arity == 1)
      for (const auto& e : level.edges)
        if (container.contains(e.front())) rec.one_edge_removed.insert(e.front());
    removed |= rec.one_edge_removed;
    removed |= selected;

    fingerprint |= selected;
    container -= removed;
    rec.fingerprint = fingerprint;
    rec.container = container;
    trace.iterations.push_back(std::move(rec));
  }
  return trace;
}

/// Invariant check over a trace: nesting of F and C, F_t inside I, the rest
/// of I inside C_t, and distinct I-vertices selected per iteration.
inline std::optional<std::string> check_trace_invariants(const ContainerTrace& trace) {
  const auto& i_set = trace.independent;
  for (std::size_t t = 1; t <= trace.loop_length(); ++t) {
    auto f_prev = trace.fingerprint(t - 1), f = trace.fingerprint(t);
    auto c_prev = trace.container(t - 1), c = trace.container(t);
    if (!f_prev.is_subset_of(f)) return "F_" + std::to_string(t - 1) + " not inside F_" + std::to_string(t);
    if (!c.is_subset_of(c_prev)) return "C_" + std::to_string(t) + " not inside C_" + std::to_string(t - 1);
    if (!f.is_subset_of(i_set)) return "F_" + std::to_string(t) + " not inside I";
    if (!(i_set - f).is_subset_of(c)) return "I \\ F_" + std::to_string(t) + " not inside C_" + std::to_string(t);
    const auto& rec = trace.iterations[t - 1];
    VertexSet picked(trace.vertex_count);
    picked.insert(rec.outer);
    for (const auto& lr : rec.levels) {
      if (picked.contains(lr.selected)) return "vertex selected twice in iteration " + std::to_string(t);
      picked.insert(lr.selected);
    }
    if (!picked.is_subset_of(i_set)) return "selected vertex outside I in iteration " + std::to_string(t);
  }
  return std::nullopt;
}

struct ClosureResult {
  bool holds = true;
  std::optional<std::size_t> first_mismatch;
};

/// C_t(F_t(I)) == C_t(I) for every t up to one past the loop.
inline ClosureResult check_closure(const Hypergraph& h, std::size_t n, const VertexSet& independent,
                                   const DegLeqNConfig& cfg = {}) {
  auto trace = run_generator(h, n, independent, cfg);
  for (std::size_t t = 1; t <= trace.loop_length() + 1; ++t) {
    auto sub = run_generator(h, n, trace.fingerprint(t), cfg);
    if (sub.container(t) != trace.container(t)) return {false, t};
  }
  return {};
}

struct EdgesBoundResult {
  std::size_t heavy_count = 0;
  Rational degree_threshold;  // (l-1)|E|/|V|
  Rational lower_bound;       // |E| / C(|V|-1, l-1)
  bool pass = false;
};

/// Counts vertices of degree strictly above (l-1)|E|/|V| and compares with
/// |E|/C(|V|-1, l-1), all in exact arithmetic.
inline EdgesBoundResult check_edges_bound(const Hypergraph& h) {
  const auto l = static_cast<std::int64_t>(h.arity());
  const auto m = static_cast<std::int64_t>(h.edge_count());
  const auto nv = static_cast<std::int64_t>(h.vertex_count());
  if (l < 2) throw PreconditionError("edges bound needs arity >= 2");
  if (m < 1) throw PreconditionError("edges bound needs at least one edge");
  EdgesBoundResult r;
  r.degree_threshold = Rational((l - 1) * m, nv);
  r.lower_bound = Rational(m, binomial(nv - 1, l - 1));
  for (Vertex v = 0; v < static_cast<Vertex>(nv); ++v)
    if (Rational(static_cast<std::int64_t>(h.incident(v).size())) > r.degree_threshold) ++r.heavy_count;
  r.pass = Rational(static_cast<std::int64_t>(r.heavy_count)) >= r.lower_bound;
  return r;
}

struct ContainerDegreeStep {
  std::size_t t = 0;
  std::size_t max_degree = 0;
  Rational bound;        // (2kq/t) C(n-1,q-1)
  Rational tight_bound;  // (2k(q-1)/t) C(n-1,q-1)
};

struct ContainerDegreeResult {
  bool pass = true;
  bool tight_pass = true;
  std::optional<Rational> worst_slack;        // min over t of bound - max degree
  std::optional<Rational> worst_tight_slack;  // same for the 2k(q-1)/t constant
  std::vector<ContainerDegreeStep> steps;
};

/// For every t <= |I|/(q-1): the largest deg^{<=n} inside C_t stays within
/// (2kq/t) C(n-1,q-1). Also records the 2k(q-1)/t variant.
inline ContainerDegreeResult check_container_degree(const Hypergraph& h, const ContainerTrace& trace, std::size_t k,
                                                    std::size_t n, const DegLeqNConfig& cfg = {}) {
  if (h.vertex_count() != k * n)
    throw PreconditionError("container degree check needs |V| = k*n");
  const auto q = static_cast<std::int64_t>(trace.arity);
  const auto base = binomial(static_cast<std::int64_t>(n) - 1, q - 1);
  ContainerDegreeResult r;
  const Rational last(static_cast<std::int64_t>(trace.independent.size()), q - 1);
  for (std::size_t t = 1; Rational(static_cast<std::int64_t>(t)) <= last; ++t) {
    ContainerDegreeStep step;
    step.t = t;
    auto c = trace.container(t);
    c.for_each([&](Vertex v) { step.max_degree = std::max(step.max_degree, deg_leq_n_value(h, c, n, v, cfg)); });
    const auto ti = static_cast<std::int64_t>(t);
    const auto kk = static_cast<std::int64_t>(k);
    step.bound = Rational(2 * kk * q * base, ti);
    step.tight_bound = Rational(2 * kk * (q - 1) * base, ti);
    const Rational observed(static_cast<std::int64_t>(step.max_degree));
    auto slack = step.bound - observed;
    auto tight_slack = step.tight_bound - observed;
    if (!r.worst_slack || slack < *r.worst_slack) r.worst_slack = slack;
    if (!r.worst_tight_slack || tight_slack < *r.worst_tight_slack) r.worst_tight_slack = tight_slack;
    r.pass = r.pass && slack >= 0;
    r.tight_pass = r.tight_pass && tight_slack >= 0;
    r.steps.push_back(step);
  }
  return r;
}

struct GclSatResult {
  bool witness_found = false;
  std::size_t t = 0;           // smallest qualifying t when found
  std::size_t vars_at_t = 0;
  double bound_at_t = 0.0;     // (1 - eps t / (4 k q^2 ln(kq/eps))) n, for reporting
  std::size_t t_max = 0;       // floor(8kq/eps)
  std::size_t min_vars = 0;    // over the scanned range, for counterexample records
};

/// Searches t = 1..floor(8kq/eps) for a container whose label variables fit
/// under (1 - eps t / (4 k q^2 ln(kq/eps))) n. `certificate` must show that phi
/// is eps-far; I must be a variable-distinct independent set of H_phi.
inline GclSatResult verify_gcl_sat(const Csp& phi, const Hypergraph& hphi, const Rational& epsilon,
                                   const VertexSet& independent, const SatDistance& certificate,
                                   const DegLeqNConfig& cfg = {}) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  if (!is_far_from_sat(certificate, phi, epsilon))
    throw PreconditionError("instance is not certified " + to_string(epsilon) + "-far from satisfiable");
  if (vars(hphi, independent) != independent.size())
    throw PreconditionError("I repeats a variable");
  const auto n = phi.variable_count();
  const auto k = static_cast<std::int64_t>(phi.alphabet_size());
  const auto q = static_cast<std::int64_t>(phi.arity());
  auto trace = run_generator(hphi, n, independent, cfg);

  GclSatResult r;
  r.t_max = static_cast<std::size_t>(floor(Rational(8 * k * q) / epsilon));
  r.min_vars = n;
  const Rational kq_over_eps = Rational(k * q) / epsilon;
  for (std::size_t t = 1; t <= r.t_max; ++t) {
    auto c = trace.container(t);
    auto count = vars(hphi, c);
    r.min_vars = std::min(r.min_vars, count);
    auto rhs = [&](auto z) {
      using std::log;
      using T = decltype(z);
      return (T(1) - as<T>(epsilon) * T(static_cast<double>(t)) /
                         (T(static_cast<double>(4 * k * q * q)) * log(as<T>(kq_over_eps)))) *
             T(static_cast<double>(n));
    };
    if (guarded_leq([&](auto z) { return decltype(z)(static_cast<double>(count)); }, rhs)) {
      r.witness_found = true;
      r.t = t;
      r.vars_at_t = count;
      r.bound_at_t = rhs(double{});
      return r;
    }
    // Past the loop the container is frozen at I; the bound only decreases.
    if (t > trace.loop_length()) break;
  }
  return r;
}

}  // namespace cbench
