#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "containerbench/combinatorics.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/guarded.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

struct StarCheck {
  bool ok = true;
  std::string diagnostic;
};

/// (I, J) is an independent set star: I independent, J disjoint from I, and
/// no edge between I and J.
inline StarCheck is_star(const Graph& g, const VertexSet& core, const VertexSet& outer) {
  if (core.intersects(outer)) return {false, "core and outer set overlap"};
  if (!is_independent(g, core)) return {false, "core is not independent"};
  StarCheck r;
  core.for_each([&](Vertex i) {
    if (r.ok && g.neighbours(i).intersects(outer)) r = {false, "core vertex " + std::to_string(i) + " has a neighbour in J"};
  });
  return r;
}

struct StarIterationRecord {
  std::size_t t = 0;
  Vertex u = -1;  // max degree in G[C_{t-1}]
  Vertex v = -1;  // max degree in G[D_{t-1}]; -1 on the last step of an odd |I|
  VertexSet fingerprint;
  VertexSet inner;
  VertexSet outer;
};

/// Output of the independent-set-star generator. Past the loop F_t = C_t = I
/// and D_t stays at the last outer container.
struct StarContainerTrace {
  std::size_t vertex_count = 0;
  VertexSet independent;
  std::vector<StarIterationRecord> iterations;

  std::size_t loop_length() const { return iterations.size(); }

  VertexSet fingerprint(std::size_t t) const {
    if (t == 0) return VertexSet(vertex_count);
    if (t > iterations.size()) return independent;
    return iterations[t - 1].fingerprint;
  }
  VertexSet inner(std::size_t t) const {
    if (t == 0) return VertexSet::all(vertex_count);
    if (t > iterations.size()) return independent;
    return iterations[t - 1].inner;
  }
  VertexSet outer(std::size_t t) const {
    if (iterations.empty() || t == 0) return VertexSet::all(vertex_count);
    return iterations[std::min(t, iterations.size()) - 1].outer;
  }
};

/// Runs the fingerprint & inner/outer container generator for stars with
/// core I. Ties break toward the smallest index.
inline StarContainerTrace run_star_generator(const Graph& g, const VertexSet& independent) {
  if (independent.universe() != g.vertex_count()) throw std::out_of_range("I does not match host");
  if (!is_independent(g, independent)) throw PreconditionError("I is not independent");
  const auto n = g.vertex_count();
  StarContainerTrace trace{n, independent, {}};
  VertexSet inner = VertexSet::all(n), outer = VertexSet::all(n), fingerprint(n);

  auto argmax = [](const VertexSet& among, auto&& score) {
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
  };

  for (std::size_t t = 1; !independent.is_subset_of(fingerprint); ++t) {
    StarIterationRecord rec;
    rec.t = t;
    const VertexSet remaining = independent - fingerprint;
    rec.u = argmax(remaining, [&](Vertex w) { return g.degree_in(w, inner); });
    VertexSet rest = remaining;
    rest.erase(rec.u);
    if (!rest.empty()) rec.v = argmax(rest, [&](Vertex w) { return g.degree_in(w, outer); });

    VertexSet near = g.neighbours(rec.u);
    if (rec.v >= 0) near |= g.neighbours(rec.v);

    const auto u_degree = g.degree_in(rec.u, inner);
    const auto v_degree = rec.v >= 0 ? g.degree_in(rec.v, outer) : 0;
    VertexSet beaten(n);
    inner.for_each([&](Vertex w) {
      if (w == rec.u || w == rec.v) return;
      if (g.degree_in(w, inner) > u_degree || (rec.v >= 0 && g.degree_in(w, outer) > v_degree)) beaten.insert(w);
    });

    inner -= near;
    inner -= beaten;
    outer -= near;
    fingerprint.insert(rec.u);
    if (rec.v >= 0) fingerprint.insert(rec.v);
    rec.fingerprint = fingerprint;
    rec.inner = inner;
    rec.outer = outer;
    trace.iterations.push_back(std::move(rec));
  }
  return trace;
}

/// Nesting of F, C and D; C_t inside D_t; F_t inside I inside C_t during the
/// loop; vertices with no neighbour in I survive in every D_t.
inline std::optional<std::string> check_star_invariants(const Graph& g, const StarContainerTrace& trace) {
  const auto& core = trace.independent;
  VertexSet free_of_core(trace.vertex_count);
  for (Vertex w = 0; w < static_cast<Vertex>(trace.vertex_count); ++w)
    if (!g.neighbours(w).intersects(core)) free_of_core.insert(w);
  const auto last = trace.loop_length() + 1;
  for (std::size_t t = 0; t <= last; ++t) {
    const auto ts = std::to_string(t);
    auto f = trace.fingerprint(t), c = trace.inner(t), d = trace.outer(t);
    if (!c.is_subset_of(d)) return "C_" + ts + " not inside D_" + ts;
    if (!free_of_core.is_subset_of(d)) return "a vertex with no neighbour in I left D_" + ts;
    if (!f.is_subset_of(core)) return "F_" + ts + " not inside I";
    if (t <= trace.loop_length() && !core.is_subset_of(c)) return "I not inside C_" + ts;
    if (t > 0) {
      if (!trace.fingerprint(t - 1).is_subset_of(f)) return "F not nested at " + ts;
      if (!c.is_subset_of(trace.inner(t - 1))) return "C not nested at " + ts;
      if (!d.is_subset_of(trace.outer(t - 1))) return "D not nested at " + ts;
    }
  }
  return std::nullopt;
}

struct StarClosureResult {
  bool holds = true;
  std::optional<std::size_t> first_mismatch;
};

/// C_t(F_t(I)) == C_t(I) and D_t(F_t(I)) == D_t(I) for t up to one past the loop.
inline StarClosureResult check_star_closure(const Graph& g, const VertexSet& independent) {
  auto trace = run_star_generator(g, independent);
  for (std::size_t t = 1; t <= trace.loop_length() + 1; ++t) {
    auto sub = run_star_generator(g, trace.fingerprint(t));
    if (sub.inner(t) != trace.inner(t) || sub.outer(t) != trace.outer(t)) return {false, t};
  }
  return {};
}

struct IndepSetOracleConfig {
  std::uint64_t subset_cap = std::uint64_t{1} << 26;
};

struct RhoDistance {
  std::size_t target_size = 0;  // ceil(rho n)
  std::size_t min_edits = 0;
  Rational distance;            // min_edits / n^2
  VertexSet argmin;             // lexicographically smallest minimiser
};

/// Minimum number of edges inside a ceil(rho n)-vertex set. Deleting exactly
/// those edges is the cheapest way to create the independent set, so this is
/// the exact edit distance to the rho-IndepSet property.
inline RhoDistance distance_to_rho_is(const Graph& g, const Rational& rho, const IndepSetOracleConfig& cfg = {}) {
  if (rho <= 0 || rho > 1) throw PreconditionError("rho must lie in (0, 1]");
  const auto n = g.vertex_count();
  const auto m = static_cast<std::size_t>(ceil(rho * static_cast<std::int64_t>(n)));
  const auto subsets = binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(m));
  if (static_cast<std::uint64_t>(subsets) > cfg.subset_cap)
    throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(m) + ") = " + std::to_string(subsets) +
                      " exceeds the subset cap of " + std::to_string(cfg.subset_cap));
  RhoDistance r;
  r.target_size = m;
  std::size_t best = static_cast<std::size_t>(-1);
  VertexSet current(n), best_set(n);
  // Include-first DFS visits m-subsets in lexicographic order; strict
  // improvement keeps the first minimiser.
  auto dfs = [&](auto&& self, Vertex from, std::size_t edges) -> void {
    if (edges >= best) return;
    if (current.size() == m) {
      best = edges;
      best_set = current;
      return;
    }
    for (Vertex v = from; v < static_cast<Vertex>(n); ++v) {
      if (current.size() + (n - static_cast<std::size_t>(v)) < m) return;
      auto added = g.degree_in(v, current);
      current.insert(v);
      self(self, v + 1, edges + added);
      current.erase(v);
      if (best == 0) return;
    }
  };
  dfs(dfs, 0, 0);
  r.min_edits = best;
  r.argmin = best_set;
  r.distance = n == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(best), static_cast<std::int64_t>(n * n));
  return r;
}

/// G is eps-far from rho-IndepSet iff minEdits >= eps n^2.
inline bool is_far_from_rho_is(const RhoDistance& d, std::size_t n, const Rational& epsilon) {
  return Rational(static_cast<std::int64_t>(d.min_edits)) >= epsilon * static_cast<std::int64_t>(n * n);
}

struct ShrinkingCheck {
  bool premises_hold = false;
  bool conclusion_holds = true;
  std::string failed_premise;  // first premise that failed, if any
  bool size_near_miss = false; // |D| within one of ceil((rho - alpha) n)
};

/// Outer-container shrinking check at step t with candidate dense-free set D:
/// when every premise holds, |D_{t+1} \ D| <= (1 - eps/(4 rho alpha)) |D_t \ D|.
inline ShrinkingCheck check_shrinking(const Graph& g, const Rational& rho, const Rational& epsilon,
                                      const RhoDistance& certificate, const StarContainerTrace& trace, std::size_t t,
                                      const VertexSet& dense_free, const Rational& alpha) {
  const auto n = static_cast<std::int64_t>(g.vertex_count());
  if (!is_far_from_rho_is(certificate, g.vertex_count(), epsilon))
    throw PreconditionError("graph is not certified " + to_string(epsilon) + "-far from rho-IndepSet");
  if (2 * static_cast<std::int64_t>(t) >= static_cast<std::int64_t>(trace.independent.size()))
    throw PreconditionError("shrinking check needs t < |I|/2");

  ShrinkingCheck r;
  auto fail = [&](std::string why) {
    r.premises_hold = false;
    r.failed_premise = std::move(why);
    return r;
  };
  const auto d_t = trace.outer(t), d_next = trace.outer(t + 1), c_next = trace.inner(t + 1);
  const auto target = ceil((rho - alpha) * n);
  const auto size = static_cast<std::int64_t>(dense_free.size());
  r.size_near_miss = size != target && (size == target - 1 || size == target + 1);

  if (Rational(static_cast<std::int64_t>(d_t.size())) < rho * n) return fail("|D_t| >= rho n");
  if (alpha <= 0 || 4 * alpha * alpha > epsilon) return fail("0 < alpha <= sqrt(eps)/2");
  if (!dense_free.is_subset_of(d_next)) return fail("D inside D_{t+1}");
  if (size != target) return fail("|D| = (rho - alpha) n");
  if (Rational(static_cast<std::int64_t>(g.edges_within(dense_free))) > Rational(3, 8) * epsilon * (n * n))
    return fail("e(G[D]) <= 3/8 eps n^2");
  const auto meet = static_cast<double>((dense_free & c_next).size());
  const bool enough = guarded_leq(
      [&](auto z) {
        using std::sqrt;
        using T = decltype(z);
        return (as<T>(rho) - sqrt(as<T>(epsilon)) / T(2)) * T(static_cast<double>(n));
      },
      [&](auto z) { return decltype(z)(meet); });
  if (!enough) return fail("|D cap C_{t+1}| >= (rho - sqrt(eps)/2) n");

  r.premises_hold = true;
  const auto lhs = Rational(static_cast<std::int64_t>((d_next - dense_free).size()));
  const auto rhs = (Rational(1) - epsilon / (4 * rho * alpha)) * static_cast<std::int64_t>((d_t - dense_free).size());
  r.conclusion_holds = lhs <= rhs;
  return r;
}

enum class StarBranch { none, inner, outer };

struct GclStarResult {
  bool witness_found = false;
  std::size_t t = 0;
  StarBranch branch = StarBranch::none;
  std::size_t t_max = 0;          // floor((8 rho^2 / eps) ln(2 rho / eps))
  double outer_threshold = 0.0;   // 4 rho ln(2 rho / eps) / sqrt(eps)
  bool inner_lemma_holds = false; // |C_t| bound together with e(G[C_t]) <= eps n^2 / 4
  std::size_t inner_lemma_t = 0;
};

inline const char* to_string(StarBranch b) {
  switch (b) {
    case StarBranch::inner: return "inner";
    case StarBranch::outer: return "outer";
    default: return "none";
  }
}

/// Searches t = 1..t_max for either |C_t| small with t past the outer
/// threshold, or |D_t| small before it; also evaluates the inner-container
/// bound paired with the edge condition on G[C_t].
inline GclStarResult verify_gcl_star(const Graph& g, const Rational& rho, const Rational& epsilon,
                                     const VertexSet& independent, const RhoDistance& certificate) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  if (!is_far_from_rho_is(certificate, g.vertex_count(), epsilon))
    throw PreconditionError("graph is not certified " + to_string(epsilon) + "-far from rho-IndepSet");
  const auto n = static_cast<double>(g.vertex_count());
  const auto trace = run_star_generator(g, independent);
  const Rational two_rho_over_eps = 2 * rho / epsilon;

  auto ln_ratio = [&](auto z) {
    using std::log;
    using T = decltype(z);
    return log(as<T>(two_rho_over_eps));
  };
  GclStarResult r;
  const auto t_max_raw = guarded_floor([&](auto z) {
    using T = decltype(z);
    return T(8) * as<T>(rho) * as<T>(rho) / as<T>(epsilon) * ln_ratio(z);
  });
  r.t_max = t_max_raw > 0 ? static_cast<std::size_t>(t_max_raw) : 0;
  auto threshold = [&](auto z) {
    using std::sqrt;
    using T = decltype(z);
    return T(4) * as<T>(rho) * ln_ratio(z) / sqrt(as<T>(epsilon));
  };
  r.outer_threshold = threshold(double{});
  const Rational edge_cap = epsilon * static_cast<std::int64_t>(g.vertex_count() * g.vertex_count()) / 4;

  for (std::size_t t = 1; t <= r.t_max; ++t) {
    const double td = static_cast<double>(t);
    auto bound = [&](auto z) {
      using T = decltype(z);
      return (as<T>(rho) - T(td) * as<T>(epsilon) / (T(8) * as<T>(rho) * ln_ratio(z))) * T(n);
    };
    const auto c = trace.inner(t);
    const double c_size = static_cast<double>(c.size());
    const double d_size = static_cast<double>(trace.outer(t).size());
    const bool c_small = guarded_leq([&](auto z) { return decltype(z)(c_size); }, bound);
    if (!r.inner_lemma_holds && c_small &&
        Rational(static_cast<std::int64_t>(g.edges_within(c))) <= edge_cap) {
      r.inner_lemma_holds = true;
      r.inner_lemma_t = t;
    }
    if (!r.witness_found) {
      const bool past = guarded_leq(threshold, [&](auto z) { return decltype(z)(td); });
      if (past && c_small) {
        r.witness_found = true;
        r.t = t;
        r.branch = StarBranch::inner;
      } else if (!past && guarded_leq([&](auto z) { return decltype(z)(d_size); }, bound)) {
        r.witness_found = true;
        r.t = t;
        r.branch = StarBranch::outer;
      }
    }
    if (r.witness_found && r.inner_lemma_holds) break;
    // Past the loop both containers are frozen and every bound only shrinks.
    if (t > trace.loop_length() && td >= r.outer_threshold + 1) break;
  }
  return r;
}

}  // namespace cbench
