#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "containerbench/combinatorics.hpp"
#include "containerbench/csp.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/io.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/rng.hpp"
#include "containerbench/star_containers.hpp"

namespace cbench {

namespace detail {

inline void check_probability(const Rational& p, const char* name) {
  if (p < 0 || p > 1) throw PreconditionError(std::string(name) + " must lie in [0, 1]");
}

// Calls f(scope) for every q-subset of 0..n-1 in lexicographic order.
template <typename F>
void for_each_scope(std::size_t n, std::size_t q, F&& f) {
  if (q == 0 || q > n) return;
  std::vector<int> scope(q);
  for (std::size_t i = 0; i < q; ++i) scope[i] = static_cast<int>(i);
  while (true) {
    f(static_cast<const std::vector<int>&>(scope));
    std::size_t i = q;
    while (i > 0 && scope[i - 1] == static_cast<int>(n - q + i - 1)) --i;
    if (i == 0) return;
    ++scope[i - 1];
    for (std::size_t j = i; j < q; ++j) scope[j] = scope[j - 1] + 1;
  }
}

// Calls f(tuple) for every tuple in [k]^q in lexicographic order.
template <typename F>
void for_each_tuple(std::size_t k, std::size_t q, F&& f) {
  Tuple t(q, 0);
  while (true) {
    f(static_cast<const Tuple&>(t));
    std::size_t i = q;
    while (i > 0 && t[i - 1] == static_cast<int>(k) - 1) t[--i] = 0;
    if (i == 0) return;
    ++t[i - 1];
  }
}

}  // namespace detail

/// Each q-scope is kept with probability constraint_density; each of its k^q
/// tuples is falsifying with probability falsifying_density.
inline Csp gen_random_csp(std::size_t n, std::size_t k, std::size_t q, const Rational& constraint_density,
                          const Rational& falsifying_density, std::uint64_t seed) {
  detail::check_probability(constraint_density, "constraint density");
  detail::check_probability(falsifying_density, "falsifying density");
  Rng rng(seed);
  std::vector<Constraint> constraints;
  detail::for_each_scope(n, q, [&](const std::vector<int>& scope) {
    if (!rng.bernoulli(constraint_density)) return;
    Constraint c{scope, {}};
    detail::for_each_tuple(k, q, [&](const Tuple& t) {
      if (rng.bernoulli(falsifying_density)) c.falsifying.insert(t);
    });
    constraints.push_back(std::move(c));
  });
  return Csp(n, k, q, constraints);
}

struct PlantedCsp {
  Csp csp;
  Assignment planted;
};

/// Random CSP that the planted total assignment satisfies: its restriction
/// to each scope is never falsifying.
inline PlantedCsp gen_planted_sat_csp(std::size_t n, std::size_t k, std::size_t q, const Rational& density,
                                      std::uint64_t seed, const Rational& falsifying_density = Rational(1, 2)) {
  detail::check_probability(density, "density");
  detail::check_probability(falsifying_density, "falsifying density");
  Rng rng(seed);
  std::vector<int> planted(n);
  for (auto& v : planted) v = static_cast<int>(rng.below(k));
  std::vector<Constraint> constraints;
  detail::for_each_scope(n, q, [&](const std::vector<int>& scope) {
    if (!rng.bernoulli(density)) return;
    Tuple forbidden(q);
    for (std::size_t i = 0; i < q; ++i) forbidden[i] = planted[scope[i]];
    Constraint c{scope, {}};
    detail::for_each_tuple(k, q, [&](const Tuple& t) {
      if (rng.bernoulli(falsifying_density) && t != forbidden) c.falsifying.insert(t);
    });
    constraints.push_back(std::move(c));
  });
  return {Csp(n, k, q, constraints), Assignment(planted)};
}

/// G(n, p) with pairs visited in lexicographic order.
inline Graph gen_random_graph(std::size_t n, const Rational& p, std::uint64_t seed) {
  detail::check_probability(p, "edge probability");
  Rng rng(seed);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
    for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v)
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
  return Graph(n, edges);
}

/// A random ceil(rho n)-set is kept edgeless; every other pair is an edge with
/// probability p.
inline Graph gen_planted_is_graph(std::size_t n, const Rational& rho, const Rational& p, std::uint64_t seed) {
  detail::check_probability(p, "edge probability");
  if (rho <= 0 || rho > 1) throw PreconditionError("rho must lie in (0, 1]");
  Rng rng(seed);
  const auto m = static_cast<std::size_t>(ceil(rho * static_cast<std::int64_t>(n)));
  const auto planted = VertexSet::of(n, sample_without_replacement(rng, n, m));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
    for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v) {
      if (planted.contains(u) && planted.contains(v)) continue;
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  return Graph(n, edges);
}

/// Random q-uniform hypergraph: each q-subset is an edge with probability p.
inline Hypergraph gen_random_hypergraph(std::size_t q, std::size_t n, const Rational& p, std::uint64_t seed) {
  detail::check_probability(p, "edge probability");
  Rng rng(seed);
  std::vector<Edge> edges;
  detail::for_each_scope(n, q, [&](const std::vector<int>& e) {
    if (rng.bernoulli(p)) edges.push_back(e);
  });
  return Hypergraph(q, n, std::move(edges));
}

/// Exact record that an instance is at least epsilon-far from its property.
struct FarCertificate {
  std::string kind;            // "csp" or "graph"
  std::string instance_hash;   // content_hash of the instance JSON
  Rational epsilon;            // requested threshold
  std::optional<Rational> rho; // graph certificates only
  Rational achieved;           // exact distance
  std::size_t min_count = 0;   // falsified constraints or edges to delete
  std::vector<int> witness;    // minimising assignment or vertex subset
  std::uint64_t oracle_cap = 0;
  friend bool operator==(const FarCertificate&, const FarCertificate&) = default;
};

inline std::optional<FarCertificate> certify_far(const Csp& phi, const Rational& epsilon,
                                                 const CspOracleConfig& cfg = {}) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  auto d = distance_to_sat(phi, cfg);
  if (!is_far_from_sat(d, phi, epsilon)) return std::nullopt;
  return FarCertificate{"csp", content_hash(to_json(phi)), epsilon, std::nullopt, d.distance,
                        d.min_falsified, d.witness.values, cfg.assignment_cap};
}

inline std::optional<FarCertificate> certify_far(const Graph& g, const Rational& rho, const Rational& epsilon,
                                                 const IndepSetOracleConfig& cfg = {}) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  auto d = distance_to_rho_is(g, rho, cfg);
  if (!is_far_from_rho_is(d, g.vertex_count(), epsilon)) return std::nullopt;
  return FarCertificate{"graph", content_hash(to_json(g)), epsilon, rho, d.distance,
                        d.min_edits, d.argmin.members(), cfg.subset_cap};
}

inline Json to_json(const FarCertificate& c) {
  Json j{{"kind", c.kind}, {"instance_hash", c.instance_hash}, {"epsilon", to_string(c.epsilon)}};
  j["rho"] = c.rho ? Json(to_string(*c.rho)) : Json(nullptr);
  j["achieved"] = to_string(c.achieved);
  j["min_count"] = c.min_count;
  j["witness"] = c.witness;
  j["oracle_cap"] = c.oracle_cap;
  return j;
}

inline FarCertificate certificate_from_json(const Json& j) {
  using detail::field;
  FarCertificate c;
  c.kind = field<std::string>(j, "kind");
  c.instance_hash = field<std::string>(j, "instance_hash");
  c.epsilon = parse_rational(field<std::string>(j, "epsilon"));
  if (j.contains("rho") && !j.at("rho").is_null()) c.rho = parse_rational(field<std::string>(j, "rho"));
  c.achieved = parse_rational(field<std::string>(j, "achieved"));
  c.min_count = field<std::size_t>(j, "min_count");
  c.witness = field<std::vector<int>>(j, "witness");
  c.oracle_cap = field<std::uint64_t>(j, "oracle_cap");
  return c;
}

}  // namespace cbench
