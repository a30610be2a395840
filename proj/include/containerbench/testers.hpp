#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "containerbench/combinatorics.hpp"
#include "containerbench/csp.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/rng.hpp"

namespace cbench {

/// Edge-query access to an in-memory graph that records every distinct
/// unordered pair it is asked about.
class QueryCountingGraph {
 public:
  explicit QueryCountingGraph(const Graph& g) : g_(g) {}

  bool query(Vertex u, Vertex v) {
    if (u == v) throw PreconditionError("edge query on a single vertex");
    ++raw_;
    pairs_.insert(u < v ? std::pair{u, v} : std::pair{v, u});
    return g_.adjacent(u, v);
  }

  std::size_t vertex_count() const { return g_.vertex_count(); }
  std::size_t distinct_queries() const { return pairs_.size(); }
  std::size_t raw_queries() const { return raw_; }
  const std::set<std::pair<Vertex, Vertex>>& queried_pairs() const { return pairs_; }

 private:
  const Graph& g_;
  std::set<std::pair<Vertex, Vertex>> pairs_;
  std::size_t raw_ = 0;
};

struct TesterReport {
  std::string tester;
  bool accept = false;
  std::vector<int> sample;       // S, in draw order
  std::vector<int> core_sample;  // R (star tester only)
  std::size_t query_count = 0;   // distinct vertex pairs probed
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  std::map<std::string, std::string> params;
};

struct SatTesterParams {
  Rational epsilon{1, 10};
  std::optional<std::size_t> sample_size;  // explicit s overrides the formula
  double c = 1.0;
};

/// s = explicit value, or ceil(c (k q^3 / eps) ln^2(kq/eps)) clamped to n.
inline std::size_t resolve_sample_size(const SatTesterParams& p, std::size_t n, std::size_t k, std::size_t q) {
  if (p.sample_size) {
    if (*p.sample_size < 1 || *p.sample_size > n)
      throw PreconditionError("sample size " + std::to_string(*p.sample_size) + " outside 1.." + std::to_string(n));
    return *p.sample_size;
  }
  if (p.epsilon <= 0) throw PreconditionError("epsilon must be positive");
  const double eps = to_double(p.epsilon);
  const double kq = static_cast<double>(k * q);
  const double l = std::log(kq / eps);
  const double s = std::ceil(p.c * static_cast<double>(k * q * q * q) / eps * l * l);
  return static_cast<std::size_t>(std::clamp(s, 1.0, static_cast<double>(n)));
}

/// Canonical satisfiability tester: draws s variables uniformly without
/// replacement and accepts iff the restriction to them is satisfiable.
inline TesterReport canonical_sat_tester(const Csp& phi, const SatTesterParams& params, std::uint64_t seed,
                                         const CspOracleConfig& cfg = {}) {
  const auto s = resolve_sample_size(params, phi.variable_count(), phi.alphabet_size(), phi.arity());
  Rng rng(seed);
  TesterReport r;
  r.tester = "sat";
  r.seed = seed;
  r.sample = sample_without_replacement(rng, phi.variable_count(), s);
  r.accept = is_satisfiable(restrict_to(phi, r.sample).csp, cfg).satisfiable;
  r.params = {{"epsilon", to_string(params.epsilon)}, {"s", std::to_string(s)}};
  return r;
}

/// One variable per vertex over alphabet [k]; each hyperedge forbids the k
/// monochromatic assignments of its vertices.
inline Csp colorability_to_sat(const Hypergraph& h, std::size_t k) {
  std::vector<Constraint> constraints;
  for (const auto& e : h.edges()) {
    Constraint c{e, {}};
    for (int a = 0; a < static_cast<int>(k); ++a) c.falsifying.insert(Tuple(e.size(), a));
    constraints.push_back(std::move(c));
  }
  return Csp(h.vertex_count(), k, h.arity(), constraints);
}

/// k-partition property with every density bound in {0, 1}.
struct ShppSpec {
  std::size_t k = 0;
  std::vector<std::vector<int>> lower;
  std::vector<std::vector<int>> upper;
};

inline void validate(const ShppSpec& spec) {
  if (spec.k < 1) throw PreconditionError("partition property needs k >= 1");
  if (spec.lower.size() != spec.k || spec.upper.size() != spec.k)
    throw PreconditionError("bound matrices must be k x k");
  for (std::size_t i = 0; i < spec.k; ++i) {
    if (spec.lower[i].size() != spec.k || spec.upper[i].size() != spec.k)
      throw PreconditionError("bound matrices must be k x k");
    for (std::size_t j = 0; j < spec.k; ++j) {
      auto l = spec.lower[i][j], u = spec.upper[i][j];
      if ((l != 0 && l != 1) || (u != 0 && u != 1))
        throw PreconditionError("not semi-homogeneous: bounds must be 0 or 1");
      if (l > u) throw PreconditionError("lower bound above upper bound");
      if (l != spec.lower[j][i] || u != spec.upper[j][i])
        throw PreconditionError("bound matrices must be symmetric");
    }
  }
}

/// Part pairs allowed for non-adjacent (lower = 0) and adjacent (upper = 1)
/// vertex pairs.
struct AllowedPairs {
  std::set<std::pair<int, int>> non_adjacent;
  std::set<std::pair<int, int>> adjacent;
};

inline AllowedPairs allowed_pairs(const ShppSpec& spec) {
  validate(spec);
  AllowedPairs a;
  for (int i = 0; i < static_cast<int>(spec.k); ++i)
    for (int j = 0; j < static_cast<int>(spec.k); ++j) {
      if (spec.lower[i][j] == 0) a.non_adjacent.insert({i, j});
      if (spec.upper[i][j] == 1) a.adjacent.insert({i, j});
    }
  return a;
}

/// Binary CSP over the vertices of G: every vertex pair is constrained to the
/// allowed part pairs for its adjacency status.
inline Csp shpp_to_sat(const Graph& g, const ShppSpec& spec) {
  const auto allowed = allowed_pairs(spec);
  const int k = static_cast<int>(spec.k);
  std::vector<Constraint> constraints;
  const auto n = static_cast<Vertex>(g.vertex_count());
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) {
      const auto& ok = g.adjacent(a, b) ? allowed.adjacent : allowed.non_adjacent;
      Constraint c{{a, b}, {}};
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (!ok.count({i, j})) c.falsifying.insert({i, j});
      constraints.push_back(std::move(c));
    }
  return Csp(g.vertex_count(), spec.k, 2, constraints);
}

struct StarTesterParams {
  Rational rho{1, 2};
  Rational epsilon{1, 10};
  std::optional<std::size_t> r;
  std::optional<std::size_t> s;
  double c1 = 1.0;
  double c2 = 1.0;
  bool disjoint_samples = false;
  bool outer_excludes_core = false;
  std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
};

struct StarSizes {
  std::size_t r = 0;
  std::size_t s = 0;
};

/// r = ceil(c1 rho^2 / eps^{3/2} ln^2(1/eps)), s = ceil(c2 rho^3 / eps^2 ln^3(1/eps)),
/// unless given explicitly; derived values are clamped to n. Requires r <= s <= n.
inline StarSizes resolve_star_sizes(const StarTesterParams& p, std::size_t n) {
  const double rho = to_double(p.rho), eps = to_double(p.epsilon);
  const double l = std::log(1.0 / eps);
  auto clamp_n = [&](double x) { return static_cast<std::size_t>(std::clamp(std::ceil(x), 1.0, static_cast<double>(n))); };
  StarSizes z;
  z.r = p.r ? *p.r : clamp_n(p.c1 * rho * rho / std::pow(eps, 1.5) * l * l);
  z.s = p.s ? *p.s : clamp_n(p.c2 * rho * rho * rho / (eps * eps) * l * l * l);
  if (z.r < 1 || z.r > z.s || z.s > n)
    throw PreconditionError("star tester needs 1 <= r <= s <= n (r=" + std::to_string(z.r) +
                            ", s=" + std::to_string(z.s) + ", n=" + std::to_string(n) + ")");
  if (p.disjoint_samples && z.r + z.s > n) throw PreconditionError("disjoint samples need r + s <= n");
  return z;
}

namespace detail {

// Does the graph on local vertices 0..m-1 (bitmask adjacency) contain an
// independent set of `size` vertices? Branch on the lowest candidate.
inline bool has_independent_set(const std::vector<std::uint64_t>& adj, std::uint64_t candidates, std::size_t size) {
  if (size == 0) return true;
  if (static_cast<std::size_t>(std::popcount(candidates)) < size) return false;
  const int v = std::countr_zero(candidates);
  const std::uint64_t rest = candidates & ~(std::uint64_t{1} << v);
  if (has_independent_set(adj, rest & ~adj[v], size - 1)) return true;
  return has_independent_set(adj, rest, size);
}

}  // namespace detail

/// Star tester: samples R and S, probes every pair inside R and every pair in
/// R x S, and accepts iff some independent ceil(rho r)-subset I of R leaves at
/// least ceil(rho s) vertices of S with no neighbour in I.
inline TesterReport star_tester(const Graph& g, const StarTesterParams& params, std::uint64_t seed) {
  const auto sizes = resolve_star_sizes(params, g.vertex_count());
  if (sizes.r > 64) throw PreconditionError("core sample above 64 vertices is not supported");
  Rng rng(seed);
  TesterReport rep;
  rep.tester = "indepset";
  rep.seed = seed;
  if (params.disjoint_samples) {
    auto both = sample_without_replacement(rng, g.vertex_count(), sizes.r + sizes.s);
    rep.core_sample.assign(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(sizes.r));
    rep.sample.assign(both.begin() + static_cast<std::ptrdiff_t>(sizes.r), both.end());
  } else {
    rep.core_sample = sample_without_replacement(rng, g.vertex_count(), sizes.r);
    rep.sample = sample_without_replacement(rng, g.vertex_count(), sizes.s);
  }
  const auto& core = rep.core_sample;
  const auto& body = rep.sample;
  const auto core_target = static_cast<std::size_t>(ceil(params.rho * static_cast<std::int64_t>(sizes.r)));
  const auto body_target = static_cast<std::size_t>(ceil(params.rho * static_cast<std::int64_t>(sizes.s)));
  if (static_cast<std::uint64_t>(binomial(static_cast<std::int64_t>(sizes.r), static_cast<std::int64_t>(core_target))) >
      params.enumeration_cap)
    throw CapExceeded("C(r, ceil(rho r)) exceeds the enumeration cap");

  QueryCountingGraph oracle(g);
  std::vector<std::uint64_t> core_adj(core.size(), 0);
  for (std::size_t i = 0; i < core.size(); ++i)
    for (std::size_t j = i + 1; j < core.size(); ++j)
      if (oracle.query(core[i], core[j])) {
        core_adj[i] |= std::uint64_t{1} << j;
        core_adj[j] |= std::uint64_t{1} << i;
      }
  // blocked[i] marks the body vertices that core vertex i rules out.
  std::vector<boost::dynamic_bitset<>> blocked(core.size(), boost::dynamic_bitset<>(body.size()));
  for (std::size_t i = 0; i < core.size(); ++i)
    for (std::size_t j = 0; j < body.size(); ++j) {
      if (core[i] == body[j]) {
        if (params.outer_excludes_core) blocked[i].set(j);
        continue;
      }
      if (oracle.query(core[i], body[j])) blocked[i].set(j);
    }
  rep.query_count = oracle.distinct_queries();

  bool accept = false;
  boost::dynamic_bitset<> ruled_out(body.size());
  std::vector<std::size_t> chosen;
  auto search = [&](auto&& self, std::size_t from, std::uint64_t candidates) -> void {
    if (accept) return;
    if (chosen.size() == core_target) {
      ruled_out.reset();
      for (auto i : chosen) ruled_out |= blocked[i];
      if (body.size() - ruled_out.count() >= body_target) accept = true;
      return;
    }
    for (std::size_t i = from; i < core.size() && !accept; ++i) {
      if (!(candidates >> i & 1)) continue;
      if (chosen.size() + static_cast<std::size_t>(std::popcount(candidates >> i)) < core_target) return;
      chosen.push_back(i);
      self(self, i + 1, candidates & ~core_adj[i] & ~(std::uint64_t{1} << i));
      chosen.pop_back();
    }
  };
  const std::uint64_t all = core.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << core.size()) - 1;
  search(search, 0, all);
  rep.accept = accept;
  rep.params = {{"rho", to_string(params.rho)},
                {"epsilon", to_string(params.epsilon)},
                {"r", std::to_string(sizes.r)},
                {"s", std::to_string(sizes.s)},
                {"disjoint_samples", params.disjoint_samples ? "true" : "false"}};
  return rep;
}

/// Canonical rho-IndepSet baseline: samples S, probes all C(|S|,2) pairs and
/// accepts iff G[S] has an independent set of ceil(rho |S|) vertices.
inline TesterReport canonical_is_tester(const Graph& g, const Rational& rho, std::size_t sample_size,
                                        std::uint64_t seed) {
  if (sample_size < 1 || sample_size > g.vertex_count())
    throw PreconditionError("sample size outside 1..n");
  if (sample_size > 64) throw PreconditionError("canonical sample above 64 vertices is not supported");
  Rng rng(seed);
  TesterReport rep;
  rep.tester = "canonical-is";
  rep.seed = seed;
  rep.sample = sample_without_replacement(rng, g.vertex_count(), sample_size);
  QueryCountingGraph oracle(g);
  std::vector<std::uint64_t> adj(sample_size, 0);
  for (std::size_t i = 0; i < sample_size; ++i)
    for (std::size_t j = i + 1; j < sample_size; ++j)
      if (oracle.query(rep.sample[i], rep.sample[j])) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
      }
  rep.query_count = oracle.distinct_queries();
  const auto target = static_cast<std::size_t>(ceil(rho * static_cast<std::int64_t>(sample_size)));
  const std::uint64_t all = sample_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << sample_size) - 1;
  rep.accept = detail::has_independent_set(adj, all, target);
  rep.params = {{"rho", to_string(rho)}, {"s", std::to_string(sample_size)}};
  return rep;
}

/// Whether G has an independent set of ceil(rho n) vertices (n <= 64).
inline bool has_rho_independent_set(const Graph& g, const Rational& rho) {
  const auto n = g.vertex_count();
  if (n > 64) throw PreconditionError("exact decision limited to 64 vertices");
  std::vector<std::uint64_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return detail::has_independent_set(adj, all, static_cast<std::size_t>(ceil(rho * static_cast<std::int64_t>(n))));
}

}  // namespace cbench
