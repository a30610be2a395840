// Acceptance suite: one PASS/FAIL line per criterion. Every expected value is
// recomputed by the brute-force oracles in oracles.hpp or by direct counting.
//
// Exit status is 0 when every criterion passes, or when the only failures are
// ones flagged expected_failure whose counts match the recorded diagnosis.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "containerbench.hpp"
#include "oracles.hpp"

using namespace cbench;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Set when a failure matches a documented, diagnosed gap rather than a bug.
  bool expected_failure = false;
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t choose2(std::size_t m) { return m * (m - 1) / 2; }

// ---------------------------------------------------------------- corpora

// Small CSPs for the exhaustive checks: n in 3..6, k in {2,3}, q in {1,2,3}.
std::vector<Csp> small_csp_corpus() {
  std::vector<Csp> out;
  const Rational densities[] = {Rational(1, 3), Rational(2, 3), Rational(1)};
  const Rational falsifying[] = {Rational(1, 4), Rational(1, 2)};
  std::uint64_t i = 0;
  for (std::size_t n = 3; n <= 6; ++n)
    for (std::size_t k = 2; k <= 3; ++k)
      for (std::size_t q = 1; q <= 3; ++q)
        for (int rep = 0; rep < 10; ++rep, ++i)
          out.push_back(gen_random_csp(n, k, q, densities[i % 3], falsifying[i % 2], derive_seed(0x5a11, i)));
  return out;
}

struct FarCsp {
  Csp phi;
  Hypergraph h;
  SatDistance d;
  Rational epsilon;
};

// Unsatisfiable random CSPs (n in 3..5, k = 2, q in {2,3}), each certified
// at its exact distance.
std::vector<FarCsp> far_csp_corpus(std::size_t count) {
  std::vector<FarCsp> out;
  for (std::uint64_t attempt = 0; out.size() < count; ++attempt) {
    const std::size_t n = 3 + attempt % 3, q = 2 + (attempt / 3) % 2;
    auto phi = gen_random_csp(n, 2, q, Rational(1, 2), Rational(1, 3), derive_seed(0xfa5, attempt));
    auto cert = certify_far(phi, Rational(1, 1000000));
    if (!cert) continue;
    auto d = distance_to_sat(phi);
    out.push_back({phi, build_hypergraph(phi), d, d.distance});
  }
  return out;
}

struct FarGraph {
  Graph g;
  Rational rho;
  Rational epsilon;
  RhoDistance d;
};

// Random graphs on 10..14 vertices with rho in {1/2, 1/3, 2/3}, each certified
// at its exact distance.
std::vector<FarGraph> far_graph_corpus(std::size_t count) {
  const Rational ps[] = {Rational(1, 5), Rational(3, 10), Rational(1, 2), Rational(7, 10)};
  const Rational rhos[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3)};
  std::vector<FarGraph> out;
  for (std::uint64_t attempt = 0; out.size() < count; ++attempt) {
    const auto rho = rhos[attempt % 3];
    auto g = gen_random_graph(10 + attempt % 5, ps[(attempt / 3) % 4], derive_seed(0x9a7, attempt));
    auto d = distance_to_rho_is(g, rho);
    if (d.min_edits == 0) continue;
    out.push_back({g, rho, d.distance, d});
  }
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome one_sided_error() {
  Rng rng(0x1);
  std::size_t runs = 0, rejects = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 4 + inst % 7, k = 2 + inst % 2, q = 2 + (inst / 2) % 2;
    auto planted = gen_planted_sat_csp(n, k, q, Rational(1, 2), rng());
    for (std::size_t s = 2; s <= n; ++s)
      for (int run = 0; run < 50; ++run) {
        SatTesterParams p;
        p.sample_size = s;
        ++runs;
        rejects += !canonical_sat_tester(planted.csp, p, rng()).accept;
      }
  }
  return {rejects == 0, fmt("200 planted CSPs, %zu runs, %zu rejections", runs, rejects)};
}

Outcome falsified_equals_edges() {
  std::size_t checks = 0, violations = 0;
  for (const auto& phi : small_csp_corpus()) {
    auto h = build_hypergraph(phi);
    oracle::for_each_assignment(phi.variable_count(), phi.alphabet_size(), [&](const std::vector<int>& a) {
      ++checks;
      violations += h.edges_within(assignment_vertex_set(phi, Assignment(a))) != oracle::falsified(phi, a);
    });
  }
  return {violations == 0, fmt("%zu (CSP, assignment) pairs, %zu violations", checks, violations)};
}

Outcome container_invariants_and_closure() {
  std::size_t instances = 0, sets = 0, violations = 0;
  for (const auto& phi : small_csp_corpus()) {
    if (phi.variable_count() > 5 || phi.alphabet_size() != 2 || phi.arity() < 2) continue;
    ++instances;
    auto h = build_hypergraph(phi);
    const auto n = phi.variable_count();
    EnumerationOptions opt;
    opt.variable_distinct = true;
    enumerate_independent_sets(h, opt, [&](const VertexSet& s) {
      ++sets;
      auto tr = run_generator(h, n, s);
      bool ok = !check_trace_invariants(tr).has_value();
      // Restate the three containment facts directly.
      // Nesting is only claimed inside the loop; the extension past it resets C to I.
      for (std::size_t t = 0; t <= tr.loop_length() && ok; ++t) {
        ok = ok && tr.fingerprint(t).is_subset_of(s) && (s - tr.fingerprint(t)).is_subset_of(tr.container(t));
        if (t > 0) ok = ok && tr.container(t).is_subset_of(tr.container(t - 1)) &&
                        tr.fingerprint(t - 1).is_subset_of(tr.fingerprint(t));
      }
      ok = ok && (s - tr.fingerprint(tr.loop_length() + 1)).empty() && check_closure(h, n, s).holds;
      violations += !ok;
      return true;
    });
  }
  return {violations == 0 && instances > 0,
          fmt("%zu instances, %zu variable-distinct sets, %zu violations", instances, sets, violations)};
}

struct GclSatSweep {
  std::size_t instances = 0, sets = 0, gcl_failures = 0, degree_failures = 0, tight_failures = 0;
  std::optional<Rational> worst_tight_slack;
};

GclSatSweep sweep_far_csps() {
  GclSatSweep r;
  for (const auto& fc : far_csp_corpus(120)) {
    ++r.instances;
    const auto n = fc.phi.variable_count();
    EnumerationOptions opt;
    opt.variable_distinct = true;
    enumerate_independent_sets(fc.h, opt, [&](const VertexSet& s) {
      ++r.sets;
      r.gcl_failures += !verify_gcl_sat(fc.phi, fc.h, fc.epsilon, s, fc.d).witness_found;
      auto deg = check_container_degree(fc.h, run_generator(fc.h, n, s), fc.phi.alphabet_size(), n);
      r.degree_failures += !deg.pass;
      r.tight_failures += !deg.tight_pass;
      if (deg.worst_tight_slack && (!r.worst_tight_slack || *deg.worst_tight_slack < *r.worst_tight_slack))
        r.worst_tight_slack = deg.worst_tight_slack;
      return true;
    });
  }
  return r;
}

GclSatSweep& far_csp_results() {
  static GclSatSweep r = sweep_far_csps();
  return r;
}

Outcome gcl_sat() {
  const auto& r = far_csp_results();
  return {r.gcl_failures == 0 && r.instances >= 100,
          fmt("%zu certified-far CSPs, %zu variable-distinct sets, %zu without a witness", r.instances, r.sets,
              r.gcl_failures)};
}

Outcome container_degree() {
  const auto& r = far_csp_results();
  return {r.degree_failures == 0,
          fmt("%zu traces, %zu bound violations; tighter 2k(q-1)/t constant: %zu violations, worst slack %s", r.sets,
              r.degree_failures, r.tight_failures,
              r.worst_tight_slack ? to_string(*r.worst_tight_slack).c_str() : "n/a")};
}

Outcome edges_bound() {
  Rng rng(0x5);
  std::size_t graphs = 0, violations = 0;
  while (graphs < 1000) {
    const std::size_t l = 2 + rng.below(3), nv = l + rng.below(13 - l);
    auto h = gen_random_hypergraph(l, nv, Rational(static_cast<std::int64_t>(1 + rng.below(6)), 8), rng());
    if (h.edge_count() == 0) continue;
    ++graphs;
    // Count heavy vertices from scratch: degree strictly above (l-1)|E|/|V|.
    std::size_t heavy = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      std::size_t deg = 0;
      for (const auto& e : h.edges()) deg += std::count(e.begin(), e.end(), static_cast<int>(v));
      heavy += static_cast<std::int64_t>(deg * nv) > static_cast<std::int64_t>((l - 1) * h.edge_count());
    }
    const Rational bound(static_cast<std::int64_t>(h.edge_count()),
                         binomial(static_cast<std::int64_t>(nv) - 1, static_cast<std::int64_t>(l) - 1));
    const auto lib = check_edges_bound(h);
    violations += Rational(static_cast<std::int64_t>(heavy)) < bound || lib.heavy_count != heavy || !lib.pass;
  }
  return {violations == 0, fmt("%zu hypergraphs, %zu violations", graphs, violations)};
}

Outcome deg_leq_n_equivalence() {
  Rng rng(0x7);
  std::size_t mismatches = 0;
  for (int round = 0; round < 500; ++round) {
    const std::size_t q = 2 + rng.below(3), nv = 6 + rng.below(9);
    auto h = gen_random_hypergraph(q, nv, Rational(static_cast<std::int64_t>(1 + rng.below(4)), 8), rng());
    VertexSet c(nv);
    while (c.empty())
      for (std::size_t v = 0; v < nv; ++v)
        if (rng.below(6) != 0) c.insert(static_cast<Vertex>(v));
    const auto members = c.members();
    const Vertex v = members[rng.below(members.size())];
    const std::size_t n = 1 + rng.below(nv);
    mismatches += deg_leq_n(h, c, n, v).value != oracle::deg_leq_n(h, c, n, v);
  }
  return {mismatches == 0, fmt("500 instances with |C| <= 14, %zu mismatches", mismatches)};
}

Outcome star_containers() {
  std::size_t graphs = 0, sets = 0, invariant = 0, closure = 0, gcl = 0, inner = 0;
  for (const auto& fg : far_graph_corpus(60)) {
    ++graphs;
    enumerate_independent_sets(fg.g, {}, [&](const VertexSet& s) {
      ++sets;
      invariant += check_star_invariants(fg.g, run_star_generator(fg.g, s)).has_value();
      closure += !check_star_closure(fg.g, s).holds;
      auto r = verify_gcl_star(fg.g, fg.rho, fg.epsilon, s, fg.d);
      gcl += !r.witness_found;
      inner += !r.inner_lemma_holds;
      return true;
    });
  }
  const bool ok = graphs >= 50 && invariant + closure + gcl + inner == 0;
  return {ok, fmt("%zu certified-far graphs, %zu independent sets; failures: invariants %zu, closure %zu, "
                  "witness %zu, inner-container bound %zu",
                  graphs, sets, invariant, closure, gcl, inner)};
}

Outcome shrinking_search() {
  std::size_t samples = 0, held = 0, cex = 0, near = 0;
  std::size_t held_integral = 0, cex_integral = 0, cex_fractional = 0, graphs_fractional = 0;
  std::string first;
  std::uint64_t i = 0;
  for (const auto& fg : far_graph_corpus(60)) {
    const auto n = static_cast<std::int64_t>(fg.g.vertex_count());
    const bool integral = (fg.rho * n).denominator() == 1;
    graphs_fractional += !integral;
    auto r = search_shrinking(fg.g, fg.rho, fg.epsilon, fg.d, 10000, derive_seed(0x7e57, i++));
    samples += r.samples;
    held += r.premises_held;
    cex += r.counterexamples;
    near += r.near_misses;
    (integral ? held_integral : cex_fractional) += integral ? r.premises_held : r.counterexamples;
    if (integral) cex_integral += r.counterexamples;
    if (r.first_counterexample && first.empty()) {
      const auto& c = *r.first_counterexample;
      first = fmt("n=%lld rho=%s eps=%s I=%s t=%zu D=%s alpha=%s", static_cast<long long>(n), to_string(fg.rho).c_str(),
                  to_string(fg.epsilon).c_str(), c.independent.to_string().c_str(), c.t,
                  c.dense_free.to_string().c_str(), to_string(c.alpha).c_str());
    }
  }
  Outcome o;
  o.pass = cex == 0 && samples >= 100000;
  o.detail = fmt("%zu sampled tuples on 60 graphs, %zu with premises true, %zu counterexamples, %zu size near-misses",
                 samples, held, cex, near);
  if (!o.pass) {
    o.detail += fmt("; rho*n integral: %zu counterexamples among %zu premise-holding tuples; rho*n fractional "
                    "(%zu graphs): %zu counterexamples; first: %s",
                    cex_integral, held_integral, graphs_fractional, cex_fractional, first.c_str());
    // Diagnosed gap: the shrinking bound relies on rho*n being a whole number.
    o.expected_failure = cex_integral == 0 && samples >= 100000;
  }
  return o;
}

Outcome star_completeness() {
  StarTesterParams p;
  p.rho = Rational(1, 2);
  p.r = 8;
  p.s = 16;
  bool ok = true;
  std::string detail;
  for (std::uint64_t graph = 0; graph < 5; ++graph) {
    auto g = gen_planted_is_graph(40, Rational(1, 2), Rational(1), derive_seed(0x10, graph));
    auto est = estimate_acceptance([&](std::uint64_t s) { return star_tester(g, p, s); }, 2000,
                                   derive_seed(0x11, graph));
    ok = ok && est.interval.low > 0.2;
    detail += fmt("%s%.3f [%.3f, %.3f]", graph ? ", " : "rates over 2000 trials: ", est.rate, est.interval.low,
                  est.interval.high);
  }
  return {ok, detail};
}

Outcome star_exactness() {
  std::vector<std::pair<Graph, Rational>> corpus;
  const Rational rhos[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1)};
  Rng rng(0xb);
  for (int i = 0; i < 400; ++i) {
    const std::size_t n = 1 + rng.below(12);
    corpus.push_back({gen_random_graph(n, Rational(static_cast<std::int64_t>(rng.below(9)), 8), rng()), rhos[i % 5]});
  }
  for (const auto& fg : far_graph_corpus(60))
    if (fg.g.vertex_count() <= 12) corpus.push_back({fg.g, fg.rho});
  std::size_t mismatches = 0;
  for (const auto& [g, rho] : corpus) {
    StarTesterParams p;
    p.rho = rho;
    p.r = g.vertex_count();
    p.s = g.vertex_count();
    const auto target = static_cast<std::size_t>(cbench::ceil(rho * static_cast<std::int64_t>(g.vertex_count())));
    mismatches += star_tester(g, p, rng()).accept != (oracle::max_independent_set(g) >= target);
  }
  return {mismatches == 0, fmt("%zu graphs with n <= 12, %zu mismatches", corpus.size(), mismatches)};
}

Outcome query_accounting() {
  Rng rng(0xc);
  std::size_t reports = 0, bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 20 + rng.below(21);
    auto g = gen_random_graph(n, Rational(1, 2), rng());
    StarTesterParams p;
    p.r = 1 + rng.below(10);
    p.s = *p.r + rng.below(n - *p.r + 1);
    p.disjoint_samples = i % 3 == 0 && *p.r + *p.s <= n;
    auto rep = star_tester(g, p, rng());
    std::set<std::pair<int, int>> pairs;
    auto add = [&](int a, int b) {
      if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
    };
    for (std::size_t x = 0; x < rep.core_sample.size(); ++x) {
      for (std::size_t y = x + 1; y < rep.core_sample.size(); ++y) add(rep.core_sample[x], rep.core_sample[y]);
      for (int b : rep.sample) add(rep.core_sample[x], b);
    }
    ++reports;
    bad += rep.query_count != pairs.size() || rep.query_count > choose2(*p.r) + *p.r * *p.s;
  }
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.below(40), s = 1 + rng.below(n);
    auto rep = canonical_is_tester(gen_random_graph(n, Rational(1, 2), rng()), Rational(1, 2), s, rng());
    ++reports;
    bad += rep.query_count != choose2(s);
  }
  return {bad == 0, fmt("%zu reports (2000 star, 1000 canonical), %zu accounting errors", reports, bad)};
}

Outcome reductions() {
  std::size_t cases = 0, mismatches = 0;
  auto check_colouring = [&](const Hypergraph& h) {
    for (std::size_t k = 1; k <= 3; ++k) {
      ++cases;
      mismatches += is_satisfiable(colorability_to_sat(h, k)).satisfiable != oracle::colourable(h, k);
    }
  };
  // Every graph on up to 6 vertices.
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < static_cast<Vertex>(n); ++u)
      for (Vertex v = u + 1; v < static_cast<Vertex>(n); ++v) pairs.emplace_back(u, v);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask >> b & 1) edges.push_back({pairs[b].first, pairs[b].second});
      check_colouring(Hypergraph(2, n, edges));
    }
  }
  // Every 3-uniform hypergraph on up to 6 vertices.
  for (std::size_t n = 3; n <= 6; ++n) {
    std::vector<Edge> triples;
    for (int a = 0; a < static_cast<int>(n); ++a)
      for (int b = a + 1; b < static_cast<int>(n); ++b)
        for (int c = b + 1; c < static_cast<int>(n); ++c) triples.push_back({a, b, c});
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << triples.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t b = 0; b < triples.size(); ++b)
        if (mask >> b & 1) edges.push_back(triples[b]);
      check_colouring(Hypergraph(3, n, edges));
    }
  }
  const auto colouring_cases = cases;

  Rng rng(0xd);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t n = 1 + rng.below(6), k = 1 + rng.below(3);
    auto g = gen_random_graph(n, Rational(static_cast<std::int64_t>(rng.below(5)), 4), rng());
    ShppSpec spec{k, std::vector<std::vector<int>>(k, std::vector<int>(k)),
                  std::vector<std::vector<int>>(k, std::vector<int>(k))};
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        const int kind = static_cast<int>(rng.below(3));  // forbidden, forced, free
        spec.lower[a][b] = spec.lower[b][a] = kind == 1;
        spec.upper[a][b] = spec.upper[b][a] = kind != 0;
      }
    ++cases;
    mismatches += is_satisfiable(shpp_to_sat(g, spec)).satisfiable != oracle::has_partition(g, spec);
  }
  return {mismatches == 0, fmt("%zu colourability cases (all graphs and 3-uniform hypergraphs on <= 6 vertices, "
                               "k <= 3), %zu partition-property cases, %zu mismatches",
                               colouring_cases, cases - colouring_cases, mismatches)};
}

Outcome soundness_trend() {
  bool ok = true;
  std::string detail;
  std::size_t found = 0;
  for (std::uint64_t attempt = 0; found < 3; ++attempt) {
    auto phi = gen_random_csp(10, 2, 2, Rational(1, 3), Rational(1, 4), derive_seed(0xe, attempt));
    auto cert = certify_far(phi, Rational(1, 45));
    if (!cert) continue;
    ++found;
    std::vector<WilsonInterval> reject;
    std::vector<double> rate;
    for (std::size_t s = 1; s <= 10; ++s) {
      SatTesterParams p;
      p.epsilon = cert->epsilon;
      p.sample_size = s;
      auto est = estimate_acceptance([&](std::uint64_t seed) { return canonical_sat_tester(phi, p, seed); }, 400,
                                     derive_seed(0xf, attempt * 100 + s));
      rate.push_back(1.0 - est.rate);
      reject.push_back({1.0 - est.interval.high, 1.0 - est.interval.low});
    }
    // No later s may be significantly below an earlier one.
    for (std::size_t a = 0; a < reject.size(); ++a)
      for (std::size_t b = a + 1; b < reject.size(); ++b) ok = ok && reject[b].high >= reject[a].low;
    ok = ok && rate.back() == 1.0;
    detail += fmt("%sdistance %s: rejection", found > 1 ? "; " : "", to_string(cert->achieved).c_str());
    for (double r : rate) detail += fmt(" %.2f", r);
  }
  return {ok, "s = 1..10, 400 trials each; " + detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "one-sided error of the canonical SAT tester", 60, one_sided_error},
      {2, "falsified constraints equal induced hyperedges", 0, falsified_equals_edges},
      {3, "hypergraph container invariants and closure", 300, container_invariants_and_closure},
      {4, "container lemma for CSPs (witness t for every set)", 0, gcl_sat},
      {5, "heavy-vertex count lower bound", 0, edges_bound},
      {6, "container degree bound", 0, container_degree},
      {7, "deg<=n branch-and-bound against naive sweep", 0, deg_leq_n_equivalence},
      {8, "star container invariants, closure and container lemma", 600, star_containers},
      {9, "outer container shrinking (randomized search)", 0, shrinking_search},
      {10, "star tester completeness on planted graphs", 120, star_completeness},
      {11, "star tester exact at full sampling", 0, star_exactness},
      {12, "query accounting", 0, query_accounting},
      {13, "colourability and partition-property reductions", 0, reductions},
      {14, "canonical SAT tester rejection trend", 0, soundness_trend},
  };

  int unexpected = 0, expected = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.expected_failure = false;
      o.detail += fmt("; exceeded the %.0f s budget", c.time_limit_s);
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " | " << o.detail
              << fmt(" | %.1f s", secs);
    if (!o.pass && o.expected_failure) std::cout << " | known failure, see README";
    std::cout << std::endl;
    if (!o.pass) (o.expected_failure ? expected : unexpected) += 1;
  }
  std::cout << fmt("%zu criteria, %d unexpected failures, %d known failures", criteria.size(), unexpected, expected)
            << std::endl;
  return unexpected == 0 ? 0 : 1;
}
