#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cbench;

TEST(DegLeqN, StarExample) {
  Hypergraph h(2, 6, {{0, 1}, {0, 2}, {0, 3}});
  auto r = deg_leq_n(h, VertexSet::all(6), 3, 0);
  EXPECT_EQ(r.value, 2u);
  EXPECT_EQ(r.witness.members(), (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(r.relevant, 3u);
}

TEST(DegLeqN, IsolatedAndSmallContainer) {
  Hypergraph h(3, 6, {{0, 1, 2}, {0, 3, 4}, {1, 2, 3}});
  EXPECT_EQ(deg_leq_n(h, VertexSet::all(6), 4, 5).value, 0u);
  VertexSet c(6, {0, 1, 2, 3});
  EXPECT_EQ(deg_leq_n(h, c, 4, 1).value, degree(h, c, 1));
  EXPECT_EQ(deg_leq_n(h, c, 9, 2).value, degree(h, c, 2));
}

TEST(DegLeqN, Preconditions) {
  Hypergraph h(2, 3, {{0, 1}});
  EXPECT_THROW(deg_leq_n(h, VertexSet(3, {1, 2}), 2, 0), PreconditionError);
  EXPECT_THROW(deg_leq_n(h, VertexSet::all(3), 0, 0), PreconditionError);
  DegLeqNConfig cfg;
  cfg.relevant_cap = 2;
  Hypergraph wide(2, 5, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_THROW(deg_leq_n(wide, VertexSet::all(5), 2, 0, cfg), CapExceeded);
}

// Branch-and-bound value against the all-subsets maximum.
TEST(DegLeqN, MatchesNaiveSweep) {
  Rng rng(77);
  for (int round = 0; round < 300; ++round) {
    const std::size_t q = 2 + rng.below(3), nv = q + rng.below(15 - q);
    auto h = gen_random_hypergraph(q, nv, Rational(static_cast<std::int64_t>(1 + rng.below(4)), 8), rng());
    VertexSet c(nv);
    for (std::size_t v = 0; v < nv; ++v)
      if (rng.below(5) != 0) c.insert(static_cast<Vertex>(v));
    if (c.empty()) continue;
    const auto members = c.members();
    const Vertex v = members[rng.below(members.size())];
    const std::size_t n = 1 + rng.below(nv);
    auto r = deg_leq_n(h, c, n, v);
    ASSERT_EQ(r.value, oracle::deg_leq_n(h, c, n, v)) << "round " << round;
    EXPECT_EQ(deg_leq_n_value(h, c, n, v), r.value);
    EXPECT_LE(r.witness.size(), n);
    EXPECT_TRUE(r.witness.is_subset_of(c));
    EXPECT_EQ(h.degree_in(v, r.witness), r.value);
    EXPECT_LE(deg_leq_n_greedy(h, c, n, v), r.value);
  }
}

TEST(Generator, EmptyIndependentSet) {
  auto h = build_hypergraph(fixture::triangle_colouring());
  auto tr = run_generator(h, 3, VertexSet(6));
  EXPECT_EQ(tr.loop_length(), 0u);
  EXPECT_TRUE(tr.fingerprint(0).empty());
  EXPECT_EQ(tr.container(0), VertexSet::all(6));
}

TEST(Generator, TriangleColouringHandTrace) {
  // H is two disjoint triangles {0,2,4} and {1,3,5}; I = {(x0,0), (x1,1)}.
  auto h = build_hypergraph(fixture::triangle_colouring());
  auto tr = run_generator(h, 3, VertexSet(6, {0, 3}));
  ASSERT_EQ(tr.loop_length(), 2u);
  EXPECT_EQ(tr.iterations[0].outer, 0);
  EXPECT_EQ(tr.iterations[0].outer_value, 2u);
  EXPECT_EQ(tr.fingerprint(1), VertexSet(6, {0}));
  EXPECT_EQ(tr.container(1), VertexSet(6, {1, 3, 5}));
  EXPECT_EQ(tr.iterations[1].outer, 3);
  EXPECT_EQ(tr.fingerprint(2), VertexSet(6, {0, 3}));
  EXPECT_TRUE(tr.container(2).empty());
  EXPECT_EQ(tr.container(7), tr.independent);
  EXPECT_FALSE(check_trace_invariants(tr).has_value());
}

TEST(Generator, Preconditions) {
  auto h = build_hypergraph(fixture::triangle_colouring());
  EXPECT_THROW(run_generator(h, 3, VertexSet(6, {0, 2})), PreconditionError);
  EXPECT_THROW(run_generator(h, 0, VertexSet(6)), PreconditionError);
  EXPECT_THROW(run_generator(h, 6, VertexSet(6)), PreconditionError);
}

TEST(Generator, CorruptedTraceFailsInvariants) {
  auto h = build_hypergraph(fixture::triangle_colouring());
  auto tr = run_generator(h, 3, VertexSet(6, {0, 3}));
  tr.iterations[0].container.erase(3);  // 3 is in I but not yet fingerprinted
  EXPECT_TRUE(check_trace_invariants(tr).has_value());
}

namespace {

void expect_invariants_and_closure(const Hypergraph& h, std::size_t n, bool variable_distinct) {
  EnumerationOptions opt;
  opt.variable_distinct = variable_distinct;
  enumerate_independent_sets(h, opt, [&](const VertexSet& s) {
    auto tr = run_generator(h, n, s);
    auto bad = check_trace_invariants(tr);
    EXPECT_FALSE(bad.has_value()) << s.to_string() << ": " << bad.value_or("");
    auto cl = check_closure(h, n, s);
    EXPECT_TRUE(cl.holds) << s.to_string() << " at t=" << cl.first_mismatch.value_or(0);
    return true;
  });
}

}  // namespace

TEST(Closure, TriangleColouringAllVariableDistinctSets) {
  expect_invariants_and_closure(build_hypergraph(fixture::triangle_colouring()), 3, true);
}

TEST(Closure, EmptySetIsVacuous) {
  auto h = build_hypergraph(fixture::not_all_equal());
  EXPECT_TRUE(check_closure(h, 3, VertexSet(6)).holds);
}

TEST(Closure, RandomSmallCsps) {
  Rng rng(3);
  for (int round = 0; round < 12; ++round) {
    const std::size_t n = 3 + rng.below(2), q = 2 + rng.below(2);
    auto phi = gen_random_csp(n, 2, q, Rational(2, 3), Rational(1, 3), rng());
    expect_invariants_and_closure(build_hypergraph(phi), n, true);
  }
}

TEST(Closure, RandomHypergraphsWithoutLabels) {
  Rng rng(4);
  for (int round = 0; round < 10; ++round) {
    const std::size_t q = 2 + rng.below(2), nv = 6 + rng.below(3);
    auto h = gen_random_hypergraph(q, nv, Rational(1, 3), rng());
    expect_invariants_and_closure(h, 1 + rng.below(nv - 1), false);
  }
}

TEST(EdgesBound, SingleEdge) {
  auto r = check_edges_bound(Hypergraph(2, 2, {{0, 1}}));
  EXPECT_EQ(r.degree_threshold, Rational(1, 2));
  EXPECT_EQ(r.heavy_count, 2u);
  EXPECT_EQ(r.lower_bound, Rational(1));
  EXPECT_TRUE(r.pass);
}

TEST(EdgesBound, CompleteGraphOnFour) {
  auto r = check_edges_bound(as_hypergraph(fixture::complete(4)));
  EXPECT_EQ(r.degree_threshold, Rational(3, 2));
  EXPECT_EQ(r.heavy_count, 4u);
  EXPECT_EQ(r.lower_bound, Rational(2));
  EXPECT_TRUE(r.pass);
}

TEST(EdgesBound, RandomThreeUniform) {
  Rng rng(99);
  for (int round = 0; round < 300; ++round) {
    auto h = gen_random_hypergraph(3, 3 + rng.below(10), Rational(1, 4), rng());
    if (h.edge_count() == 0) continue;
    auto r = check_edges_bound(h);
    // Recount heavy vertices directly.
    std::size_t heavy = 0;
    for (std::size_t v = 0; v < h.vertex_count(); ++v)
      heavy += Rational(static_cast<std::int64_t>(h.incident(static_cast<Vertex>(v)).size())) > r.degree_threshold;
    EXPECT_EQ(heavy, r.heavy_count);
    EXPECT_TRUE(r.pass);
  }
}

TEST(ContainerDegree, EdgelessPasses) {
  Hypergraph h = build_hypergraph(Csp(3, 2, 2, {}));
  auto tr = run_generator(h, 3, VertexSet(6, {0, 2, 4}));
  auto r = check_container_degree(h, tr, 2, 3);
  EXPECT_TRUE(r.pass);
  ASSERT_FALSE(r.steps.empty());
  for (const auto& s : r.steps) EXPECT_EQ(s.max_degree, 0u);
}

TEST(ContainerDegree, FirstStepBoundDominatesAbsoluteMaximum) {
  auto phi = fixture::triangle_colouring();
  auto h = build_hypergraph(phi);
  auto tr = run_generator(h, 3, VertexSet(6, {0, 3}));
  auto r = check_container_degree(h, tr, 2, 3);
  ASSERT_FALSE(r.steps.empty());
  EXPECT_EQ(r.steps[0].t, 1u);
  EXPECT_EQ(r.steps[0].bound, Rational(2 * 2 * 2 * 2));
  EXPECT_EQ(r.steps[0].tight_bound, Rational(2 * 2 * 1 * 2));
  EXPECT_TRUE(r.pass);
}

TEST(GclSat, TriangleColouringEverySet) {
  auto phi = fixture::triangle_colouring();
  auto h = build_hypergraph(phi);
  auto d = distance_to_sat(phi);
  EnumerationOptions opt;
  opt.variable_distinct = true;
  std::size_t sets = 0;
  enumerate_independent_sets(h, opt, [&](const VertexSet& s) {
    auto r = verify_gcl_sat(phi, h, Rational(1, 3), s, d);
    EXPECT_TRUE(r.witness_found) << s.to_string();
    EXPECT_LE(r.t, r.t_max);
    ++sets;
    return true;
  });
  EXPECT_GT(sets, 1u);
}

TEST(GclSat, ExtensionRegionWitness) {
  auto phi = fixture::triangle_colouring();
  auto h = build_hypergraph(phi);
  auto r = verify_gcl_sat(phi, h, Rational(1, 3), VertexSet(6, {1}), distance_to_sat(phi));
  ASSERT_TRUE(r.witness_found);
  EXPECT_LE(r.vars_at_t, 1u);
}

TEST(GclSat, RejectsNonFarOrRepeatedVariables) {
  auto nae = fixture::not_all_equal();
  auto h = build_hypergraph(nae);
  EXPECT_THROW(verify_gcl_sat(nae, h, Rational(1, 10), VertexSet(6), distance_to_sat(nae)), PreconditionError);
  auto phi = fixture::triangle_colouring();
  auto hp = build_hypergraph(phi);
  EXPECT_THROW(verify_gcl_sat(phi, hp, Rational(1, 3), VertexSet(6, {0, 1}), distance_to_sat(phi)),
               PreconditionError);
}
