#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cbench;

TEST(IsStar, Examples) {
  Graph g(4, {{0, 1}});
  EXPECT_TRUE(is_star(g, VertexSet(4, {0, 2}), VertexSet(4)).ok);
  EXPECT_TRUE(is_star(Graph(4, {}), VertexSet(4, {0, 1}), VertexSet(4, {2, 3})).ok);
  EXPECT_FALSE(is_star(g, VertexSet(4, {0}), VertexSet(4, {1})).ok);
  auto overlap = is_star(Graph(4, {}), VertexSet(4, {0, 1}), VertexSet(4, {1, 2}));
  EXPECT_FALSE(overlap.ok);
  EXPECT_FALSE(overlap.diagnostic.empty());
  EXPECT_FALSE(is_star(g, VertexSet(4, {0, 1}), VertexSet(4)).ok);
}

TEST(StarGenerator, EmptyCore) {
  auto tr = run_star_generator(fixture::triangle(), VertexSet(3));
  EXPECT_EQ(tr.loop_length(), 0u);
  EXPECT_EQ(tr.outer(1), VertexSet::all(3));
  EXPECT_TRUE(tr.inner(1).empty());
}

TEST(StarGenerator, SingleEdgeHandTrace) {
  Graph g(4, {{0, 1}});
  auto tr = run_star_generator(g, VertexSet(4, {2, 3}));
  ASSERT_EQ(tr.loop_length(), 1u);
  EXPECT_EQ(tr.iterations[0].u, 2);
  EXPECT_EQ(tr.iterations[0].v, 3);
  EXPECT_EQ(tr.inner(1), VertexSet(4, {2, 3}));
  EXPECT_EQ(tr.outer(1), VertexSet::all(4));
  EXPECT_EQ(tr.fingerprint(1), VertexSet(4, {2, 3}));
  EXPECT_FALSE(check_star_invariants(g, tr).has_value());
}

TEST(StarGenerator, OddCoreLastStepTakesOnlyOneVertex) {
  auto tr = run_star_generator(Graph(5, {{0, 1}}), VertexSet(5, {2, 3, 4}));
  ASSERT_EQ(tr.loop_length(), 2u);
  EXPECT_EQ(tr.iterations[1].v, -1);
  EXPECT_EQ(tr.fingerprint(2), VertexSet(5, {2, 3, 4}));
  EXPECT_EQ(tr.outer(9), tr.outer(2));
}

TEST(StarGenerator, RejectsDependentCore) {
  EXPECT_THROW(run_star_generator(fixture::triangle(), VertexSet(3, {0, 1})), PreconditionError);
}

// Every star (I, J) has J inside every outer container. The maximal J is the
// set of vertices outside I with no neighbour in I; every other J is a subset.
TEST(StarGenerator, OuterContainersCoverEveryStar) {
  Rng rng(12);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 2 + rng.below(7);
    auto g = gen_random_graph(n, Rational(static_cast<std::int64_t>(1 + rng.below(3)), 4), rng());
    enumerate_independent_sets(g, {}, [&](const VertexSet& core) {
      auto tr = run_star_generator(g, core);
      EXPECT_FALSE(check_star_invariants(g, tr).has_value());
      VertexSet j = VertexSet::all(n) - core;
      core.for_each([&](Vertex v) { j -= g.neighbours(v); });
      EXPECT_TRUE(is_star(g, core, j).ok);
      for (std::size_t t = 0; t <= tr.loop_length() + 1; ++t) {
        EXPECT_TRUE(j.is_subset_of(tr.outer(t))) << "t=" << t;
        EXPECT_TRUE(tr.inner(t).is_subset_of(tr.outer(t)));
        EXPECT_TRUE(core.is_subset_of(tr.inner(t)));
      }
      return true;
    });
  }
}

TEST(StarGenerator, CorruptedTraceFailsInvariants) {
  Graph g(4, {{0, 1}});
  auto tr = run_star_generator(g, VertexSet(4, {2, 3}));
  tr.iterations[0].outer.erase(3);
  EXPECT_TRUE(check_star_invariants(g, tr).has_value());
}

TEST(StarClosure, EmptyCoreAndExtension) {
  Graph g(4, {{0, 1}});
  EXPECT_TRUE(check_star_closure(g, VertexSet(4)).holds);
  auto tr = run_star_generator(g, VertexSet(4, {2, 3}));
  EXPECT_EQ(tr.fingerprint(5), tr.independent);
}

TEST(StarClosure, ExhaustiveOnSmallGraphs) {
  Rng rng(21);
  for (int round = 0; round < 80; ++round) {
    const std::size_t n = 1 + rng.below(7);
    auto g = gen_random_graph(n, Rational(static_cast<std::int64_t>(rng.below(5)), 4), rng());
    enumerate_independent_sets(g, {}, [&](const VertexSet& core) {
      auto r = check_star_closure(g, core);
      EXPECT_TRUE(r.holds) << core.to_string() << " t=" << r.first_mismatch.value_or(0);
      return true;
    });
  }
}

TEST(RhoDistance, Examples) {
  auto edgeless = distance_to_rho_is(Graph(6, {}), Rational(1, 2));
  EXPECT_EQ(edgeless.min_edits, 0u);
  EXPECT_EQ(edgeless.target_size, 3u);
  auto k4 = distance_to_rho_is(fixture::complete(4), Rational(1, 2));
  EXPECT_EQ(k4.min_edits, 1u);
  EXPECT_EQ(k4.distance, Rational(1, 16));
  EXPECT_EQ(k4.argmin, VertexSet(4, {0, 1}));
  EXPECT_THROW(distance_to_rho_is(Graph(3, {}), Rational(0)), PreconditionError);
  IndepSetOracleConfig cfg;
  cfg.subset_cap = 10;
  EXPECT_THROW(distance_to_rho_is(Graph(8, {}), Rational(1, 2), cfg), CapExceeded);
}

TEST(RhoDistance, MatchesMaskSweepOnDenseGraphs) {
  Rng rng(31);
  for (int round = 0; round < 40; ++round) {
    auto g = gen_random_graph(12, Rational(4, 5), rng());
    for (auto rho : {Rational(1, 2), Rational(1, 3), Rational(3, 4)}) {
      auto d = distance_to_rho_is(g, rho);
      EXPECT_EQ(d.min_edits, oracle::min_edges_in_subset(g, d.target_size));
      EXPECT_EQ(g.edges_within(d.argmin), d.min_edits);
    }
  }
}

TEST(RhoDistance, FarnessThreshold) {
  auto d = distance_to_rho_is(fixture::complete(4), Rational(1, 2));
  EXPECT_TRUE(is_far_from_rho_is(d, 4, Rational(1, 16)));
  EXPECT_FALSE(is_far_from_rho_is(d, 4, Rational(1, 15)));
}

namespace {

struct FarGraph {
  Graph g;
  RhoDistance d;
};

std::vector<FarGraph> far_graphs(std::size_t count, std::size_t n, const Rational& rho, const Rational& eps,
                                 std::uint64_t seed) {
  std::vector<FarGraph> out;
  for (std::uint64_t attempt = 0; out.size() < count; ++attempt) {
    auto g = gen_random_graph(n, Rational(4, 5), derive_seed(seed, attempt));
    auto d = distance_to_rho_is(g, rho);
    if (is_far_from_rho_is(d, n, eps)) out.push_back({g, d});
  }
  return out;
}

}  // namespace

TEST(Shrinking, FailedPremiseIsVacuous) {
  const Rational rho(1, 2), eps(1, 20);
  auto fg = far_graphs(1, 10, rho, eps, 1).front();
  auto core = collect_independent_sets(fg.g, {}).back();
  ASSERT_FALSE(core.empty());
  auto tr = run_star_generator(fg.g, core);
  // alpha far above sqrt(eps)/2.
  auto r = check_shrinking(fg.g, rho, eps, fg.d, tr, 0, VertexSet(10), Rational(1, 2));
  EXPECT_FALSE(r.premises_hold);
  EXPECT_TRUE(r.conclusion_holds);
  EXPECT_FALSE(r.failed_premise.empty());
}

TEST(Shrinking, Preconditions) {
  const Rational rho(1, 2);
  Graph g(4, {{0, 1}});
  auto d = distance_to_rho_is(g, rho);
  auto tr = run_star_generator(g, VertexSet(4, {2, 3}));
  EXPECT_THROW(check_shrinking(g, rho, Rational(1, 10), d, tr, 0, VertexSet(4), Rational(1, 10)), PreconditionError);
  auto k4 = fixture::complete(4);
  auto dk = distance_to_rho_is(k4, rho);
  auto trk = run_star_generator(k4, VertexSet(4, {1}));
  EXPECT_THROW(check_shrinking(k4, rho, Rational(1, 16), dk, trk, 1, VertexSet(4), Rational(1, 10)),
               PreconditionError);
}

// With D = D_{t+1} the left side is zero; whenever the premises hold the
// conclusion must too.
TEST(Shrinking, WholeNextContainerAsDenseFreeSet) {
  const Rational rho(1, 2), eps(1, 20);
  for (const auto& fg : far_graphs(15, 10, rho, eps, 2)) {
    enumerate_independent_sets(fg.g, {}, [&](const VertexSet& core) {
      auto tr = run_star_generator(fg.g, core);
      for (std::size_t t = 0; 2 * t < core.size(); ++t) {
        const auto d = tr.outer(t + 1);
        const Rational alpha = rho - Rational(static_cast<std::int64_t>(d.size()), 10);
        auto r = check_shrinking(fg.g, rho, eps, fg.d, tr, t, d, alpha);
        if (r.premises_hold) {
          EXPECT_TRUE(r.conclusion_holds);
        }
      }
      return true;
    });
  }
}

TEST(GclStar, EmptyCoreHasWitness) {
  const Rational rho(1, 2), eps(1, 20);
  auto fg = far_graphs(1, 10, rho, eps, 3).front();
  auto r = verify_gcl_star(fg.g, rho, eps, VertexSet(10), fg.d);
  EXPECT_TRUE(r.witness_found);
}

TEST(GclStar, NonFarGraphIsRejected) {
  Graph g(6, {});
  EXPECT_THROW(verify_gcl_star(g, Rational(1, 2), Rational(1, 10), VertexSet(6), distance_to_rho_is(g, Rational(1, 2))),
               PreconditionError);
}

TEST(GclStar, EveryIndependentSetOfFarGraphs) {
  const Rational rho(1, 2), eps(1, 20);
  for (const auto& fg : far_graphs(10, 10, rho, eps, 4)) {
    enumerate_independent_sets(fg.g, {}, [&](const VertexSet& core) {
      auto r = verify_gcl_star(fg.g, rho, eps, core, fg.d);
      EXPECT_TRUE(r.witness_found) << core.to_string();
      EXPECT_TRUE(r.inner_lemma_holds) << core.to_string();
      EXPECT_LE(r.t, r.t_max);
      return true;
    });
  }
}

TEST(ShrinkingSearch, IntegralTargetsFindNoCounterexample) {
  const Rational rho(1, 2), eps(1, 20);
  for (const auto& fg : far_graphs(4, 10, rho, eps, 5)) {
    auto r = search_shrinking(fg.g, rho, eps, fg.d, 3000, 17);
    EXPECT_EQ(r.samples, 3000u);
    EXPECT_EQ(r.counterexamples, 0u);
  }
}
