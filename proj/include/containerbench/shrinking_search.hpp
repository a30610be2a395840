#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <utility>
#include <optional>
#include <vector>

#include "containerbench/combinatorics.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/rng.hpp"
#include "containerbench/star_containers.hpp"

namespace cbench {

struct ShrinkingTuple {
  VertexSet independent;
  std::size_t t = 0;
  VertexSet dense_free;
  Rational alpha;
};

struct ShrinkingSearchResult {
  std::size_t samples = 0;
  std::size_t premises_held = 0;
  std::size_t counterexamples = 0;
  std::size_t near_misses = 0;  // |D| off by one from the required size
  std::optional<ShrinkingTuple> first_counterexample;
};

/// Random search for a shrinking-check counterexample on one certified-far
/// graph. Each sample picks a non-empty independent set, a step t with
/// 2t < |I| and a target size m with a matching alpha <= sqrt(eps)/2, then
/// draws D of size m inside D_{t+1}, biased toward C_{t+1} so the premises
/// hold often enough to matter.
inline ShrinkingSearchResult search_shrinking(const Graph& g, const Rational& rho, const Rational& epsilon,
                                              const RhoDistance& certificate, std::size_t samples,
                                              std::uint64_t seed, const EnumerationOptions& enumeration = {}) {
  const auto n = g.vertex_count();
  std::vector<VertexSet> cores;
  enumerate_independent_sets(g, enumeration, [&](const VertexSet& s) {
    if (!s.empty()) cores.push_back(s);
    return true;
  });
  ShrinkingSearchResult r;
  if (cores.empty() || n == 0) return r;
  std::vector<std::optional<StarContainerTrace>> traces(cores.size());

  const auto nn = static_cast<std::int64_t>(n);
  // Candidate (m, alpha) pairs: alpha = rho - m/n makes (rho - alpha) n = m
  // exactly; alpha = (ceil(rho n) - m)/n pads D up to the rounded target.
  std::vector<std::pair<std::int64_t, Rational>> sizes;
  const auto top = ceil(rho * nn);
  for (std::int64_t m = 0; m <= nn; ++m)
    for (const Rational& alpha : {rho - Rational(m, nn), Rational(top - m, nn)}) {
      if (!(alpha > 0 && 4 * alpha * alpha <= epsilon)) continue;
      if (std::find(sizes.begin(), sizes.end(), std::pair{m, alpha}) == sizes.end()) sizes.emplace_back(m, alpha);
    }
  if (sizes.empty()) return r;

  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto which = rng.below(cores.size());
    if (!traces[which]) traces[which] = run_star_generator(g, cores[which]);
    const auto& trace = *traces[which];
    const auto& core = cores[which];
    const std::size_t t = rng.below((core.size() + 1) / 2);
    const auto [m, alpha] = sizes[rng.below(sizes.size())];

    const auto outer_next = trace.outer(t + 1);
    const auto inner_next = trace.inner(t + 1) & outer_next;
    std::vector<int> pool;
    const bool biased = rng.below(4) != 0;
    if (biased) {
      auto a = inner_next.members(), b = (outer_next - inner_next).members();
      auto pa = sample_without_replacement(rng, a.size(), a.size());
      auto pb = sample_without_replacement(rng, b.size(), b.size());
      for (auto j : pa) pool.push_back(a[j]);
      for (auto j : pb) pool.push_back(b[j]);
    } else {
      auto a = outer_next.members();
      for (auto j : sample_without_replacement(rng, a.size(), a.size())) pool.push_back(a[j]);
    }
    const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(m));
    VertexSet dense_free(n);
    for (std::size_t j = 0; j < take; ++j) dense_free.insert(pool[j]);

    auto check = check_shrinking(g, rho, epsilon, certificate, trace, t, dense_free, alpha);
    ++r.samples;
    r.near_misses += check.size_near_miss;
    if (!check.premises_hold) continue;
    ++r.premises_held;
    if (!check.conclusion_holds) {
      ++r.counterexamples;
      if (!r.first_counterexample) r.first_counterexample = ShrinkingTuple{core, t, dense_free, alpha};
    }
  }
  return r;
}

}  // namespace cbench
