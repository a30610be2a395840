#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "containerbench/combinatorics.hpp"
#include "containerbench/errors.hpp"
#include "containerbench/graph.hpp"
#include "containerbench/rational.hpp"
#include "containerbench/vertex_set.hpp"

namespace cbench {

using Tuple = std::vector<int>;

/// One predicate over a sorted scope, stored as the set of falsifying tuples
/// (tuple[i] is the value of scope[i]).
struct Constraint {
  std::vector<int> scope;
  std::set<Tuple> falsifying;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

inline constexpr int kUnassigned = -1;

/// Partial or total assignment; values[x] == kUnassigned when x is free.
struct Assignment {
  std::vector<int> values;

  Assignment() = default;
  explicit Assignment(std::size_t n) : values(n, kUnassigned) {}
  explicit Assignment(std::vector<int> v) : values(std::move(v)) {}

  bool assigned(int x) const { return values.at(x) != kUnassigned; }
  bool total() const {
    return std::none_of(values.begin(), values.end(), [](int v) { return v == kUnassigned; });
  }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// q-uniform CSP over n variables with alphabet 0..k-1, in the normal form of
/// at most one constraint per scope. Immutable after construction.
class Csp {
 public:
  Csp() = default;

  /// Predicates sharing a scope are merged by union of their falsifying sets.
  /// Scopes may be given in any order; tuples are permuted along with them.
  Csp(std::size_t n, std::size_t k, std::size_t q, const std::vector<Constraint>& constraints)
      : n_(n), k_(k), q_(q) {
    if (k_ < 1) throw PreconditionError("alphabet size must be positive");
    if (q_ < 1) throw PreconditionError("arity must be positive");
    std::map<std::vector<int>, std::set<Tuple>> merged;
    for (const auto& c : constraints) {
      if (c.scope.size() != q_)
        throw PreconditionError("constraint scope of size " + std::to_string(c.scope.size()) +
                                " in a " + std::to_string(q_) + "-uniform CSP");
      std::vector<std::size_t> order(q_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.scope[a] < c.scope[b]; });
      std::vector<int> scope(q_);
      for (std::size_t i = 0; i < q_; ++i) scope[i] = c.scope[order[i]];
      if (std::adjacent_find(scope.begin(), scope.end()) != scope.end())
        throw PreconditionError("constraint scope repeats a variable");
      if (scope.front() < 0 || static_cast<std::size_t>(scope.back()) >= n_)
        throw PreconditionError("constraint scope variable outside 0.." + std::to_string(n_) + "-1");
      auto& target = merged[scope];
      for (const auto& t : c.falsifying) {
        if (t.size() != q_) throw PreconditionError("falsifying tuple of wrong length");
        Tuple sorted(q_);
        for (std::size_t i = 0; i < q_; ++i) {
          auto value = t[order[i]];
          if (value < 0 || static_cast<std::size_t>(value) >= k_)
            throw PreconditionError("tuple value " + std::to_string(value) + " outside alphabet");
          sorted[i] = value;
        }
        target.insert(std::move(sorted));
      }
    }
    for (auto& [scope, falsifying] : merged) constraints_.push_back({scope, std::move(falsifying)});
    index();
  }

  std::size_t variable_count() const { return n_; }
  std::size_t alphabet_size() const { return k_; }
  std::size_t arity() const { return q_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::size_t constraint_count() const { return constraints_.size(); }

  /// Whether constraint i is falsified by a tuple (values in scope order).
  bool falsifies(std::size_t i, const int* values) const {
    std::size_t code = 0;
    for (std::size_t j = q_; j-- > 0;) code = code * k_ + static_cast<std::size_t>(values[j]);
    return table_[i][code] != 0;
  }

  /// Constraint indices whose largest scope variable is x.
  const std::vector<std::size_t>& closing_at(int x) const { return closing_.at(x); }

  friend bool operator==(const Csp& a, const Csp& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.q_ == b.q_ && a.constraints_ == b.constraints_;
  }

 private:
  void index() {
    closing_.assign(n_, {});
    table_.clear();
    std::size_t width = 1;
    for (std::size_t i = 0; i < q_; ++i) width *= k_;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      std::vector<char> row(width, 0);
      for (const auto& t : constraints_[i].falsifying) {
        std::size_t code = 0;
        for (std::size_t j = q_; j-- > 0;) code = code * k_ + static_cast<std::size_t>(t[j]);
        row[code] = 1;
      }
      table_.push_back(std::move(row));
      closing_[constraints_[i].scope.back()].push_back(i);
    }
  }

  std::size_t n_ = 0, k_ = 2, q_ = 2;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<char>> table_;
  std::vector<std::vector<std::size_t>> closing_;
};

struct Restricted {
  Csp csp;
  std::vector<int> original;  // new variable index -> variable of the parent
};

/// phi[S]: the constraints whose scope lies inside S, over S reindexed in
/// increasing order.
inline Restricted restrict_to(const Csp& phi, const std::vector<int>& subset) {
  std::vector<int> vars = subset;
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<int> local(phi.variable_count(), -1);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] < 0 || static_cast<std::size_t>(vars[i]) >= phi.variable_count())
      throw PreconditionError("restriction variable " + std::to_string(vars[i]) + " out of range");
    local[vars[i]] = static_cast<int>(i);
  }
  std::vector<Constraint> kept;
  for (const auto& c : phi.constraints()) {
    if (std::any_of(c.scope.begin(), c.scope.end(), [&](int x) { return local[x] < 0; })) continue;
    Constraint r{{}, c.falsifying};
    for (int x : c.scope) r.scope.push_back(local[x]);
    kept.push_back(std::move(r));
  }
  return {Csp(vars.size(), phi.alphabet_size(), phi.arity(), kept), vars};
}

struct CspOracleConfig {
  std::uint64_t assignment_cap = std::uint64_t{1} << 24;
};

namespace detail {

inline void check_assignment_cap(const Csp& phi, const CspOracleConfig& cfg) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < phi.variable_count(); ++i) {
    total *= phi.alphabet_size();
    if (total > cfg.assignment_cap)
      throw CapExceeded("k^n = " + std::to_string(phi.alphabet_size()) + "^" +
                        std::to_string(phi.variable_count()) + " exceeds the assignment cap of " +
                        std::to_string(cfg.assignment_cap));
  }
}

inline int falsified_closing_at(const Csp& phi, const std::vector<int>& values, int x) {
  int count = 0;
  int tuple[16];
  for (auto i : phi.closing_at(x)) {
    const auto& scope = phi.constraints()[i].scope;
    for (std::size_t j = 0; j < scope.size(); ++j) tuple[j] = values[scope[j]];
    count += phi.falsifies(i, tuple);
  }
  return count;
}

}  // namespace detail

/// Number of constraints with scope inside dom(A) that A falsifies.
inline std::size_t count_falsified(const Csp& phi, const Assignment& a) {
  std::size_t count = 0;
  std::vector<int> tuple(phi.arity());
  for (std::size_t i = 0; i < phi.constraint_count(); ++i) {
    const auto& scope = phi.constraints()[i].scope;
    bool inside = true;
    for (std::size_t j = 0; j < scope.size() && inside; ++j) {
      if (!a.assigned(scope[j])) inside = false;
      else tuple[j] = a.values[scope[j]];
    }
    if (inside) count += phi.falsifies(i, tuple.data());
  }
  return count;
}

struct SatResult {
  bool satisfiable = false;
  std::optional<Assignment> witness;
};

/// Exhaustive backtracking over all k^n assignments in lexicographic order,
/// rejecting a prefix as soon as a fully assigned constraint is falsified.
/// The witness is the lexicographically smallest satisfying assignment.
inline SatResult is_satisfiable(const Csp& phi, const CspOracleConfig& cfg = {}) {
  if (phi.arity() > 16) throw PreconditionError("arity above 16 is not supported");
  detail::check_assignment_cap(phi, cfg);
  const int n = static_cast<int>(phi.variable_count());
  const int k = static_cast<int>(phi.alphabet_size());
  std::vector<int> values(n, 0);
  if (n == 0) return {true, Assignment(values)};
  int x = 0;
  values[0] = 0;
  while (x >= 0) {
    if (values[x] >= k) {
      values[x] = 0;
      --x;
      if (x >= 0) ++values[x];
      continue;
    }
    if (detail::falsified_closing_at(phi, values, x) == 0) {
      if (x == n - 1) return {true, Assignment(values)};
      ++x;
      values[x] = 0;
    } else {
      ++values[x];
    }
  }
  return {false, std::nullopt};
}

struct SatDistance {
  std::size_t min_falsified = 0;
  Rational distance;
  Assignment witness;  // lexicographically smallest minimiser
};

/// Minimum number of falsified constraints over all total assignments, found
/// by depth-first search that prunes prefixes already at the incumbent count.
inline SatDistance distance_to_sat(const Csp& phi, const CspOracleConfig& cfg = {}) {
  if (phi.arity() > 16) throw PreconditionError("arity above 16 is not supported");
  detail::check_assignment_cap(phi, cfg);
  const int n = static_cast<int>(phi.variable_count());
  const int k = static_cast<int>(phi.alphabet_size());
  const auto denom = binomial(n, static_cast<std::int64_t>(phi.arity()));
  std::vector<int> values(n, 0);
  if (n == 0) return {0, Rational(0), Assignment(values)};

  std::size_t best = phi.constraint_count() + 1;
  std::vector<int> best_values;
  std::vector<std::size_t> prefix(n + 1, 0);
  int x = 0;
  values[0] = 0;
  while (x >= 0) {
    if (values[x] >= k) {
      values[x] = 0;
      --x;
      if (x >= 0) ++values[x];
      continue;
    }
    prefix[x + 1] = prefix[x] + static_cast<std::size_t>(detail::falsified_closing_at(phi, values, x));
    if (prefix[x + 1] >= best) {
      ++values[x];
      continue;
    }
    if (x == n - 1) {
      best = prefix[n];
      best_values = values;
      if (best == 0) break;
      ++values[x];
    } else {
      ++x;
      values[x] = 0;
    }
  }
  return {best, denom > 0 ? Rational(static_cast<std::int64_t>(best), denom) : Rational(0),
          Assignment(best_values)};
}

/// phi is epsilon-far from satisfiable iff minFalsified >= epsilon * C(n,q).
inline bool is_far_from_sat(const SatDistance& d, const Csp& phi, const Rational& epsilon) {
  auto denom = binomial(static_cast<std::int64_t>(phi.variable_count()), static_cast<std::int64_t>(phi.arity()));
  return Rational(static_cast<std::int64_t>(d.min_falsified)) >= epsilon * denom;
}

/// The k*n-vertex labelled hypergraph whose edges are the falsifying tuples of
/// every constraint; vertex (x, a) has index x*k + a.
inline Hypergraph build_hypergraph(const Csp& phi) {
  const auto k = static_cast<int>(phi.alphabet_size());
  std::vector<Label> labels;
  for (int x = 0; x < static_cast<int>(phi.variable_count()); ++x)
    for (int a = 0; a < k; ++a) labels.push_back({x, a});
  std::vector<Edge> edges;
  for (const auto& c : phi.constraints())
    for (const auto& t : c.falsifying) {
      Edge e;
      for (std::size_t j = 0; j < c.scope.size(); ++j) e.push_back(c.scope[j] * k + t[j]);
      edges.push_back(std::move(e));
    }
  return Hypergraph(phi.arity(), phi.variable_count() * phi.alphabet_size(), std::move(edges),
                    std::move(labels));
}

/// Number of distinct variables among the labels of U.
inline std::size_t vars(const Hypergraph& h, const VertexSet& u) {
  if (!h.labelled()) throw PreconditionError("vars() needs a labelled hypergraph");
  std::set<int> seen;
  u.for_each([&](Vertex v) { seen.insert(h.label(v).variable); });
  return seen.size();
}

inline VertexSet assignment_vertex_set(const Csp& phi, const Assignment& a) {
  const auto k = static_cast<int>(phi.alphabet_size());
  VertexSet s(phi.variable_count() * phi.alphabet_size());
  for (int x = 0; x < static_cast<int>(a.values.size()); ++x)
    if (a.assigned(x)) s.insert(x * k + a.values[x]);
  return s;
}

/// Inverse of assignment_vertex_set; U must name each variable at most once.
inline Assignment assignment_from_vertex_set(const Csp& phi, const VertexSet& u) {
  const auto k = static_cast<int>(phi.alphabet_size());
  Assignment a(phi.variable_count());
  u.for_each([&](Vertex v) {
    int x = v / k;
    if (a.assigned(x))
      throw PreconditionError("vertex set assigns variable " + std::to_string(x) + " twice");
    a.values[x] = v % k;
  });
  return a;
}

}  // namespace cbench
