// Copyright 2026 The vcsplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "test_languages.hpp"
#include "vcsplab/markov.hpp"

namespace vcsplab {
namespace {

using testing_support::g2_fn;
using testing_support::language;
using testing_support::q;
using testing_support::random_submodular_language;
using testing_support::xor_fn;

FractionalOperation half_min_max(std::size_t d) {
  FractionalOperation::Terms t;
  t.emplace(min_op(d), q(1, 2));
  t.emplace(max_op(d), q(1, 2));
  return FractionalOperation(t);
}

Operation pair_of(const Operation& g1, const Operation& g2) {
  const std::size_t d = g1.domain_size();
  std::vector<Element> t;
  for (std::size_t x = 0; x < d * d; ++x) {
    t.push_back(g1.at(x));
    t.push_back(g2.at(x));
  }
  return Operation(d, 2, 2, t);
}

ValuedLanguage g2_only() { return language(2, {{"g2", g2_fn()}}); }

// Sink SCC membership from the transitive closure: v is recurrent iff every
// vertex reachable from v reaches v back.
std::vector<std::size_t> recurrent_oracle(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) {
    r[v][v] = true;
    for (auto w : adj[v]) r[v][w] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n; ++v) {
    bool rec = true;
    for (std::size_t w = 0; w < n; ++w)
      if (r[v][w] && !r[w][v]) rec = false;
    if (rec) out.push_back(v);
  }
  return out;
}

// Absorbed mass per recurrent vertex set from one dense solve over all
// transient states.
std::map<std::size_t, Rational> absorbed_mass_oracle(const OperationGraph& g, const std::vector<std::size_t>& recurrent) {
  const auto p = markov_transitions(g);
  const std::size_t n = g.vertices.size();
  std::vector<bool> is_rec(n, false);
  for (auto v : recurrent) is_rec[v] = true;
  std::vector<std::size_t> trans;
  for (std::size_t v = 0; v < n; ++v)
    if (!is_rec[v]) trans.push_back(v);
  std::vector<Rational> sigma(n);
  for (const auto& [h, s] : g.edges[0]) sigma[s] += g.seed.weight(g.steps[h]);
  std::vector<Rational> x;
  if (!trans.empty()) {
    const std::size_t k = trans.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i][i] += 1;
      b[i] = sigma[trans[i]];
      for (std::size_t j = 0; j < k; ++j)
        if (auto it = p[trans[j]].find(trans[i]); it != p[trans[j]].end()) a[i][j] -= it->second;
    }
    x = detail::solve_square(a, b);
  }
  std::map<std::size_t, Rational> mass;
  for (auto v : recurrent) {
    mass[v] = sigma[v];
    for (std::size_t i = 0; i < trans.size(); ++i)
      if (auto it = p[trans[i]].find(v); it != p[trans[i]].end()) mass[v] += x[i] * it->second;
  }
  return mass;
}

TEST(StepTest, BinaryStepFromIdentity) {
  const Operation one = Operation::identity(2, 2);
  EXPECT_EQ(binary_step(one, min_op(2)), pair_of(min_op(2), min_op(2)));
  EXPECT_EQ(binary_step(one, Operation::projection(2, 2, 0)), one);
}

TEST(StepTest, LiftStepFromIdentity) {
  const Operation one = Operation::identity(2, 3);
  const Operation s = lift_step(one, min_op(2));
  // Component j is min over the two other arguments.
  TupleCounter c(3, 2);
  do {
    const std::size_t x = tuple_index(c.tuple(), 2);
    EXPECT_EQ(s.at(x, 0), std::min(c.tuple()[1], c.tuple()[2]));
    EXPECT_EQ(s.at(x, 1), std::min(c.tuple()[0], c.tuple()[2]));
    EXPECT_EQ(s.at(x, 2), std::min(c.tuple()[0], c.tuple()[1]));
  } while (c.next());
}

TEST(ClosureGraphTest, MinMaxOnBoolean) {
  const OperationGraph g = build_closure_graph(half_min_max(2));
  EXPECT_LE(g.vertices.size(), 256u);
  EXPECT_EQ(g.vertices[0], Operation::identity(2, 2));
  EXPECT_EQ(g.vertices.size(), 3u);
  const Operation mm = pair_of(min_op(2), min_op(2)), xx = pair_of(max_op(2), max_op(2));
  EXPECT_NE(std::find(g.vertices.begin(), g.vertices.end(), mm), g.vertices.end());
  EXPECT_NE(std::find(g.vertices.begin(), g.vertices.end(), xx), g.vertices.end());
}

TEST(ClosureGraphTest, ProjectionStaysAtIdentity) {
  const OperationGraph g = build_closure_graph(FractionalOperation::indicator(Operation::projection(3, 2, 0)));
  ASSERT_EQ(g.vertices.size(), 1u);
  EXPECT_EQ(g.edges[0], (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}}));
}

TEST(ClosureGraphTest, PairedFormAndSymmetricSteps) {
  std::mt19937 rng(73);
  std::uniform_int_distribution<int> v(0, 2);
  for (int it = 0; it < 10; ++it) {
    std::vector<Element> t(9);
    for (Element x = 0; x < 3; ++x)
      for (Element y = x; y < 3; ++y) t[static_cast<std::size_t>(x * 3 + y)] = t[static_cast<std::size_t>(y * 3 + x)] = v(rng);
    const Operation h(3, 2, 1, t);
    const OperationGraph g = build_closure_graph(FractionalOperation::indicator(h));
    for (std::size_t k = 1; k < g.vertices.size(); ++k)
      for (std::size_t x = 0; x < 9; ++x) EXPECT_EQ(g.vertices[k].at(x, 0), g.vertices[k].at(x, 1));
  }
  // Every vertex is (g, g-bar) for a general w.
  FractionalOperation::Terms w;
  w.emplace(min_op(3), q(1, 3));
  w.emplace(Operation::projection(3, 2, 1), q(2, 3));
  const OperationGraph g = build_closure_graph(FractionalOperation(w));
  for (const auto& vx : g.vertices)
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y) EXPECT_EQ(vx.at(x * 3 + y, 1), vx.at(y * 3 + x, 0));
}

TEST(ClosureGraphTest, CapIsEnforced) {
  Caps caps = Caps::desk();
  caps.closure = 2;
  EXPECT_THROW(build_closure_graph(half_min_max(2), caps), CapExceeded);
  EXPECT_THROW(build_closure_graph(FractionalOperation::indicator(Operation::identity(2, 2))), std::invalid_argument);
}

TEST(RecurrentStatesTest, SmallGraphs) {
  EXPECT_EQ(recurrent_states(std::vector<std::vector<std::size_t>>{{0}}), (std::vector<std::size_t>{0}));
  EXPECT_EQ(recurrent_states(std::vector<std::vector<std::size_t>>{{0, 1}, {1}}), (std::vector<std::size_t>{1}));
  const OperationGraph g = build_closure_graph(half_min_max(2));
  const auto rec = recurrent_states(g);
  EXPECT_EQ(std::find(rec.begin(), rec.end(), 0u), rec.end());
  EXPECT_EQ(rec.size(), 2u);
}

TEST(RecurrentStatesTest, AgreesWithReachabilityOracle) {
  std::mt19937 rng(79);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + it % 12;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1), deg(0, 3);
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto& a : adj) {
      const std::size_t k = deg(rng);
      for (std::size_t e = 0; e < k; ++e) a.push_back(pick(rng));
    }
    EXPECT_EQ(recurrent_states(adj), recurrent_oracle(adj)) << it;
    const SccDecomposition scc = strongly_connected(adj);
    // Sources-first order: no edge goes to an earlier component.
    std::vector<std::size_t> rank(scc.members.size());
    for (std::size_t i = 0; i < scc.order.size(); ++i) rank[scc.order[i]] = i;
    for (std::size_t v = 0; v < n; ++v)
      for (auto w : adj[v]) EXPECT_LE(rank[scc.component[v]], rank[scc.component[w]]);
  }
}

TEST(MarkovChainTest, LazyRows) {
  const OperationGraph g = build_closure_graph(half_min_max(3));
  const auto p = markov_transitions(g);
  for (std::size_t v = 0; v < p.size(); ++v) {
    Rational s = 0;
    for (const auto& [j, x] : p[v]) s += x;
    EXPECT_EQ(s, 1);
    EXPECT_GE(p[v].at(v), q(1, 2));
  }
}

TEST(StationaryRhoTest, SymmetricIdempotentIsAbsorbing) {
  const RhoResult r = stationary_rho(g2_only(), FractionalOperation::indicator(min_op(2)));
  EXPECT_EQ(r.rho, FractionalOperation::indicator(pair_of(min_op(2), min_op(2))));
}

TEST(StationaryRhoTest, ProjectionGivesIdentity) {
  const RhoResult r = stationary_rho(ValuedLanguage{Domain(2)}, FractionalOperation::indicator(Operation::projection(2, 2, 0)));
  EXPECT_EQ(r.rho, FractionalOperation::indicator(Operation::identity(2, 2)));
}

TEST(StationaryRhoTest, MinMaxOnSubmodular) {
  const RhoResult r = stationary_rho(g2_only(), half_min_max(2));
  FractionalOperation::Terms t;
  t.emplace(pair_of(min_op(2), min_op(2)), q(1, 2));
  t.emplace(pair_of(max_op(2), max_op(2)), q(1, 2));
  EXPECT_EQ(r.rho, FractionalOperation(t));
  EXPECT_EQ(r.sinks.size(), 2u);
  EXPECT_TRUE(check_fractional_polymorphism(g2_only(), r.rho).holds);
  for (const auto& g : r.rho.support())
    EXPECT_NE(std::find(r.recurrent.begin(), r.recurrent.end(),
                        static_cast<std::size_t>(std::find(r.graph.vertices.begin(), r.graph.vertices.end(), g) -
                                                 r.graph.vertices.begin())),
              r.recurrent.end());
}

TEST(StationaryRhoTest, AbsorptionMatchesDenseOracle) {
  std::mt19937 rng(83);
  std::uniform_int_distribution<int> bit(0, 1), wt(1, 4);
  int multi = 0;
  for (int it = 0; it < 40; ++it) {
    FractionalOperation::Terms raw;
    for (int k = 0; k < 1 + it % 3; ++k) {
      std::vector<Element> t(4);
      for (auto& e : t) e = bit(rng);
      raw[Operation(2, 2, 1, t)] += wt(rng);
    }
    const FractionalOperation w = FractionalOperation::normalized(raw);
    const RhoResult r = stationary_rho(ValuedLanguage{Domain(2)}, w);
    const auto mass = absorbed_mass_oracle(r.graph, r.recurrent);
    EXPECT_EQ(r.recurrent, recurrent_oracle(r.graph.adjacency()));
    const auto p = markov_transitions(r.graph);
    std::vector<Rational> rho(r.graph.vertices.size());
    for (std::size_t v = 0; v < rho.size(); ++v) rho[v] = r.rho.weight(r.graph.vertices[v]);
    // Stationary: rho P = rho.
    std::vector<Rational> next(rho.size());
    for (std::size_t v = 0; v < rho.size(); ++v)
      for (const auto& [j, x] : p[v]) next[j] += rho[v] * x;
    EXPECT_EQ(next, rho) << it;
    // Class masses equal the absorbed masses.
    for (const auto& sink : r.sinks) {
      Rational expect = 0, got = 0;
      for (auto v : sink.members) {
        expect += mass.at(v);
        got += rho[v];
      }
      EXPECT_EQ(got, expect) << it;
    }
    if (r.sinks.size() > 1) ++multi;
  }
  EXPECT_GT(multi, 0);
}

TEST(StationaryRhoTest, MonotoneDescentOnSubmodularLanguages) {
  std::mt19937 rng(89);
  for (int it = 0; it < 6; ++it) {
    const std::size_t d = 2 + it % 2;
    const ValuedLanguage g = random_submodular_language(rng, d, 2);
    const RhoResult r = stationary_rho(g, half_min_max(d));
    for (const auto& f : g.functions()) {
      TupleCounter c(2 * f.arity(), d);
      do {
        Tuple x1(c.tuple().begin(), c.tuple().begin() + static_cast<long>(f.arity()));
        Tuple x2(c.tuple().begin() + static_cast<long>(f.arity()), c.tuple().end());
        auto expect = [&](const FractionalOperation& w) {
          Rational s = 0;
          for (const auto& [op, wt] : w.terms()) s += wt * f_power_mean(f, apply_componentwise(op, {x1, x2}));
          return s;
        };
        EXPECT_GE(expect(r.sigma), expect(r.rho));
      } while (c.next());
    }
  }
}

TEST(ExchangePropertyTest, HoldsForSubmodularRho) {
  std::mt19937 rng(97);
  EXPECT_FALSE(check_exchange_property(g2_only(), stationary_rho(g2_only(), half_min_max(2)).rho).has_value());
  for (int it = 0; it < 4; ++it) {
    const ValuedLanguage g = random_submodular_language(rng, 3, 2);
    const RhoResult r = stationary_rho(g, half_min_max(3));
    EXPECT_FALSE(check_exchange_property(g, r.rho).has_value());
    EXPECT_TRUE(check_sink_invariance(g, r));
  }
}

TEST(ExchangePropertyTest, IdentityFailsOnSubmodular) {
  const auto v = check_exchange_property(g2_only(), FractionalOperation::indicator(Operation::identity(2, 2)));
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->function, 0u);
  EXPECT_NE(v->tuples[0][v->position], v->tuples[1][v->position]);
}

TEST(SubmodularPairsTest, Examples) {
  EXPECT_EQ(submodular_pairs(stationary_rho(g2_only(), half_min_max(2)).rho),
            (std::vector<std::pair<Element, Element>>{{0, 1}}));
  EXPECT_TRUE(submodular_pairs(FractionalOperation::indicator(Operation::identity(2, 2))).empty());
  // (min, max) sends (0,1) to (0,1): neither (0,0) nor (1,1).
  EXPECT_TRUE(submodular_pairs(FractionalOperation::indicator(pair_of(min_op(2), max_op(2)))).empty());
  FractionalOperation::Terms t;
  t.emplace(pair_of(min_op(3), min_op(3)), q(1, 2));
  t.emplace(pair_of(max_op(3), max_op(3)), q(1, 2));
  const auto e = submodular_pairs(FractionalOperation(t));
  EXPECT_EQ(e, (std::vector<std::pair<Element, Element>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_TRUE(is_connected(3, e));
  EXPECT_FALSE(is_connected(3, {{0, 1}}));
}

TEST(SymmetrizeTest, Examples) {
  const ValuedLanguage none{Domain(2)};
  EXPECT_EQ(symmetrize(none, FractionalOperation::indicator(pair_of(min_op(2), max_op(2)))), half_min_max(2));
  EXPECT_EQ(symmetrize(none, FractionalOperation::indicator(Operation::identity(2, 2))), half_min_max(2));
  const FractionalOperation w = symmetrize(g2_only(), stationary_rho(g2_only(), half_min_max(2)).rho);
  EXPECT_EQ(w, half_min_max(2));
  EXPECT_TRUE(check_fractional_polymorphism(g2_only(), w).holds);
}

TEST(SymmetrizeTest, ReportsMissingExchangeProperty) {
  EXPECT_THROW(symmetrize(g2_only(), FractionalOperation::indicator(Operation::identity(2, 2))), VerificationFailure);
}

TEST(LiftArityTest, TernaryFromMinMax) {
  const LiftResult r = lift_arity(g2_only(), half_min_max(2), 3);
  EXPECT_EQ(r.omega.in_arity(), 3u);
  for (const auto& g : r.omega.support()) EXPECT_TRUE(op_predicates(g).symmetric);
  EXPECT_TRUE(check_fractional_polymorphism(g2_only(), r.omega).holds);
  EXPECT_TRUE(check_sink_invariance(g2_only(), r.chain));
}

TEST(LiftArityTest, EmptyLanguageAndChain) {
  const ValuedLanguage none{Domain(2)};
  EXPECT_EQ(lift_arity(none, half_min_max(2), 3).omega.in_arity(), 3u);
  const FractionalOperation w4 = lift_to_arity(g2_only(), half_min_max(2), 4);
  EXPECT_EQ(w4.in_arity(), 4u);
  for (const auto& g : w4.support()) EXPECT_TRUE(op_predicates(g).symmetric);
  EXPECT_TRUE(check_fractional_polymorphism(g2_only(), w4).holds);
}

TEST(LiftArityTest, SubmodularOnThreeElements) {
  std::mt19937 rng(101);
  const ValuedLanguage g = random_submodular_language(rng, 3, 2);
  const LiftResult r = lift_arity(g, half_min_max(3), 3);
  EXPECT_TRUE(check_fractional_polymorphism(g, r.omega).holds);
}

TEST(LiftArityTest, Preconditions) {
  const ValuedLanguage x = language(2, {{"xor", xor_fn(2)}});
  EXPECT_THROW(lift_arity(x, half_min_max(2), 3), std::invalid_argument);
  EXPECT_THROW(lift_arity(g2_only(), half_min_max(2), 4), std::invalid_argument);
  EXPECT_THROW(lift_arity(g2_only(), FractionalOperation::indicator(Operation::projection(2, 2, 0)), 3), std::invalid_argument);
}

TEST(ConvexFloorTest, Cases) {
  EXPECT_TRUE(convex_floor_forces_equal({q(2), q(2)}, {q(1, 3), q(2, 3)}));
  EXPECT_FALSE(convex_floor_forces_equal({q(1), q(2)}, {q(1, 2), q(1, 2)}));
  EXPECT_THROW(convex_floor_forces_equal({q(1), q(2)}, {q(0), q(1)}), std::invalid_argument);
  EXPECT_THROW(convex_floor_forces_equal({q(1)}, {q(1, 2)}), std::invalid_argument);
}

}  // namespace
}  // namespace vcsplab
