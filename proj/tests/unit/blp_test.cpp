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
#include "vcsplab/blp.hpp"
#include "vcsplab/classifier.hpp"

namespace vcsplab {
namespace {

using testing_support::g2_fn;
using testing_support::g2_u0_u1;
using testing_support::language;
using testing_support::q;
using testing_support::random_instance;
using testing_support::random_language;
using testing_support::random_submodular_language;
using testing_support::unary;
using testing_support::xor_fn;

VcspInstance single(const ValuedLanguage& g, std::vector<std::string> vars, std::size_t f,
                    std::vector<std::size_t> scope) {
  VcspInstance inst(g);
  for (auto& v : vars) inst.add_variable(v);
  inst.add_constraint(1, f, std::move(scope));
  return inst;
}

VcspInstance xor_triangle() {
  VcspInstance inst(language(2, {{"xor", xor_fn(2)}}));
  for (auto v : {"x", "y", "z"}) inst.add_variable(v);
  inst.add_constraint(1, 0, {0, 1});
  inst.add_constraint(1, 0, {1, 2});
  inst.add_constraint(1, 0, {2, 0});
  return inst;
}

// Objective recomputed from lambda by evaluating each local map directly.
Rational objective_from_lambda(const VcspInstance& inst, const BlpSolution& s) {
  const std::size_t d = inst.domain_size();
  Rational total = 0;
  for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
    const Constraint& c = inst.constraints()[i];
    const auto& vars = s.scope_vars[i];
    for (std::size_t k = 0; k < s.lambda[i].size(); ++k) {
      Tuple local = tuple_at(k, vars.size(), d), arg;
      for (auto v : c.scope) arg.push_back(local[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin())]);
      total += c.weight * inst.language().function(c.function)(arg) * s.lambda[i][k];
    }
  }
  return total;
}

TEST(BuildBlpTest, UnaryCounts) {
  const BlpProgram bp = build_blp(single(language(3, {{"u", unary({q(0), q(1), q(2)})}}), {"x"}, 0, {0}));
  EXPECT_EQ(bp.program.num_vars, 6u);
  EXPECT_EQ(bp.layout.lambda_count(0), 3u);
  EXPECT_EQ(bp.program.rows.size(), 3u + 1u);
}

TEST(BuildBlpTest, BinaryDistinctCounts) {
  const BlpProgram bp = build_blp(single(language(2, {{"xor", xor_fn(2)}}), {"x", "y"}, 0, {0, 1}));
  EXPECT_EQ(bp.program.num_vars, 8u);
  // One marginal row per (scope variable, value) and one normalization row per variable.
  EXPECT_EQ(bp.program.rows.size(), 4u + 2u);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_EQ(bp.program.lower[j], Rational(0));
    EXPECT_EQ(bp.program.upper[j], Rational(1));
  }
}

TEST(BuildBlpTest, RepeatedVariableCollapses) {
  const BlpProgram bp = build_blp(single(language(2, {{"xor", xor_fn(2)}}), {"x"}, 0, {0, 0}));
  EXPECT_EQ(bp.layout.lambda_count(0), 2u);
  EXPECT_EQ(bp.program.num_vars, 4u);
  EXPECT_EQ(bp.program.rows.size(), 2u + 1u);
  // xor(x,x) = 1 on both local maps.
  EXPECT_EQ(bp.program.objective[2], 1);
  EXPECT_EQ(bp.program.objective[3], 1);
  EXPECT_EQ(solve_blp(single(language(2, {{"xor", xor_fn(2)}}), {"x"}, 0, {0, 0})).value, 1);
}

TEST(BuildBlpTest, CapOnLocalMaps) {
  Caps caps = Caps::desk();
  caps.states = 7;
  EXPECT_THROW(build_blp(single(language(2, {{"f", CostFunction(2, 3, std::vector<Rational>(8, q(0)))}}), {"a", "b", "c"},
                                0, {0, 1, 2}),
                         caps),
               CapExceeded);
}

TEST(SolveBlpTest, UnaryExample) {
  const BlpSolution s = solve_blp(single(language(2, {{"u", unary({q(0), q(3)})}}), {"x"}, 0, {0}));
  EXPECT_EQ(s.value, 0);
  EXPECT_EQ(s.mu[0][0], 1);
  EXPECT_TRUE(s.integral);
}

TEST(SolveBlpTest, SingleXorIsIntegral) {
  const BlpSolution s = solve_blp(single(language(2, {{"xor", xor_fn(2)}}), {"x", "y"}, 0, {0, 1}));
  EXPECT_EQ(s.value, 0);
  EXPECT_TRUE(s.integral);
}

TEST(SolveBlpTest, FrustratedTriangleHasGap) {
  const VcspInstance inst = xor_triangle();
  const BlpSolution s = solve_blp(inst);
  EXPECT_EQ(s.value, 0);
  EXPECT_EQ(brute_force_solve(inst).value, 1);
  EXPECT_FALSE(s.integral);
  for (const auto& m : s.mu) EXPECT_EQ(m, (std::vector<Rational>{q(1, 2), q(1, 2)}));
  EXPECT_THROW(extract_assignment(inst), VerificationFailure);
}

TEST(SolveBlpTest, LowerBoundOnRandomInstances) {
  std::mt19937 rng(61);
  int gaps = 0;
  for (int it = 0; it < 60; ++it) {
    const std::size_t d = 2 + it % 2;
    const ValuedLanguage g = random_language(rng, d, 3, 3);
    const VcspInstance inst = random_instance(rng, g, 2 + it % 4, 1 + it % 6);
    const BlpSolution s = solve_blp(inst);
    const Rational opt = brute_force_solve(inst).value;
    EXPECT_LE(s.value, opt) << it;
    EXPECT_EQ(objective_from_lambda(inst, s), s.value) << it;
    if (s.value < opt) ++gaps;
    if (s.integral) {
      Assignment h;
      for (const auto& m : s.mu) h.push_back(static_cast<Element>(std::find(m.begin(), m.end(), Rational(1)) - m.begin()));
      EXPECT_EQ(instance_value(inst, h), s.value) << it;
    }
  }
  EXPECT_GT(gaps, 0);
}

TEST(SolveBlpTest, EmptyInstance) {
  VcspInstance inst(language(2, {{"xor", xor_fn(2)}}));
  EXPECT_EQ(solve_blp(inst).value, 0);
  EXPECT_EQ(brute_force_solve(inst).value, 0);
}

TEST(ExtractAssignmentTest, UnaryExample) {
  const ExactSolution s = extract_assignment(single(language(2, {{"u", unary({q(0), q(3)})}}), {"x"}, 0, {0}));
  EXPECT_EQ(s.assignment, (Assignment{0}));
  EXPECT_EQ(s.value, 0);
}

TEST(ExtractAssignmentTest, SubmodularPair) {
  const ExactSolution s = extract_assignment(single(language(2, {{"g2", g2_fn()}}), {"x", "y"}, 0, {0, 1}));
  EXPECT_EQ(s.assignment, (Assignment{0, 0}));
  EXPECT_EQ(s.value, 0);
}

TEST(ExtractAssignmentTest, RandomSubmodularMatchesBruteForce) {
  std::mt19937 rng(67);
  const ValuedLanguage g = g2_u0_u1();
  for (int it = 0; it < 25; ++it) {
    const VcspInstance inst = random_instance(rng, g, 2 + it % 5, 2 + it % 7);
    const Rational blp = solve_blp(inst).value;
    const ExactSolution e = extract_assignment(inst);
    EXPECT_EQ(blp, brute_force_solve(inst).value) << it;
    EXPECT_EQ(e.value, blp) << it;
    EXPECT_EQ(instance_value(inst, e.assignment), blp) << it;
  }
}

TEST(BlpExactnessTest, TractableLanguagesOnThreeElements) {
  std::mt19937 rng(71);
  for (int it = 0; it < 5; ++it) {
    const ValuedLanguage g = random_submodular_language(rng, 3, 3);
    ASSERT_TRUE(is_core(g).is_core);
    ASSERT_TRUE(tractability_lp(g, Caps::desk(), false).has_value());
    for (int k = 0; k < 8; ++k) {
      const VcspInstance inst = random_instance(rng, g, 2 + k % 4, 2 + k % 5);
      EXPECT_EQ(solve_blp(inst).value, brute_force_solve(inst).value) << it << "/" << k;
    }
  }
}

TEST(BruteForceTest, XorTieBreak) {
  const ExactSolution s = brute_force_solve(single(language(2, {{"xor", xor_fn(2)}}), {"x", "y"}, 0, {0, 1}));
  EXPECT_EQ(s.assignment, (Assignment{0, 1}));
  EXPECT_EQ(s.value, 0);
}

}  // namespace
}  // namespace vcsplab
