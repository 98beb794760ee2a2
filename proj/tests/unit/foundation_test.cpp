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
#include "vcsplab/foundation.hpp"

namespace vcsplab {
namespace {

using testing_support::q;
using testing_support::xor_fn;

TEST(RationalTest, ParsesIntegersAndFractions) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("6/4"), q(3, 2));
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-0/7")), "0");
}

TEST(RationalTest, RejectsMalformedText) {
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
  EXPECT_THROW(parse_rational("0.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(RationalTest, SumAgreesWhenComputedTwoWays) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  for (int it = 0; it < 200; ++it) {
    long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    Rational direct = make_rational(a, b) + make_rational(c, d);
    Rational cross = make_rational(a * d + c * b, b * d);
    EXPECT_EQ(direct, cross);
    EXPECT_EQ(to_string(direct), to_string(cross));
    Rational again = direct;
    again.canonicalize();
    EXPECT_EQ(again, direct);
  }
}

TEST(DomainTest, ValidatesLabels) {
  EXPECT_THROW(Domain(0), std::invalid_argument);
  EXPECT_THROW(Domain(2, {"a"}), std::invalid_argument);
  EXPECT_THROW(Domain(2, {"a", "a"}), std::invalid_argument);
  Domain d(3, {"r", "g", "b"});
  EXPECT_EQ(d.label(1), "g");
  EXPECT_EQ(d.find("b"), 2);
  EXPECT_FALSE(d.find("z"));
}

TEST(TupleTest, RowMajorIndexRoundTrips) {
  const Tuple t{2, 0, 1};
  EXPECT_EQ(tuple_index(t, 3), 2u * 9 + 0 * 3 + 1);
  EXPECT_EQ(tuple_at(19, 3, 3), t);
  std::size_t count = 0;
  TupleCounter c(3, 2);
  do {
    EXPECT_EQ(tuple_index(c.tuple(), 2), count);
    ++count;
  } while (c.next());
  EXPECT_EQ(count, 8u);
}

TEST(CostFunctionTest, EvaluateReadsTable) {
  CostFunction zero = CostFunction::from_fn(2, 2, [](auto) { return Rational(0); });
  EXPECT_EQ(evaluate(zero, Tuple{0, 1}), 0);
  CostFunction x = xor_fn(2);
  EXPECT_EQ(evaluate(x, Tuple{0, 1}), 0);
  EXPECT_EQ(evaluate(x, Tuple{1, 1}), 1);
}

TEST(CostFunctionTest, EvaluateRejectsBadTuples) {
  CostFunction x = xor_fn(2);
  EXPECT_THROW(evaluate(x, Tuple{0}), std::invalid_argument);
  EXPECT_THROW(evaluate(x, Tuple{0, 2}), std::out_of_range);
  EXPECT_THROW(CostFunction(2, 1, {Rational(0)}), std::invalid_argument);
  EXPECT_THROW(CostFunction(2, 1, {Rational(0), Rational(-1)}), std::invalid_argument);
}

TEST(LanguageTest, RejectsDuplicatesAndForeignDomains) {
  ValuedLanguage g(Domain(2));
  g.add("xor", xor_fn(2));
  EXPECT_THROW(g.add("xor", xor_fn(2)), std::invalid_argument);
  EXPECT_THROW(g.add("xor3", xor_fn(3)), std::invalid_argument);
  EXPECT_EQ(g.max_arity(), 2u);
}

VcspInstance xor_instance() {
  ValuedLanguage g(Domain(2));
  g.add("xor", xor_fn(2));
  VcspInstance inst(g);
  inst.add_variable("x");
  inst.add_variable("y");
  inst.add_variable("z");
  return inst;
}

TEST(InstanceTest, ValueSumsWeightedTerms) {
  VcspInstance one = xor_instance();
  one.add_constraint(1, "xor", {"x", "y"});
  EXPECT_EQ(instance_value(one, {0, 1, 0}), 0);
  EXPECT_EQ(instance_value(one, {0, 0, 0}), 1);

  VcspInstance two = xor_instance();
  two.add_constraint(q(1, 2), "xor", {"x", "y"});
  two.add_constraint(3, "xor", {"y", "z"});
  EXPECT_EQ(instance_value(two, {0, 0, 1}), q(1, 2));
}

TEST(InstanceTest, RejectsPartialAssignmentsAndBadScopes) {
  VcspInstance inst = xor_instance();
  inst.add_constraint(1, "xor", {"x", "y"});
  EXPECT_THROW(instance_value(inst, {0, 1}), std::invalid_argument);
  EXPECT_THROW(inst.add_constraint(1, "xor", {"x"}), std::invalid_argument);
  EXPECT_THROW(inst.add_constraint(1, "xor", {"x", "w"}), std::invalid_argument);
  EXPECT_THROW(inst.add_constraint(-1, "xor", {"x", "y"}), std::invalid_argument);
}

TEST(InstanceTest, ValueIsLinearInWeights) {
  std::mt19937 rng(11);
  for (int it = 0; it < 50; ++it) {
    ValuedLanguage g = testing_support::random_language(rng, 3, 2, 2);
    VcspInstance inst = testing_support::random_instance(rng, g, 4, 5);
    VcspInstance scaled(g);
    for (const auto& v : inst.variables()) scaled.add_variable(v);
    const Rational factor = q(7, 3);
    for (const auto& c : inst.constraints()) scaled.add_constraint(c.weight * factor, c.function, c.scope);
    Assignment h(inst.num_variables());
    for (auto& e : h) e = static_cast<Element>(rng() % 3);
    EXPECT_EQ(instance_value(scaled, h), factor * instance_value(inst, h));
  }
}

TEST(OperationTest, ApplyComponentwise) {
  const std::vector<Tuple> a{{0, 1}, {1, 1}};
  EXPECT_EQ(apply_componentwise(min_op(2), a), (std::vector<Tuple>{{0, 1}}));

  const std::vector<Tuple> b{{0, 1}, {1, 0}};
  EXPECT_EQ(apply_componentwise(Operation::identity(2, 2), b), b);

  Operation minmax = Operation::from_fn(2, 2, 2, [](std::span<const Element> t) {
    return Tuple{std::min(t[0], t[1]), std::max(t[0], t[1])};
  });
  EXPECT_EQ(apply_componentwise(minmax, b), (std::vector<Tuple>{{0, 0}, {1, 1}}));
}

TEST(OperationTest, IdentityPreservesRandomFamilies) {
  std::mt19937 rng(3);
  for (std::size_t m = 1; m <= 3; ++m) {
    std::vector<Tuple> fam(m, Tuple(5));
    for (auto& t : fam)
      for (auto& e : t) e = static_cast<Element>(rng() % 3);
    EXPECT_EQ(apply_componentwise(Operation::identity(3, m), fam), fam);
  }
}

TEST(OperationTest, Predicates) {
  OpFlags mn = op_predicates(min_op(2));
  EXPECT_TRUE(mn.idempotent);
  EXPECT_TRUE(mn.symmetric);
  EXPECT_TRUE(mn.cyclic);
  EXPECT_FALSE(mn.injective);

  OpFlags p1 = op_predicates(Operation::projection(2, 2, 0));
  EXPECT_TRUE(p1.idempotent);
  EXPECT_FALSE(p1.symmetric);

  OpFlags c0 = op_predicates(Operation(2, 1, 1, {0, 0}));
  ASSERT_TRUE(c0.injective.has_value());
  EXPECT_FALSE(*c0.injective);
  EXPECT_FALSE(c0.idempotent);

  EXPECT_THROW(op_predicates(Operation::identity(2, 2)), std::invalid_argument);
}

TEST(OperationTest, CyclicButNotSymmetricTernary) {
  // 1 exactly on the cyclic rotations of (0,1,2).
  Operation g = Operation::from_fn(3, 3, 1, [](std::span<const Element> t) {
    if (t[0] == t[1] && t[1] == t[2]) return Tuple{t[0]};
    int asc = 0;
    for (int i = 0; i < 3; ++i) asc += (t[(i + 1) % 3] - t[i] + 3) % 3 == 1;
    return Tuple{asc == 3 ? 1 : 0};
  });
  OpFlags f = op_predicates(g);
  EXPECT_TRUE(f.cyclic);
  EXPECT_FALSE(f.symmetric);
}

TEST(FractionalOperationTest, ValidatesWeights) {
  FractionalOperation::Terms t;
  t.emplace(min_op(2), q(1, 2));
  t.emplace(max_op(2), q(1, 3));
  EXPECT_THROW(FractionalOperation{t}, std::invalid_argument);
  t[max_op(2)] = q(1, 2);
  FractionalOperation w(t);
  EXPECT_EQ(w.support_size(), 2u);
  EXPECT_EQ(w.weight(min_op(2)), q(1, 2));
  EXPECT_EQ(w.weight(Operation::projection(2, 2, 0)), 0);

  FractionalOperation::Terms raw;
  raw.emplace(min_op(2), 3);
  raw.emplace(max_op(2), 1);
  raw.emplace(Operation::projection(2, 2, 1), 0);
  FractionalOperation n = FractionalOperation::normalized(raw);
  EXPECT_EQ(n.support_size(), 2u);
  EXPECT_EQ(n.weight(min_op(2)), q(3, 4));

  FractionalOperation::Terms mixed;
  mixed.emplace(min_op(2), q(1, 2));
  mixed.emplace(Operation(2, 1, 1, {0, 1}), q(1, 2));
  EXPECT_THROW(FractionalOperation{mixed}, std::invalid_argument);
}

}  // namespace
}  // namespace vcsplab
