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

// Fixture languages and random generators shared by the unit tests.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <random>
#include <string>

#include "vcsplab/foundation.hpp"

namespace vcsplab::testing_support {

inline Rational q(long n, long d = 1) { return make_rational(n, d); }

// 0 when the two arguments differ, 1 otherwise.
inline CostFunction xor_fn(std::size_t d) {
  return CostFunction::from_fn(d, 2, [](std::span<const Element> t) { return Rational(t[0] == t[1] ? 1 : 0); });
}

// g2(0,0)=0, g2(0,1)=g2(1,0)=g2(1,1)=1 on {0,1}.
inline CostFunction g2_fn() { return CostFunction(2, 2, {q(0), q(1), q(1), q(1)}); }

inline CostFunction unary(std::vector<Rational> values) {
  const std::size_t d = values.size();
  return CostFunction(d, 1, std::move(values));
}

inline ValuedLanguage language(std::size_t d, std::vector<std::pair<std::string, CostFunction>> fns) {
  ValuedLanguage g{Domain(d)};
  for (auto& [n, f] : fns) g.add(n, f);
  return g;
}

inline ValuedLanguage xor_u0_u1() {
  return language(2, {{"xor", xor_fn(2)}, {"u0", unary({q(0), q(1)})}, {"u1", unary({q(1), q(0)})}});
}

inline ValuedLanguage g2_u0_u1() {
  return language(2, {{"g2", g2_fn()}, {"u0", unary({q(0), q(1)})}, {"u1", unary({q(1), q(0)})}});
}

inline CostFunction random_function(std::mt19937& rng, std::size_t d, std::size_t arity, int max_value = 4) {
  std::uniform_int_distribution<int> v(0, max_value);
  return CostFunction::from_fn(d, arity, [&](auto) { return Rational(v(rng)); });
}

inline ValuedLanguage random_language(std::mt19937& rng, std::size_t d, std::size_t count,
                                      std::size_t max_arity, int max_value = 4) {
  ValuedLanguage g{Domain(d)};
  std::uniform_int_distribution<std::size_t> ar(1, max_arity);
  for (std::size_t i = 0; i < count; ++i) g.add("f" + std::to_string(i), random_function(rng, d, ar(rng), max_value));
  return g;
}

// h(t) for t in -(d-1)..d-1 with nondecreasing random slopes, shifted to a
// minimum of 0; f(x,y) = h(x - y) is then submodular on the chain 0 < ... < d-1.
inline std::vector<Rational> random_convex(std::mt19937& rng, std::size_t d) {
  std::uniform_int_distribution<int> step(0, 2), start(-3, 1);
  std::vector<Rational> h{Rational(0)};
  int slope = start(rng);
  for (std::size_t k = 1; k < 2 * d - 1; ++k) {
    h.push_back(h.back() + slope);
    slope += step(rng);
  }
  const Rational low = *std::min_element(h.begin(), h.end());
  for (auto& v : h) v -= low;
  return h;
}

// A core language on the chain 0 < ... < d-1 with the binary fractional
// polymorphism 1/2 min + 1/2 max: the distance unaries |x - a| for every a,
// plus `count` random functions that are random unaries, h(x - y) or
// h1(x - y) + h2(y - z) with h, h1, h2 convex.
inline ValuedLanguage random_submodular_language(std::mt19937& rng, std::size_t d, std::size_t count) {
  ValuedLanguage g{Domain(d)};
  for (std::size_t a = 0; a < d; ++a)
    g.add("dist" + std::to_string(a), CostFunction::from_fn(d, 1, [a](std::span<const Element> t) {
            return Rational(std::abs(t[0] - static_cast<Element>(a)));
          }));
  std::uniform_int_distribution<int> kind(1, 3);
  const int off = static_cast<int>(d) - 1;
  for (std::size_t i = 0; i < count; ++i) {
    const int k = kind(rng);
    CostFunction f = random_function(rng, d, 1);
    if (k == 2) {
      const auto h = random_convex(rng, d);
      f = CostFunction::from_fn(d, 2, [&](std::span<const Element> t) { return h[static_cast<std::size_t>(t[0] - t[1] + off)]; });
    } else if (k == 3) {
      const auto h1 = random_convex(rng, d), h2 = random_convex(rng, d);
      f = CostFunction::from_fn(d, 3, [&](std::span<const Element> t) -> Rational {
        return h1[static_cast<std::size_t>(t[0] - t[1] + off)] + h2[static_cast<std::size_t>(t[1] - t[2] + off)];
      });
    }
    g.add("s" + std::to_string(i), std::move(f));
  }
  return g;
}

inline VcspInstance random_instance(std::mt19937& rng, const ValuedLanguage& g, std::size_t vars,
                                    std::size_t constraints) {
  VcspInstance inst(g);
  for (std::size_t v = 0; v < vars; ++v) inst.add_variable("v" + std::to_string(v));
  std::uniform_int_distribution<std::size_t> pick_f(0, g.size() - 1), pick_v(0, vars - 1);
  std::uniform_int_distribution<int> w(1, 3);
  for (std::size_t c = 0; c < constraints; ++c) {
    const std::size_t fi = pick_f(rng);
    std::vector<std::size_t> scope(g.function(fi).arity());
    for (auto& s : scope) s = pick_v(rng);
    inst.add_constraint(Rational(w(rng)), fi, std::move(scope));
  }
  return inst;
}

}  // namespace vcsplab::testing_support
