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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vcsplab/caps.hpp"
#include "vcsplab/foundation.hpp"

namespace vcsplab {

// Exhaustive minimization with the lexicographically least optimum.
struct ExactSolution {
  Assignment assignment;
  Rational value;
};

inline ExactSolution brute_force_solve(const VcspInstance& inst, const Caps& caps = Caps::desk()) {
  const std::size_t n = inst.num_variables(), d = inst.domain_size();
  checked_power(d, n, caps.states, "brute-force states");
  ExactSolution best{Assignment(n, 0), instance_value(inst, Assignment(n, 0))};
  TupleCounter c(n, d);
  while (c.next()) {
    Rational v = instance_value(inst, c.tuple());
    if (v < best.value) best = ExactSolution{c.tuple(), std::move(v)};
  }
  return best;
}

// All optimal assignments, for small instances.
inline std::vector<Assignment> all_optima(const VcspInstance& inst, const Caps& caps = Caps::desk()) {
  const std::size_t n = inst.num_variables(), d = inst.domain_size();
  checked_power(d, n, caps.states, "brute-force states");
  std::vector<Assignment> best;
  std::optional<Rational> value;
  TupleCounter c(n, d);
  do {
    Rational v = instance_value(inst, c.tuple());
    if (!value || v < *value) {
      value = v;
      best.clear();
    }
    if (v == *value) best.push_back(c.tuple());
  } while (c.next());
  return best;
}

}  // namespace vcsplab
