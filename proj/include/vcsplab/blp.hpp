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

// Basic LP relaxation of a VCSP instance.
//
//   min  sum_i sum_s w_i f_i(s(x^i)) l(i,s)
//   s.t. sum_{s : s(x) = a} l(i,s) = m(x,a)   for every i, x in {x^i}, a in D
//        sum_a m(x,a) = 1                      for every variable x
//        0 <= l, m <= 1
//
// where s ranges over maps from the set of scope variables {x^i} to D.

#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "vcsplab/bruteforce.hpp"
#include "vcsplab/caps.hpp"
#include "vcsplab/errors.hpp"
#include "vcsplab/exactlp.hpp"
#include "vcsplab/foundation.hpp"

namespace vcsplab {

/// Column layout: m(x,a) at x*d + a, then the l block of each constraint.
struct BlpLayout {
  std::size_t domain_size = 0;
  std::size_t num_variables = 0;
  std::vector<std::vector<std::size_t>> scope_vars;  // sorted distinct scope variables
  std::vector<std::size_t> lambda_offset;

  std::size_t mu(std::size_t x, std::size_t a) const { return x * domain_size + a; }
  std::size_t lambda(std::size_t i, std::size_t s) const { return lambda_offset[i] + s; }
  std::size_t lambda_count(std::size_t i) const { return ipow(domain_size, scope_vars[i].size()); }
};

struct BlpProgram {
  LinearProgram program;
  BlpLayout layout;
};

inline BlpProgram build_blp(const VcspInstance& inst, const Caps& caps = Caps::desk()) {
  const std::size_t d = inst.domain_size(), n = inst.num_variables();
  BlpLayout lay;
  lay.domain_size = d;
  lay.num_variables = n;
  std::size_t cols = n * d;
  for (const auto& c : inst.constraints()) {
    std::vector<std::size_t> vars = c.scope;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    lay.lambda_offset.push_back(cols);
    cols += checked_power(d, vars.size(), caps.states, "BLP local assignments");
    require_cap(cols, caps.states, "BLP columns");
    lay.scope_vars.push_back(std::move(vars));
  }

  LinearProgram lp(cols);
  for (std::size_t j = 0; j < cols; ++j) lp.set_bounds(j, Rational(0), Rational(1));
  Tuple full;
  for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
    const Constraint& c = inst.constraints()[i];
    const CostFunction& f = inst.language().function(c.function);
    const auto& vars = lay.scope_vars[i];
    // Position of each scope entry within vars.
    std::vector<std::size_t> where;
    for (auto v : c.scope) where.push_back(static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()));
    TupleCounter s(vars.size(), d);
    std::size_t k = 0;
    do {
      full.resize(c.scope.size());
      for (std::size_t p = 0; p < c.scope.size(); ++p) full[p] = s.tuple()[where[p]];
      lp.objective[lay.lambda(i, k)] = c.weight * f(full);
      ++k;
    } while (s.next());

    for (std::size_t p = 0; p < vars.size(); ++p)
      for (std::size_t a = 0; a < d; ++a) {
        std::vector<Rational> row(cols);
        TupleCounter t(vars.size(), d);
        std::size_t idx = 0;
        do {
          if (static_cast<std::size_t>(t.tuple()[p]) == a) row[lay.lambda(i, idx)] = 1;
          ++idx;
        } while (t.next());
        row[lay.mu(vars[p], a)] = -1;
        lp.add_row(std::move(row), Relation::Equal, 0);
      }
  }
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<Rational> row(cols);
    for (std::size_t a = 0; a < d; ++a) row[lay.mu(x, a)] = 1;
    lp.add_row(std::move(row), Relation::Equal, 1);
  }
  return BlpProgram{std::move(lp), std::move(lay)};
}

struct BlpSolution {
  Rational value;
  std::vector<std::vector<Rational>> mu;      // mu[x][a]
  std::vector<std::vector<Rational>> lambda;  // lambda[i][s], s indexes maps over scope_vars[i]
  std::vector<std::vector<std::size_t>> scope_vars;
  bool integral = false;                      // every mu of the returned vertex is 0 or 1
};

namespace detail {

inline BlpSolution read_blp(const BlpProgram& bp, const LpOutcome& o) {
  const BlpLayout& lay = bp.layout;
  const std::size_t d = lay.domain_size;
  BlpSolution sol;
  sol.value = o.value;
  sol.scope_vars = lay.scope_vars;
  sol.integral = true;
  sol.mu.assign(lay.num_variables, std::vector<Rational>(d));
  for (std::size_t x = 0; x < lay.num_variables; ++x) {
    Rational total = 0;
    for (std::size_t a = 0; a < d; ++a) {
      sol.mu[x][a] = o.primal[lay.mu(x, a)];
      total += sol.mu[x][a];
      if (sgn(sol.mu[x][a]) != 0 && sol.mu[x][a] != 1) sol.integral = false;
    }
    if (total != 1) throw VerificationFailure("BLP marginals do not sum to 1");
  }
  for (std::size_t i = 0; i < lay.scope_vars.size(); ++i) {
    const auto& vars = lay.scope_vars[i];
    std::vector<Rational> l(lay.lambda_count(i));
    for (std::size_t s = 0; s < l.size(); ++s) l[s] = o.primal[lay.lambda(i, s)];
    for (std::size_t p = 0; p < vars.size(); ++p) {
      std::vector<Rational> marg(d);
      for (std::size_t s = 0; s < l.size(); ++s) marg[static_cast<std::size_t>(tuple_at(s, vars.size(), d)[p])] += l[s];
      if (marg != sol.mu[vars[p]]) throw VerificationFailure("BLP marginalization row fails");
    }
    sol.lambda.push_back(std::move(l));
  }
  return sol;
}

}  // namespace detail

/// Exact optimum of the relaxation; a lower bound on the instance optimum.
inline BlpSolution solve_blp(const VcspInstance& inst, const Caps& caps = Caps::desk()) {
  const BlpProgram bp = build_blp(inst, caps);
  const LpOutcome o = solve_lp(bp.program);
  if (o.status != LpStatus::Optimal) throw std::logic_error("BLP must have an optimum");
  return detail::read_blp(bp, o);
}

// Self-reduction: for each variable in order, pin it to the smallest value
// that keeps the relaxation optimum unchanged. Needs an instance over a
// language on which the relaxation is exact.
inline ExactSolution extract_assignment(const VcspInstance& inst, const Caps& caps = Caps::desk()) {
  BlpProgram bp = build_blp(inst, caps);
  const LpOutcome first = solve_lp(bp.program);
  if (first.status != LpStatus::Optimal) throw std::logic_error("BLP must have an optimum");
  const Rational target = first.value;
  const std::size_t d = inst.domain_size(), cols = bp.program.num_vars;
  Assignment h(inst.num_variables());
  for (std::size_t x = 0; x < inst.num_variables(); ++x) {
    bool fixed = false;
    for (std::size_t a = 0; a < d && !fixed; ++a) {
      LinearProgram trial = bp.program;
      std::vector<Rational> row(cols);
      row[bp.layout.mu(x, a)] = 1;
      trial.add_row(std::move(row), Relation::Equal, 1);
      const LpOutcome o = solve_lp(trial);
      if (o.status == LpStatus::Optimal && o.value == target) {
        bp.program = std::move(trial);
        h[x] = static_cast<Element>(a);
        fixed = true;
      }
    }
    if (!fixed)
      throw VerificationFailure("no value of variable '" + inst.variables()[x] + "' keeps the relaxation optimum");
  }
  Rational value = instance_value(inst, h);
  if (value != target) throw VerificationFailure("extracted assignment does not attain the relaxation optimum");
  return ExactSolution{std::move(h), std::move(value)};
}

}  // namespace vcsplab
