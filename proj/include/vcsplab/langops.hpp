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

// Language-level constructions: min-projection, restriction to a subdomain,
// pinning closure, and the fractional polymorphism inequality check.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vcsplab/caps.hpp"
#include "vcsplab/errors.hpp"
#include "vcsplab/foundation.hpp"

namespace vcsplab {

/// A function together with the instance and kept variables expressing it.
struct ExpressedFunction {
  CostFunction function;
  VcspInstance instance;
  std::vector<std::size_t> kept;
};

// Table of t -> min over extensions of t of instance_value. Variables that
// occur in no constraint and are not kept cannot change the value and are
// left out of the enumeration.
inline ExpressedFunction min_projection(const VcspInstance& inst, const std::vector<std::size_t>& kept,
                                        const Caps& caps = Caps::desk()) {
  if (kept.empty()) throw std::invalid_argument("min_projection needs at least one kept variable");
  const std::size_t n = inst.num_variables(), d = inst.domain_size();
  std::vector<int> slot(n, -1);
  std::vector<std::size_t> order;
  for (auto v : kept) {
    if (v >= n) throw std::out_of_range("kept variable out of range");
    if (slot[v] >= 0) throw std::invalid_argument("kept variables must be distinct");
    slot[v] = static_cast<int>(order.size());
    order.push_back(v);
  }
  for (const auto& c : inst.constraints())
    for (auto v : c.scope)
      if (slot[v] < 0) {
        slot[v] = static_cast<int>(order.size());
        order.push_back(v);
      }
  checked_power(d, order.size(), caps.states, "min_projection states");

  struct Term {
    Rational weight;
    const CostFunction* f;
    std::vector<std::size_t> slots;
  };
  std::vector<Term> terms;
  for (const auto& c : inst.constraints()) {
    if (sgn(c.weight) == 0) continue;
    Term t{c.weight, &inst.language().function(c.function), {}};
    for (auto v : c.scope) t.slots.push_back(static_cast<std::size_t>(slot[v]));
    terms.push_back(std::move(t));
  }

  const std::size_t k = kept.size();
  std::vector<std::optional<Rational>> table(ipow(d, k));
  TupleCounter counter(order.size(), d);
  Tuple local;
  Rational value;
  do {
    const Tuple& a = counter.tuple();
    value = 0;
    for (const auto& t : terms) {
      local.resize(t.slots.size());
      for (std::size_t p = 0; p < t.slots.size(); ++p) local[p] = a[t.slots[p]];
      value += t.weight * (*t.f)(local);
    }
    const std::size_t idx = tuple_index(std::span<const Element>(a.data(), k), d);
    if (!table[idx] || value < *table[idx]) table[idx] = value;
  } while (counter.next());

  std::vector<Rational> out;
  out.reserve(table.size());
  for (auto& v : table) out.push_back(std::move(*v));
  return ExpressedFunction{CostFunction(d, k, std::move(out)), inst, kept};
}

/// Γ[S] with S re-indexed as 0..|S|-1; embedding[i] is the original element.
struct Restriction {
  ValuedLanguage language;
  std::vector<Element> embedding;
};

inline CostFunction restrict_function(const CostFunction& f, const std::vector<Element>& embedding) {
  const std::size_t s = embedding.size();
  Tuple orig(f.arity());
  return CostFunction::from_fn(s, f.arity(), [&](std::span<const Element> t) {
    for (std::size_t i = 0; i < t.size(); ++i) orig[i] = embedding[static_cast<std::size_t>(t[i])];
    return f(orig);
  });
}

inline Restriction restrict_language(const ValuedLanguage& lang, std::vector<Element> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (subset.empty()) throw std::invalid_argument("restriction to an empty subset");
  for (Element a : subset) lang.domain().check(a);
  std::vector<std::string> labels;
  if (lang.domain().has_labels())
    for (Element a : subset) labels.push_back(lang.domain().label(a));
  ValuedLanguage out{Domain(subset.size(), std::move(labels))};
  for (std::size_t i = 0; i < lang.size(); ++i) out.add(lang.name(i), restrict_function(lang.function(i), subset));
  return Restriction{std::move(out), std::move(subset)};
}

// The same constraints over the restricted language.
inline VcspInstance restrict_instance(const VcspInstance& inst, const Restriction& r) {
  if (r.language.size() != inst.language().size())
    throw std::invalid_argument("restriction does not match the instance's language");
  VcspInstance out(r.language);
  for (const auto& v : inst.variables()) out.add_variable(v);
  for (const auto& c : inst.constraints()) out.add_constraint(c.weight, c.function, c.scope);
  return out;
}

// Γ plus every pinned function: for each f, each nonempty proper subset P of
// argument positions and each assignment of values to P, the function of the
// remaining arguments. Pins whose table duplicates an earlier function of the
// same arity are dropped. Pins are named like "f[0=1,2=0]".
inline ValuedLanguage gamma_c(const ValuedLanguage& lang, std::size_t max_arity) {
  for (std::size_t i = 0; i < lang.size(); ++i)
    require_cap(lang.function(i).arity(), max_arity, "arity of '" + lang.name(i) + "'");
  const std::size_t d = lang.domain_size();
  ValuedLanguage out(lang.domain());
  std::set<std::pair<std::size_t, std::vector<Rational>>> seen;
  for (std::size_t i = 0; i < lang.size(); ++i) {
    out.add(lang.name(i), lang.function(i));
    seen.emplace(lang.function(i).arity(), lang.function(i).table());
  }
  for (std::size_t i = 0; i < lang.size(); ++i) {
    const CostFunction& f = lang.function(i);
    const std::size_t r = f.arity();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << r); ++mask) {
      std::vector<std::size_t> pinned, free;
      for (std::size_t p = 0; p < r; ++p) ((mask >> p) & 1 ? pinned : free).push_back(p);
      TupleCounter values(pinned.size(), d);
      Tuple full(r);
      do {
        for (std::size_t p = 0; p < pinned.size(); ++p) full[pinned[p]] = values.tuple()[p];
        CostFunction g = CostFunction::from_fn(d, free.size(), [&](std::span<const Element> t) {
          for (std::size_t p = 0; p < free.size(); ++p) full[free[p]] = t[p];
          return f(full);
        });
        if (!seen.emplace(g.arity(), g.table()).second) continue;
        std::string name = lang.name(i) + "[";
        for (std::size_t p = 0; p < pinned.size(); ++p) {
          if (p) name += ",";
          name += std::to_string(pinned[p]) + "=" + std::to_string(values.tuple()[p]);
        }
        name += "]";
        while (out.index_of(name)) name += "'";
        out.add(std::move(name), std::move(g));
      } while (values.next());
    }
  }
  return out;
}

/// f^m(t^1..t^m) = (1/m) sum_i f(t^i).
inline Rational f_power_mean(const CostFunction& f, const std::vector<Tuple>& tuples) {
  if (tuples.empty()) throw std::invalid_argument("f_power_mean needs at least one tuple");
  Rational s = 0;
  for (const auto& t : tuples) s += evaluate(f, t);
  return s / static_cast<unsigned long>(tuples.size());
}

struct FpolViolation {
  std::size_t function = 0;
  std::vector<Tuple> tuples;  // the m input tuples
  Rational lhs;               // sum_g w(g) f^k(g(tuples))
  Rational rhs;               // f^m(tuples)
};

struct FpolCheck {
  bool holds = true;
  std::optional<FpolViolation> violation;
  explicit operator bool() const { return holds; }
};

// Checks sum_g w(g) f^k(g(t^1..t^m)) <= f^m(t^1..t^m) for one function over
// every family of m tuples. A family is enumerated as its columns: position p
// of the family is a column c_p in D^m, and g acts on each column.
inline std::optional<FpolViolation> check_function_fpol(const CostFunction& f, const FractionalOperation& w,
                                                        const Caps& caps = Caps::desk()) {
  const std::size_t d = f.domain_size(), r = f.arity(), m = w.in_arity(), k = w.out_arity();
  if (w.domain_size() != d) throw std::invalid_argument("fractional operation is over a different domain");
  const std::size_t cols = ipow(d, m);
  checked_power(cols, r, caps.states, "fractional polymorphism families");

  struct Term {
    const Operation* g;
    Rational weight;  // w(g) / k
  };
  std::vector<Term> terms;
  for (const auto& [g, wt] : w.terms()) terms.push_back(Term{&g, wt / static_cast<unsigned long>(k)});

  // Column -> the m entries it contributes to the input tuples.
  std::vector<Tuple> column(cols);
  for (std::size_t c = 0; c < cols; ++c) column[c] = tuple_at(c, m, d);

  TupleCounter fam(r, cols);
  Tuple arg(r);
  Rational lhs, rhs;
  const Rational inv_m(1, static_cast<unsigned long>(m));
  do {
    const Tuple& cs = fam.tuple();
    rhs = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < r; ++p) arg[p] = column[static_cast<std::size_t>(cs[p])][i];
      rhs += f(arg);
    }
    rhs *= inv_m;
    lhs = 0;
    for (const auto& t : terms) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t p = 0; p < r; ++p) arg[p] = t.g->at(static_cast<std::size_t>(cs[p]), j);
        const Rational& v = f(arg);
        if (sgn(v) != 0) lhs += t.weight * v;
      }
    }
    if (lhs > rhs) {
      FpolViolation v;
      v.tuples.assign(m, Tuple(r));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < r; ++p) v.tuples[i][p] = column[static_cast<std::size_t>(cs[p])][i];
      v.lhs = lhs;
      v.rhs = rhs;
      return v;
    }
  } while (fam.next());
  return std::nullopt;
}

inline FpolCheck check_fractional_polymorphism(const ValuedLanguage& lang, const FractionalOperation& w,
                                               const Caps& caps = Caps::desk()) {
  if (w.domain_size() != lang.domain_size())
    throw std::invalid_argument("fractional operation is over a different domain");
  for (std::size_t i = 0; i < lang.size(); ++i) {
    if (auto v = check_function_fpol(lang.function(i), w, caps)) {
      v->function = i;
      return FpolCheck{false, std::move(v)};
    }
  }
  return FpolCheck{};
}

}  // namespace vcsplab
