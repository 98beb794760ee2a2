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

// Cores. A language is a core when every unary fractional polymorphism is
// supported on injective operations only. The decision reduces to the
// alternative system over weights w(g), g ranging over all unary maps:
//
//   strict:  sum_{g non-injective} w(g) > 0
//   weak:    sum_g w(g) (f(x) - f(g(x))) >= 0      for every f and tuple x
//
// A solution is a unary fractional polymorphism with non-injective support;
// the dual certificate weights the (f, x) rows and defines an instance whose
// optimal solutions are exactly injective.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsplab/bruteforce.hpp"
#include "vcsplab/caps.hpp"
#include "vcsplab/errors.hpp"
#include "vcsplab/exactlp.hpp"
#include "vcsplab/foundation.hpp"
#include "vcsplab/langops.hpp"

namespace vcsplab {

struct CoreReport {
  bool is_core = false;
  std::optional<FractionalOperation> witness;   // when not a core
  std::optional<DualCertificate> certificate;   // when a core
  std::vector<std::pair<std::size_t, Tuple>> weak_rows;  // (function, x) of each weak row
};

// All d^d unary operations in row-major table order.
inline std::vector<Operation> all_unary_operations(std::size_t d) {
  std::vector<Operation> ops;
  TupleCounter c(d, d);
  do {
    ops.emplace_back(d, 1, 1, c.tuple());
  } while (c.next());
  return ops;
}

inline CoreReport is_core(const ValuedLanguage& lang, const Caps& caps = Caps::desk()) {
  const std::size_t d = lang.domain_size();
  require_cap(d, caps.domain, "domain size");
  const auto ops = all_unary_operations(d);
  CoreReport report;

  AlternativeSystem sys;
  sys.num_vars = ops.size();
  std::vector<Rational> strict(ops.size());
  for (std::size_t g = 0; g < ops.size(); ++g)
    if (!*op_predicates(ops[g]).injective) strict[g] = 1;
  sys.strict.push_back(std::move(strict));

  Tuple image;
  for (std::size_t fi = 0; fi < lang.size(); ++fi) {
    const CostFunction& f = lang.function(fi);
    TupleCounter x(f.arity(), d);
    do {
      std::vector<Rational> row(ops.size());
      const Rational& fx = f(x.tuple());
      for (std::size_t g = 0; g < ops.size(); ++g) {
        image = x.tuple();
        for (auto& e : image) e = ops[g].at(static_cast<std::size_t>(e));
        row[g] = fx - f(image);
      }
      sys.weak.push_back(std::move(row));
      report.weak_rows.emplace_back(fi, x.tuple());
    } while (x.next());
  }

  auto result = motzkin_alternative(sys);
  if (auto* y = std::get_if<StrictSolution>(&result)) {
    FractionalOperation::Terms raw;
    for (std::size_t g = 0; g < ops.size(); ++g)
      if (sgn(y->y[g]) > 0) raw.emplace(ops[g], y->y[g]);
    FractionalOperation w = FractionalOperation::normalized(raw);
    if (auto chk = check_fractional_polymorphism(lang, w, caps); !chk)
      throw VerificationFailure("core witness is not a fractional polymorphism");
    bool non_injective = false;
    for (const auto& g : w.support()) non_injective |= !*op_predicates(g).injective;
    if (!non_injective) throw VerificationFailure("core witness has injective support only");
    report.is_core = false;
    report.witness = std::move(w);
  } else {
    report.is_core = true;
    report.certificate = std::get<DualCertificate>(std::move(result));
  }
  return report;
}

struct CoreExtraction {
  std::vector<Element> subset;  // elements of the original domain
  ValuedLanguage language;      // Γ restricted to subset, re-indexed
  std::vector<FractionalOperation> steps;  // witness used at each contraction
};

// Contracts by a non-injective support operation of smallest image (ties by
// table order) until the language is a core.
inline CoreExtraction find_core(const ValuedLanguage& lang, const Caps& caps = Caps::desk()) {
  CoreExtraction out{{}, lang, {}};
  for (std::size_t a = 0; a < lang.domain_size(); ++a) out.subset.push_back(static_cast<Element>(a));
  for (;;) {
    CoreReport rep = is_core(out.language, caps);
    if (rep.is_core) return out;
    const Operation* best = nullptr;
    std::size_t best_size = 0;
    for (const auto& [g, w] : rep.witness->terms()) {
      if (*op_predicates(g).injective) continue;
      const std::size_t sz = image_size(g);
      if (!best || sz < best_size) {  // terms iterate in table order
        best = &g;
        best_size = sz;
      }
    }
    std::vector<Element> image(best->table().begin(), best->table().end());
    Restriction r = restrict_language(out.language, image);
    std::vector<Element> subset;
    for (Element e : r.embedding) subset.push_back(out.subset[static_cast<std::size_t>(e)]);
    out.subset = std::move(subset);
    out.language = std::move(r.language);
    out.steps.push_back(std::move(*rep.witness));
  }
}

// Instance on variables D (named by label) with objective
// sum_{f,x} z2(f,x) f(x), where z2 is the dual certificate of is_core. Every
// optimal solution is a bijection D -> D; this is re-checked by brute force
// when d^d is within the states cap.
inline VcspInstance core_witness_instance(const ValuedLanguage& lang, const Caps& caps = Caps::desk()) {
  CoreReport rep = is_core(lang, caps);
  if (!rep.is_core) throw std::invalid_argument("core_witness_instance needs a core");
  const std::size_t d = lang.domain_size();
  VcspInstance inst(lang);
  for (std::size_t a = 0; a < d; ++a) inst.add_variable(lang.domain().label(static_cast<Element>(a)));
  const auto& z2 = rep.certificate->z_weak;
  for (std::size_t r = 0; r < z2.size(); ++r) {
    if (sgn(z2[r]) == 0) continue;
    const auto& [fi, x] = rep.weak_rows[r];
    std::vector<std::size_t> scope(x.begin(), x.end());
    inst.add_constraint(z2[r], fi, std::move(scope));
  }
  if (ipow(d, d) <= caps.states) {
    for (const auto& h : all_optima(inst, caps)) {
      std::vector<bool> hit(d, false);
      for (Element e : h) hit[static_cast<std::size_t>(e)] = true;
      for (bool b : hit)
        if (!b) throw VerificationFailure("core witness instance has a non-injective optimum");
    }
  }
  return inst;
}

}  // namespace vcsplab
