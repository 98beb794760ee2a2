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

// Tractability versus hardness for finite-valued languages.
//
// A core language is tractable exactly when it has a binary idempotent
// symmetric fractional polymorphism; otherwise the pinned closure of the core
// expresses a binary function h with argmin h = {(a,b),(b,a)} for some a != b.
// Both sides are found by exact LPs and both witnesses are re-verified.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsplab/caps.hpp"
#include "vcsplab/core.hpp"
#include "vcsplab/errors.hpp"
#include "vcsplab/exactlp.hpp"
#include "vcsplab/foundation.hpp"
#include "vcsplab/langops.hpp"

namespace vcsplab {

namespace detail {

// Binary operation g with g(x,y) given for all x,y; g.at(x*d + y).
inline Operation binary_from_table(std::size_t d, std::vector<Element> t) { return Operation(d, 2, 1, std::move(t)); }

inline Operation swap_arguments(const Operation& g) {
  const std::size_t d = g.domain_size();
  std::vector<Element> t(d * d);
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) t[x * d + y] = g.at(y * d + x);
  return binary_from_table(d, std::move(t));
}

// Most violated first, ties by position; at most `limit` entries.
inline std::vector<std::size_t> most_violated(std::vector<std::pair<Rational, std::size_t>> v, std::size_t limit) {
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size() && i < limit; ++i) out.push_back(v[i].second);
  return out;
}

}  // namespace detail

// Idempotent symmetric binary operations, one per choice of value on each
// unordered pair {x < y}; pairs and choices both in lexicographic order.
inline std::vector<Operation> idempotent_symmetric_binary_ops(std::size_t d) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = x + 1; y < d; ++y) pairs.emplace_back(x, y);
  std::vector<Operation> ops;
  TupleCounter choice(pairs.size(), d);
  do {
    std::vector<Element> t(d * d);
    for (std::size_t x = 0; x < d; ++x) t[x * d + x] = static_cast<Element>(x);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      t[pairs[p].first * d + pairs[p].second] = choice.tuple()[p];
      t[pairs[p].second * d + pairs[p].first] = choice.tuple()[p];
    }
    ops.push_back(detail::binary_from_table(d, std::move(t)));
  } while (!pairs.empty() && choice.next());
  return ops;
}

// Searches for w over idempotent symmetric binary operations with
// sum_g w(g) f(g(x,y)) <= (f(x) + f(y)) / 2 for every f and tuple pair,
// generating the pair rows lazily. Requires a core.
inline std::optional<FractionalOperation> tractability_lp(const ValuedLanguage& lang, const Caps& caps = Caps::desk(),
                                                          bool check_core = true) {
  const std::size_t d = lang.domain_size();
  require_cap(d, caps.domain, "domain size");
  if (check_core && !is_core(lang, caps).is_core) throw std::invalid_argument("tractability_lp needs a core");
  for (std::size_t i = 0; i < lang.size(); ++i) require_cap(lang.function(i).arity(), caps.arity, "function arity");
  const auto ops = idempotent_symmetric_binary_ops(d);
  const std::size_t n = ops.size();

  LinearProgram base(n);
  base.add_row(std::vector<Rational>(n, Rational(1)), Relation::Equal, 1);

  // Row (f, x, y) with index(x) < index(y); equal tuples give the zero row and
  // swapped pairs the same row by symmetry.
  auto row_for = [&](const CostFunction& f, const Tuple& cols) {
    const std::size_t r = f.arity();
    Tuple x(r), y(r), gx(r);
    for (std::size_t p = 0; p < r; ++p) {
      x[p] = cols[p] / static_cast<Element>(d);
      y[p] = cols[p] % static_cast<Element>(d);
    }
    const Rational mean = (f(x) + f(y)) / 2;
    std::vector<Rational> row(n);
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t p = 0; p < r; ++p) gx[p] = ops[g].at(static_cast<std::size_t>(cols[p]));
      row[g] = mean - f(gx);
    }
    return row;
  };

  auto separate = [&](const std::vector<Rational>& w) {
    std::vector<std::size_t> support;
    for (std::size_t g = 0; g < n; ++g)
      if (sgn(w[g]) > 0) support.push_back(g);
    std::vector<std::pair<Rational, std::size_t>> violated;
    std::vector<std::pair<std::size_t, Tuple>> where;
    for (std::size_t fi = 0; fi < lang.size(); ++fi) {
      const CostFunction& f = lang.function(fi);
      const std::size_t r = f.arity();
      TupleCounter xc(r, d);
      Tuple cols(r), gx(r);
      do {
        const std::size_t ix = tuple_index(xc.tuple(), d);
        TupleCounter yc(r, d);
        do {
          if (tuple_index(yc.tuple(), d) <= ix) continue;
          for (std::size_t p = 0; p < r; ++p) cols[p] = xc.tuple()[p] * static_cast<Element>(d) + yc.tuple()[p];
          Rational lhs = 0;
          for (auto g : support) {
            for (std::size_t p = 0; p < r; ++p) gx[p] = ops[g].at(static_cast<std::size_t>(cols[p]));
            lhs += w[g] * f(gx);
          }
          Rational slack = (f(xc.tuple()) + f(yc.tuple())) / 2 - lhs;
          if (sgn(slack) < 0) {
            violated.emplace_back(std::move(slack), where.size());
            where.emplace_back(fi, cols);
          }
        } while (yc.next());
      } while (xc.next());
    }
    std::vector<LpRow> cuts;
    for (auto k : detail::most_violated(std::move(violated), 64))
      cuts.push_back(LpRow{row_for(lang.function(where[k].first), where[k].second), Relation::GreaterEq, 0});
    return cuts;
  };

  const LazySolve ls = solve_lp_lazy(std::move(base), separate);
  if (ls.outcome.status != LpStatus::Optimal) return std::nullopt;
  FractionalOperation::Terms raw;
  for (std::size_t g = 0; g < n; ++g)
    if (sgn(ls.outcome.primal[g]) > 0) raw.emplace(ops[g], ls.outcome.primal[g]);
  FractionalOperation w = FractionalOperation::normalized(raw);
  if (!check_fractional_polymorphism(lang, w, caps)) throw VerificationFailure("tractability witness fails the inequality check");
  for (const auto& g : w.support()) {
    const OpFlags fl = op_predicates(g);
    if (!fl.idempotent || !fl.symmetric) throw VerificationFailure("tractability witness has a non-symmetric operation");
  }
  return w;
}

/// argmin h = {(a,b),(b,a)} where h is the min-projection of `instance` onto
/// its first two variables.
struct HardnessWitness {
  Element a = 0, b = 1;
  VcspInstance instance;
  CostFunction h;
};

/// Outcome of the gadget search for one pair: a gadget, or a binary
/// fractional polymorphism with an operation g where {g(a,b), g(b,a)} != {a,b}.
struct PairGadgetResult {
  std::optional<HardnessWitness> gadget;
  std::optional<FractionalOperation> certificate;
};

// (g(a,b), g(b,a)) is not (a,b) or (b,a).
inline bool moves_pair(const Operation& g, Element a, Element b) {
  const std::size_t d = g.domain_size();
  const Element gab = g.at(static_cast<std::size_t>(a) * d + static_cast<std::size_t>(b));
  const Element gba = g.at(static_cast<std::size_t>(b) * d + static_cast<std::size_t>(a));
  return !((gab == a && gba == b) || (gab == b && gba == a));
}

inline bool argmin_is_pair(const CostFunction& h, Element a, Element b) {
  const std::size_t d = h.domain_size();
  const Rational& best = *std::min_element(h.table().begin(), h.table().end());
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t y = 0; y < d; ++y) {
      const bool in = (x == static_cast<std::size_t>(a) && y == static_cast<std::size_t>(b)) ||
                      (x == static_cast<std::size_t>(b) && y == static_cast<std::size_t>(a));
      if ((h.at(x * d + y) == best) != in) return false;
    }
  return true;
}

// Variables y(f, x) for x a tuple of pairs in (D x D)^ar(f), plus a margin t:
//   max t  s.t.  sum y (f(g(x)) - f(pi_i(x))) - t [g moves (a,b)] >= 0
//                for every binary g and i = 1, 2;  sum y <= 1;  t <= 1.
// Rows enter lazily: the most violated g is found by minimizing the instance
// sum y f(g(x)) over the pairs that occur in the support of y.
inline PairGadgetResult pair_hardness_gadget(const ValuedLanguage& lang, Element a, Element b,
                                             const Caps& caps = Caps::desk()) {
  const std::size_t d = lang.domain_size();
  if (a == b) throw std::invalid_argument("gadget pair must be distinct");
  lang.domain().check(a);
  lang.domain().check(b);
  require_cap(d, caps.domain, "domain size");
  const std::size_t dd = d * d;
  const std::size_t pab = static_cast<std::size_t>(a) * d + static_cast<std::size_t>(b);
  const std::size_t pba = static_cast<std::size_t>(b) * d + static_cast<std::size_t>(a);

  struct Column {
    std::size_t function;
    Tuple pairs;  // pair indices p*d + q
  };
  std::vector<Column> columns;
  for (std::size_t fi = 0; fi < lang.size(); ++fi) {
    const std::size_t r = lang.function(fi).arity();
    require_cap(r, caps.arity, "function arity");
    checked_power(dd, r, caps.states, "gadget columns");
    TupleCounter c(r, dd);
    do {
      columns.push_back(Column{fi, c.tuple()});
    } while (c.next());
    require_cap(columns.size(), caps.states, "gadget columns");
  }
  const std::size_t n = columns.size(), t = n;

  // g given as its table over pair indices.
  auto value_under = [&](const Column& c, const std::vector<Element>& g) {
    Tuple img(c.pairs.size());
    for (std::size_t p = 0; p < img.size(); ++p) img[p] = g[static_cast<std::size_t>(c.pairs[p])];
    return lang.function(c.function)(img);
  };
  std::vector<Element> proj[2];
  for (int i = 0; i < 2; ++i) {
    proj[i].resize(dd);
    for (std::size_t p = 0; p < dd; ++p) proj[i][p] = static_cast<Element>(i == 0 ? p / d : p % d);
  }
  auto is_moving = [&](const std::vector<Element>& g) {
    const Element x = g[pab], y = g[pba];
    return !((x == a && y == b) || (x == b && y == a));
  };
  auto make_row = [&](const std::vector<Element>& g, int i) {
    std::vector<Rational> row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = value_under(columns[j], g) - value_under(columns[j], proj[i]);
    row[t] = is_moving(g) ? -1 : 0;
    return LpRow{std::move(row), Relation::GreaterEq, 0};
  };

  LinearProgram base(n + 1);
  base.objective[t] = -1;
  base.set_bounds(t, std::nullopt, Rational(1));
  std::vector<Rational> norm(n + 1, Rational(1));
  norm[t] = 0;
  base.add_row(std::move(norm), Relation::LessEq, 1);

  std::vector<std::pair<std::vector<Element>, int>> generated;
  auto separate = [&](const std::vector<Rational>& x) {
    std::vector<std::size_t> support;
    std::vector<bool> relevant(dd, false);
    relevant[pab] = relevant[pba] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(x[j]) > 0) {
        support.push_back(j);
        for (Element p : columns[j].pairs) relevant[static_cast<std::size_t>(p)] = true;
      }
    std::vector<std::size_t> rel;
    for (std::size_t p = 0; p < dd; ++p)
      if (relevant[p]) rel.push_back(p);
    checked_power(d, rel.size(), caps.states, "gadget separation states");

    Rational base_value[2];
    for (int i = 0; i < 2; ++i) {
      base_value[i] = 0;
      for (auto j : support) base_value[i] += x[j] * value_under(columns[j], proj[i]);
    }
    // Candidates: every assignment of the relevant pairs, scored by
    // F(g) - t [g moves (a,b)]; keep the lowest few per projection.
    std::vector<std::pair<Rational, std::size_t>> scored[2];
    std::vector<std::vector<Element>> tables;
    TupleCounter assign(rel.size(), d);
    std::vector<Element> g(dd, 0);
    do {
      for (std::size_t k = 0; k < rel.size(); ++k) g[rel[k]] = assign.tuple()[k];
      Rational score = 0;
      for (auto j : support) score += x[j] * value_under(columns[j], g);
      if (is_moving(g)) score -= x[t];
      for (int i = 0; i < 2; ++i) {
        if (score < base_value[i]) {
          scored[i].emplace_back(score - base_value[i], tables.size());
        }
      }
      if ((!scored[0].empty() && scored[0].back().second == tables.size()) ||
          (!scored[1].empty() && scored[1].back().second == tables.size()))
        tables.push_back(assign.tuple());
    } while (assign.next());

    std::vector<LpRow> cuts;
    for (int i = 0; i < 2; ++i) {
      for (auto k : detail::most_violated(std::move(scored[i]), 8)) {
        std::vector<Element> full = proj[i];
        for (std::size_t q = 0; q < rel.size(); ++q) full[rel[q]] = tables[k][q];
        cuts.push_back(make_row(full, i));
        generated.emplace_back(std::move(full), i);
      }
    }
    return cuts;
  };

  const LazySolve ls = solve_lp_lazy(std::move(base), separate);
  const LpOutcome& o = ls.outcome;
  if (o.status != LpStatus::Optimal) throw std::logic_error("gadget program must have an optimum");

  PairGadgetResult out;
  if (sgn(o.primal[t]) > 0) {
    // Variables enumerate D x D with (a,b) and (b,a) first.
    std::vector<std::size_t> var_of(dd);
    std::vector<std::size_t> order{pab, pba};
    for (std::size_t p = 0; p < dd; ++p)
      if (p != pab && p != pba) order.push_back(p);
    VcspInstance inst(lang);
    for (std::size_t v = 0; v < dd; ++v) {
      var_of[order[v]] = v;
      inst.add_variable("(" + lang.domain().label(static_cast<Element>(order[v] / d)) + "," +
                        lang.domain().label(static_cast<Element>(order[v] % d)) + ")");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(o.primal[j]) == 0) continue;
      std::vector<std::size_t> scope;
      for (Element p : columns[j].pairs) scope.push_back(var_of[static_cast<std::size_t>(p)]);
      inst.add_constraint(o.primal[j], columns[j].function, std::move(scope));
    }
    CostFunction h = min_projection(inst, {0, 1}, caps).function;
    if (!argmin_is_pair(h, a, b)) throw VerificationFailure("gadget does not isolate the pair");
    out.gadget = HardnessWitness{a, b, std::move(inst), std::move(h)};
    return out;
  }

  // Certificate: z(g) = sum_i z(g,i), symmetrized over swapped arguments so
  // both projections carry equal weight.
  std::map<Operation, Rational> z;
  for (std::size_t k = 0; k < generated.size(); ++k) {
    const Rational& zk = o.dual[1 + k];
    if (sgn(zk) == 0) continue;
    Operation g = detail::binary_from_table(d, generated[k].first);
    Operation gs = detail::swap_arguments(g);
    z[g] += zk;
    z[gs] += zk;
  }
  FractionalOperation w = FractionalOperation::normalized(z);
  if (!check_fractional_polymorphism(lang, w, caps))
    throw VerificationFailure("pair certificate fails the inequality check");
  bool moves = false;
  for (const auto& g : w.support()) moves |= moves_pair(g, a, b);
  if (!moves) throw VerificationFailure("pair certificate never moves the pair");
  out.certificate = std::move(w);
  return out;
}

// Average of the per-pair certificates over all ordered pairs a != b.
inline FractionalOperation exist_fpol_combination(const ValuedLanguage& lang,
                                                  const std::map<std::pair<Element, Element>, FractionalOperation>& certs,
                                                  const Caps& caps = Caps::desk()) {
  const std::size_t d = lang.domain_size();
  if (d < 2) throw std::invalid_argument("combination needs at least two domain elements");
  std::map<Operation, Rational> sum;
  const Rational scale(1, static_cast<unsigned long>(d * d - d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      if (a == b) continue;
      auto it = certs.find({static_cast<Element>(a), static_cast<Element>(b)});
      if (it == certs.end())
        throw std::invalid_argument("missing certificate for pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
      for (const auto& [g, wt] : it->second.terms()) sum[g] += wt * scale;
    }
  FractionalOperation w(std::move(sum));
  if (!check_fractional_polymorphism(lang, w, caps)) throw VerificationFailure("combined certificate fails the inequality check");
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      if (a == b) continue;
      bool moves = false;
      for (const auto& g : w.support()) moves |= moves_pair(g, static_cast<Element>(a), static_cast<Element>(b));
      if (!moves) throw VerificationFailure("combined certificate fixes a pair");
    }
  return w;
}

// (MC) to (MC'): from h with argmin h = {(a,b),(b,a)} build u with
// argmin u = {a,b} and h' with h'(a,b) = h'(b,a) < h'(a,a) = h'(b,b).
inline UnaryFunctionPair mc_to_mcprime(const CostFunction& h, Element a, Element b) {
  if (h.arity() != 2) throw std::invalid_argument("mc_to_mcprime needs a binary function");
  const std::size_t d = h.domain_size();
  if (a == b || a < 0 || b < 0 || static_cast<std::size_t>(a) >= d || static_cast<std::size_t>(b) >= d)
    throw std::invalid_argument("mc_to_mcprime needs two distinct domain elements");
  if (!argmin_is_pair(h, a, b)) throw std::invalid_argument("argmin h is not {(a,b),(b,a)}");
  auto at = [d](const CostFunction& f, Element x, Element y) -> const Rational& {
    return f.at(static_cast<std::size_t>(x) * d + static_cast<std::size_t>(y));
  };
  auto row_min = [&](const CostFunction& f) {
    return CostFunction::from_fn(d, 1, [&](std::span<const Element> x) {
      Rational m = at(f, x[0], 0);
      for (std::size_t y = 1; y < d; ++y) m = std::min(m, at(f, x[0], static_cast<Element>(y)));
      return m;
    });
  };
  CostFunction u = row_min(h);
  UnaryFunctionPair out{u, h};
  if (at(h, a, a) != at(h, b, b)) {
    // Translate and scale so h(a,b) = 0 and every other entry is >= 1.
    const Rational base = at(h, a, b);
    std::optional<Rational> gap;
    for (const auto& v : h.table())
      if (v != base && (!gap || v - base < *gap)) gap = v - base;
    CostFunction hn = CostFunction::from_fn(d, 2, [&](std::span<const Element> t) -> Rational { return (at(h, t[0], t[1]) - base) / *gap; });
    if (at(hn, a, a) > at(hn, b, b)) std::swap(a, b);
    Rational c = 0;
    for (std::size_t x = 0; x < d; ++x) c = std::max(c, Rational(at(hn, a, a) - at(hn, static_cast<Element>(x), static_cast<Element>(x))));
    CostFunction un = row_min(hn);
    CostFunction up = CostFunction::from_fn(d, 1, [&](std::span<const Element> x) {
      std::optional<Rational> m;
      for (std::size_t y = 0; y < d; ++y) {
        const Element ye = static_cast<Element>(y);
        Rational v = c * un.at(y) + at(hn, ye, ye) + at(hn, x[0], ye);
        if (!m || v < *m) m = std::move(v);
      }
      return *m;
    });
    const Rational delta = at(hn, b, b) - at(hn, a, a);
    const Rational denom = up.at(static_cast<std::size_t>(a)) - up.at(static_cast<std::size_t>(b));
    if (sgn(denom) <= 0) throw VerificationFailure("u'(a) - u'(b) is not positive");
    out.h = CostFunction::from_fn(d, 2, [&](std::span<const Element> t) -> Rational {
      return at(hn, t[0], t[1]) +
             delta / 2 * (up.at(static_cast<std::size_t>(t[0])) + up.at(static_cast<std::size_t>(t[1]))) / denom;
    });
  }
  // Verify both conditions exactly.
  const CostFunction& hp = out.h;
  if (!(at(hp, a, b) == at(hp, b, a) && at(hp, a, b) < at(hp, a, a) && at(hp, a, a) == at(hp, b, b)))
    throw VerificationFailure("h' violates h'(a,b) = h'(b,a) < h'(a,a) = h'(b,b)");
  const Rational& umin = *std::min_element(out.u.table().begin(), out.u.table().end());
  for (std::size_t x = 0; x < d; ++x) {
    const bool in = x == static_cast<std::size_t>(a) || x == static_cast<std::size_t>(b);
    if ((out.u.at(x) == umin) != in) throw VerificationFailure("argmin u is not {a,b}");
  }
  return out;
}

enum class Verdict { Tractable, NPHard, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Tractable: return "tractable";
    case Verdict::NPHard: return "np-hard";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ClassificationResult {
  Verdict verdict = Verdict::Inconclusive;
  CoreExtraction core;
  std::optional<FractionalOperation> tractable_witness;  // over the core's domain
  std::optional<ValuedLanguage> pinned;                  // pinned closure of the core
  std::optional<HardnessWitness> hardness;               // over `pinned`, core element indices
  std::optional<UnaryFunctionPair> mcprime;
  std::string note;
};

inline ClassificationResult classify(const ValuedLanguage& lang, const Caps& caps = Caps::desk()) {
  caps.validate();
  ClassificationResult res{Verdict::Inconclusive, find_core(lang, caps), {}, {}, {}, {}, {}};
  const ValuedLanguage& core = res.core.language;
  if (auto w = tractability_lp(core, caps, false)) {
    res.verdict = Verdict::Tractable;
    res.tractable_witness = std::move(w);
    return res;
  }
  const std::size_t d = core.domain_size();
  std::map<std::pair<Element, Element>, FractionalOperation> certs;
  try {
    res.pinned = gamma_c(core, caps.arity);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) {
        const Element ea = static_cast<Element>(a), eb = static_cast<Element>(b);
        PairGadgetResult pr = pair_hardness_gadget(*res.pinned, ea, eb, caps);
        if (pr.gadget) {
          res.verdict = Verdict::NPHard;
          res.mcprime = mc_to_mcprime(pr.gadget->h, ea, eb);
          res.hardness = std::move(pr.gadget);
          return res;
        }
        // The system for (b,a) is the same as for (a,b).
        certs.emplace(std::make_pair(ea, eb), *pr.certificate);
        certs.emplace(std::make_pair(eb, ea), std::move(*pr.certificate));
      }
  } catch (const CapExceeded& e) {
    res.note = std::string("inconclusive under caps: ") + e.what();
    return res;
  }
  FractionalOperation combined = exist_fpol_combination(*res.pinned, certs, caps);
  throw InternalInconsistency("no tractability witness and no gadget; combined certificate has support " +
                              std::to_string(combined.support_size()));
}

}  // namespace vcsplab
