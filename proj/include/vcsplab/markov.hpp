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

// Symmetric fractional polymorphisms from a Markov chain on generalised
// operations.
//
// Vertices are m -> m mappings reachable from the identity by steps g -> g^h,
// h in supp(w). For binary w and m = 2,
//
//   g^h = (h(g1, g2), h(g2, g1)),
//
// and for an (m-1)-ary w,
//
//   g^h = (h o g_{-1}, ..., h o g_{-m}),  g_{-j} dropping component j.
//
// The lazy chain moves along an h-edge with probability w(h)/2 and stays put
// with probability 1/2. Its limit from sigma = one step out of the identity is
// a fractional polymorphism rho supported on the recurrent vertices; sorting
// the outputs of rho and splitting coordinates gives a symmetric one.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcsplab/caps.hpp"
#include "vcsplab/errors.hpp"
#include "vcsplab/foundation.hpp"
#include "vcsplab/langops.hpp"

namespace vcsplab {

/// Directed graph over m -> m mappings; vertex 0 is the identity.
struct OperationGraph {
  std::size_t arity = 0;                 ///< m
  std::vector<Operation> vertices;
  std::vector<Operation> steps;          ///< supp(seed), edge labels index into it
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;  ///< (step, successor)
  FractionalOperation seed;

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v)
      for (const auto& [h, s] : edges[v]) adj[v].push_back(s);
    return adj;
  }
};

using StepFn = std::function<Operation(const Operation& g, const Operation& h)>;

// (h(g1, g2), h(g2, g1)).
inline Operation binary_step(const Operation& g, const Operation& h) {
  const std::size_t d = g.domain_size(), n = ipow(d, 2);
  std::vector<Element> t(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t a = static_cast<std::size_t>(g.at(x, 0)), b = static_cast<std::size_t>(g.at(x, 1));
    t[2 * x] = h.at(a * d + b);
    t[2 * x + 1] = h.at(b * d + a);
  }
  return Operation(d, 2, 2, std::move(t));
}

// (h o g_{-1}, ..., h o g_{-m}).
inline Operation lift_step(const Operation& g, const Operation& h) {
  const std::size_t d = g.domain_size(), m = g.in_arity(), n = ipow(d, m);
  std::vector<Element> t(m * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (i != j) idx = idx * d + static_cast<std::size_t>(g.at(x, i));
      t[m * x + j] = h.at(idx);
    }
  return Operation(d, m, m, std::move(t));
}

inline OperationGraph build_closure(const FractionalOperation& seed, std::size_t m, const StepFn& step,
                                    std::size_t cap_vertices) {
  OperationGraph g{m, {}, seed.support(), {}, seed};
  std::map<Operation, std::size_t> index;
  g.vertices.push_back(Operation::identity(seed.domain_size(), m));
  index.emplace(g.vertices[0], 0);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    g.edges.emplace_back();
    for (std::size_t h = 0; h < g.steps.size(); ++h) {
      Operation next = step(g.vertices[v], g.steps[h]);
      auto [it, fresh] = index.emplace(std::move(next), g.vertices.size());
      if (fresh) {
        g.vertices.push_back(it->first);
        require_cap(g.vertices.size(), cap_vertices, "closure graph vertices");
      }
      g.edges[v].emplace_back(h, it->second);
    }
  }
  return g;
}

/// Closure of the identity 2 -> 2 mapping under binary steps of w.
inline OperationGraph build_closure_graph(const FractionalOperation& w, const Caps& caps = Caps::desk()) {
  if (w.in_arity() != 2 || w.out_arity() != 1) throw std::invalid_argument("closure graph needs a binary 2 -> 1 fractional operation");
  return build_closure(w, 2, binary_step, caps.closure);
}

/// Closure of the identity m -> m mapping under lift steps of an (m-1)-ary w.
inline OperationGraph build_lift_graph(const FractionalOperation& w, std::size_t m, const Caps& caps = Caps::desk()) {
  if (m < 3 || w.in_arity() + 1 != m || w.out_arity() != 1)
    throw std::invalid_argument("lift graph needs an (m-1)-ary fractional operation with m >= 3");
  return build_closure(w, m, lift_step, caps.closure);
}

/// Lazy chain: p(g, g') = w(g, g')/2 + [g = g']/2.
inline std::vector<std::map<std::size_t, Rational>> markov_transitions(const OperationGraph& g) {
  std::vector<std::map<std::size_t, Rational>> p(g.vertices.size());
  const Rational half(1, 2);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    p[v][v] += half;
    for (const auto& [h, s] : g.edges[v]) p[v][s] += half * g.seed.weight(g.steps[h]);
  }
  return p;
}

/// Strongly connected components; `order` lists components sources first.
struct SccDecomposition {
  std::vector<std::size_t> component;          // per vertex
  std::vector<std::vector<std::size_t>> members;
  std::vector<bool> sink;                      // no edge leaves the component
  std::vector<std::size_t> order;
};

inline SccDecomposition strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size(), none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> low(n), num(n, none), stack;
  std::vector<bool> on_stack(n, false);
  SccDecomposition out;
  out.component.assign(n, none);
  std::size_t counter = 0;
  // Iterative Tarjan: frames of (vertex, next edge position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t root = 0; root < n; ++root) {
    if (num[root] != none) continue;
    frames.emplace_back(root, 0);
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (num[w] == none) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], num[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == num[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.members.size();
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        out.members.push_back(std::move(comp));
      }
    }
  }
  // Tarjan emits a component after everything reachable from it.
  for (std::size_t c = out.members.size(); c-- > 0;) out.order.push_back(c);
  out.sink.assign(out.members.size(), true);
  for (std::size_t v = 0; v < n; ++v)
    for (auto w : adj[v])
      if (out.component[w] != out.component[v]) out.sink[out.component[v]] = false;
  return out;
}

/// Vertices whose component is a sink, ascending.
inline std::vector<std::size_t> recurrent_states(const std::vector<std::vector<std::size_t>>& adj) {
  const SccDecomposition scc = strongly_connected(adj);
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (scc.sink[scc.component[v]]) out.push_back(v);
  return out;
}

inline std::vector<std::size_t> recurrent_states(const OperationGraph& g) { return recurrent_states(g.adjacency()); }

namespace detail {

// Solves A x = b exactly; A square and nonsingular.
inline std::vector<Rational> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(a[piv][c]) == 0) ++piv;
    if (piv == n) throw std::logic_error("singular linear system");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
  return b;
}

}  // namespace detail

// For c > 0 with sum 1 and x_j >= sum_i c_i x_i for every
// j, all x_j are equal. Returns false when the hypothesis fails; throws when
// the hypothesis holds and the conclusion does not.
inline bool convex_floor_forces_equal(const std::vector<Rational>& x, const std::vector<Rational>& c) {
  if (x.size() != c.size() || x.empty()) throw std::invalid_argument("convex_floor_forces_equal needs matching nonempty vectors");
  Rational total = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(c[i]) <= 0) throw std::invalid_argument("coefficients must be positive");
    total += c[i];
    mean += c[i] * x[i];
  }
  if (total != 1) throw std::invalid_argument("coefficients must sum to 1");
  for (const auto& v : x)
    if (v < mean) return false;
  for (const auto& v : x)
    if (v != x[0]) throw VerificationFailure("values above their convex mean are not all equal");
  return true;
}

/// A sink component with its unique stationary distribution.
struct SinkClass {
  std::vector<std::size_t> members;
  std::vector<Rational> lambda;   // aligned with members
  Rational mass;                  // probability of absorption from sigma
};

struct RhoResult {
  FractionalOperation rho;        // m -> m, supported on recurrent vertices
  FractionalOperation sigma;      // one step out of the identity
  OperationGraph graph;
  std::vector<std::size_t> recurrent;
  std::vector<SinkClass> sinks;
  std::size_t num_sccs = 0;
};

namespace detail {

inline FractionalOperation mapping_distribution(const OperationGraph& g, const std::vector<Rational>& mass) {
  FractionalOperation::Terms t;
  for (std::size_t v = 0; v < mass.size(); ++v)
    if (sgn(mass[v]) > 0) t.emplace(g.vertices[v], mass[v]);
  return FractionalOperation(std::move(t));
}

// Limit of sigma under the lazy chain: transient mass flows through the
// condensation in topological order, each sink holds its absorbed mass in
// proportion to its stationary distribution.
inline RhoResult absorb(OperationGraph graph, const ValuedLanguage& lang, const Caps& caps) {
  const std::size_t n = graph.vertices.size();
  const auto p = markov_transitions(graph);
  for (const auto& row : p) {
    Rational s = 0;
    for (const auto& [j, v] : row) s += v;
    if (s != 1) throw VerificationFailure("transition row does not sum to 1");
  }
  std::vector<Rational> sigma(n);
  for (const auto& [h, s] : graph.edges[0]) sigma[s] += graph.seed.weight(graph.steps[h]);

  const SccDecomposition scc = strongly_connected(graph.adjacency());
  std::vector<SinkClass> sinks;
  std::vector<std::size_t> recurrent;
  std::vector<Rational> inflow = sigma, rho(n);
  for (std::size_t c : scc.order) {
    const auto& mem = scc.members[c];
    const std::size_t k = mem.size();
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < k; ++i) pos[mem[i]] = i;
    if (!scc.sink[c]) {
      // x (I - Q) = b with Q the chain restricted to the component.
      std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
      std::vector<Rational> b(k);
      for (std::size_t i = 0; i < k; ++i) {
        a[i][i] += 1;
        b[i] = inflow[mem[i]];
        for (const auto& [j, v] : p[mem[i]])
          if (auto it = pos.find(j); it != pos.end()) a[it->second][i] -= v;
      }
      const std::vector<Rational> x = solve_square(std::move(a), std::move(b));
      for (std::size_t i = 0; i < k; ++i)
        for (const auto& [j, v] : p[mem[i]])
          if (!pos.count(j)) inflow[j] += x[i] * v;
      continue;
    }
    // lambda (P_H - I) = 0 with the last equation replaced by sum lambda = 1.
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i][i] -= 1;
      for (const auto& [j, v] : p[mem[i]]) a[pos.at(j)][i] += v;
    }
    a[k - 1].assign(k, Rational(1));
    b[k - 1] = 1;
    SinkClass sink{mem, solve_square(std::move(a), std::move(b)), 0};
    for (std::size_t i = 0; i < k; ++i) {
      if (sgn(sink.lambda[i]) <= 0) throw VerificationFailure("stationary distribution is not positive on its class");
      Rational back = 0;
      for (std::size_t r = 0; r < k; ++r)
        if (auto it = p[mem[r]].find(mem[i]); it != p[mem[r]].end()) back += sink.lambda[r] * it->second;
      if (back != sink.lambda[i]) throw VerificationFailure("stationary distribution is not a fixed point");
    }
    for (auto v : mem) sink.mass += inflow[v];
    for (std::size_t i = 0; i < k; ++i) rho[mem[i]] = sink.mass * sink.lambda[i];
    sinks.push_back(std::move(sink));
  }

  Rational total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    total += rho[v];
    if (scc.sink[scc.component[v]]) recurrent.push_back(v);
    else if (sgn(rho[v]) != 0) throw VerificationFailure("limit distribution charges a transient vertex");
  }
  if (total != 1) throw VerificationFailure("limit distribution does not sum to 1");
  RhoResult out{mapping_distribution(graph, rho), mapping_distribution(graph, sigma), std::move(graph),
                std::move(recurrent), std::move(sinks), scc.members.size()};
  if (auto chk = check_fractional_polymorphism(lang, out.rho, caps); !chk)
    throw VerificationFailure("limit distribution fails the inequality check on '" + lang.name(chk.violation->function) + "'");
  return out;
}

}  // namespace detail

/// The 2 -> 2 limit distribution for a binary w, verified on `lang`.
inline RhoResult stationary_rho(const ValuedLanguage& lang, const FractionalOperation& w, const Caps& caps = Caps::desk()) {
  if (w.domain_size() != lang.domain_size()) throw std::invalid_argument("fractional operation is over a different domain");
  return detail::absorb(build_closure_graph(w, caps), lang, caps);
}

/// f^m at the images of every input family under mapping g, for every
/// function: for each family the swap of any two rows at any one position
/// must leave f^m unchanged.
struct ExchangeViolation {
  Operation mapping;
  std::size_t function = 0;
  std::vector<Tuple> tuples;   // the image rows before the swap
  std::size_t position = 0;
  std::size_t row1 = 0, row2 = 0;
};

inline std::optional<ExchangeViolation> check_exchange_property(const ValuedLanguage& lang, const FractionalOperation& rho,
                                                                const Caps& caps = Caps::desk()) {
  const std::size_t d = lang.domain_size(), m = rho.in_arity();
  if (rho.out_arity() != m) throw std::invalid_argument("exchange property needs an m -> m fractional operation");
  const std::size_t cols = ipow(d, m);
  for (std::size_t fi = 0; fi < lang.size(); ++fi) {
    const CostFunction& f = lang.function(fi);
    const std::size_t r = f.arity();
    checked_power(cols, r, caps.states, "exchange property families");
    for (const auto& g : rho.support()) {
      std::vector<Tuple> rows(m, Tuple(r));
      TupleCounter fam(r, cols);
      do {
        for (std::size_t p = 0; p < r; ++p)
          for (std::size_t j = 0; j < m; ++j) rows[j][p] = g.at(static_cast<std::size_t>(fam.tuple()[p]), j);
        Rational base = 0;
        for (const auto& t : rows) base += f(t);
        for (std::size_t p = 0; p < r; ++p)
          for (std::size_t j1 = 0; j1 < m; ++j1)
            for (std::size_t j2 = j1 + 1; j2 < m; ++j2) {
              if (rows[j1][p] == rows[j2][p]) continue;
              Rational swapped = base - f(rows[j1]) - f(rows[j2]);
              std::swap(rows[j1][p], rows[j2][p]);
              swapped += f(rows[j1]) + f(rows[j2]);
              std::swap(rows[j1][p], rows[j2][p]);
              if (swapped != base) return ExchangeViolation{g, fi, rows, p, j1, j2};
            }
      } while (fam.next());
    }
  }
  return std::nullopt;
}

// On each sink class H, f^m(h(y)) is the same for every h in H: each value is
// at least its lambda-average, so they are all equal.
inline bool check_sink_invariance(const ValuedLanguage& lang, const RhoResult& r, const Caps& caps = Caps::desk()) {
  const std::size_t d = lang.domain_size(), m = r.graph.arity, cols = ipow(d, m);
  for (const auto& sink : r.sinks) {
    if (sink.members.size() == 1) continue;
    for (const auto& f : lang.functions()) {
      const std::size_t ar = f.arity();
      checked_power(cols, ar, caps.states, "sink invariance families");
      TupleCounter fam(ar, cols);
      Tuple arg(ar);
      do {
        std::vector<Rational> x;
        for (auto v : sink.members) {
          Rational s = 0;
          for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t p = 0; p < ar; ++p) arg[p] = r.graph.vertices[v].at(static_cast<std::size_t>(fam.tuple()[p]), j);
            s += f(arg);
          }
          x.push_back(s);
        }
        if (!convex_floor_forces_equal(x, sink.lambda)) return false;
      } while (fam.next());
    }
  }
  return true;
}

/// Pairs {a < b} with w_a = w_b = 1/2, where w_c sums rho over mappings
/// sending (a, b) to (c, c).
inline std::vector<std::pair<Element, Element>> submodular_pairs(const FractionalOperation& rho) {
  if (rho.in_arity() != 2 || rho.out_arity() != 2) throw std::invalid_argument("submodular_pairs needs a 2 -> 2 fractional operation");
  const std::size_t d = rho.domain_size();
  const Rational half(1, 2);
  std::vector<std::pair<Element, Element>> out;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      Rational wa = 0, wb = 0;
      for (const auto& [g, w] : rho.terms()) {
        const Element x = g.at(a * d + b, 0), y = g.at(a * d + b, 1);
        if (x == static_cast<Element>(a) && y == static_cast<Element>(a)) wa += w;
        if (x == static_cast<Element>(b) && y == static_cast<Element>(b)) wb += w;
      }
      if (wa == half && wb == half) out.emplace_back(static_cast<Element>(a), static_cast<Element>(b));
    }
  return out;
}

inline bool is_connected(std::size_t d, const std::vector<std::pair<Element, Element>>& edges) {
  if (d == 0) return true;
  std::vector<std::size_t> parent(d);
  for (std::size_t i = 0; i < d; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::size_t parts = d;
  for (const auto& [a, b] : edges) {
    const std::size_t ra = find(static_cast<std::size_t>(a)), rb = find(static_cast<std::size_t>(b));
    if (ra != rb) {
      parent[ra] = rb;
      --parts;
    }
  }
  return parts == 1;
}

namespace detail {

// Sorts the outputs of every support mapping, then gives each sorted
// coordinate weight 1/m.
inline FractionalOperation sorted_coordinates(const FractionalOperation& rho) {
  const std::size_t d = rho.domain_size(), m = rho.in_arity(), n = ipow(d, m);
  FractionalOperation::Terms t;
  const Rational share(1, static_cast<unsigned long>(m));
  for (const auto& [g, w] : rho.terms()) {
    std::vector<std::vector<Element>> comp(m, std::vector<Element>(n));
    std::vector<Element> out(m);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t j = 0; j < m; ++j) out[j] = g.at(x, j);
      std::sort(out.begin(), out.end());
      for (std::size_t j = 0; j < m; ++j) comp[j][x] = out[j];
    }
    for (auto& c : comp) t[Operation(d, m, 1, std::move(c))] += w * share;
  }
  return FractionalOperation(std::move(t));
}

inline void verify_symmetric(const ValuedLanguage& lang, const FractionalOperation& w, const Caps& caps) {
  for (const auto& g : w.support())
    if (!op_predicates(g).symmetric) throw VerificationFailure("sorted coordinate is not symmetric");
  if (auto chk = check_fractional_polymorphism(lang, w, caps); !chk)
    throw VerificationFailure("symmetrized operation fails the inequality check on '" + lang.name(chk.violation->function) + "'");
}

}  // namespace detail

/// Binary symmetric fractional polymorphism from a 2 -> 2 one with the
/// exchange property on `lang`.
inline FractionalOperation symmetrize(const ValuedLanguage& lang, const FractionalOperation& rho, const Caps& caps = Caps::desk()) {
  if (rho.in_arity() != 2 || rho.out_arity() != 2) throw std::invalid_argument("symmetrize needs a 2 -> 2 fractional operation");
  if (auto v = check_exchange_property(lang, rho, caps))
    throw VerificationFailure("exchange property fails on '" + lang.name(v->function) + "'");
  FractionalOperation w = detail::sorted_coordinates(rho);
  detail::verify_symmetric(lang, w, caps);
  return w;
}

struct LiftResult {
  FractionalOperation omega;   // m-ary symmetric
  RhoResult chain;
};

/// One arity step: an m-ary symmetric fractional polymorphism from an
/// (m-1)-ary one.
inline LiftResult lift_arity(const ValuedLanguage& lang, const FractionalOperation& w, std::size_t m,
                             const Caps& caps = Caps::desk()) {
  if (w.in_arity() + 1 != m || w.out_arity() != 1 || m < 3)
    throw std::invalid_argument("lift_arity needs an (m-1)-ary fractional operation and m >= 3");
  if (w.domain_size() != lang.domain_size()) throw std::invalid_argument("fractional operation is over a different domain");
  for (const auto& g : w.support())
    if (!op_predicates(g).symmetric) throw std::invalid_argument("lift_arity needs a symmetric fractional operation");
  if (!check_fractional_polymorphism(lang, w, caps)) throw std::invalid_argument("input is not a fractional polymorphism of the language");
  RhoResult chain = detail::absorb(build_lift_graph(w, m, caps), lang, caps);
  if (auto v = check_exchange_property(lang, chain.rho, caps))
    throw VerificationFailure("exchange property fails on '" + lang.name(v->function) + "'");
  FractionalOperation omega = detail::sorted_coordinates(chain.rho);
  detail::verify_symmetric(lang, omega, caps);
  return LiftResult{std::move(omega), std::move(chain)};
}

/// Repeated lift_arity from a binary symmetric w up to `target`.
inline FractionalOperation lift_to_arity(const ValuedLanguage& lang, FractionalOperation w, std::size_t target,
                                         const Caps& caps = Caps::desk()) {
  if (target < w.in_arity()) throw std::invalid_argument("target arity below the input arity");
  while (w.in_arity() < target) w = lift_arity(lang, w, w.in_arity() + 1, caps).omega;
  return w;
}

}  // namespace vcsplab
