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

// Core vocabulary: domains, tuples, cost functions, valued languages,
// instances, (generalised) operations and fractional operations.
//
// All tables are flat and row-major: the tuple (t_0, ..., t_{m-1}) over a
// domain of size d lives at index sum_i t_i * d^(m-1-i).

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vcsplab/rational.hpp"

namespace vcsplab {

using Element = int;
using Tuple = std::vector<Element>;

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      throw std::overflow_error("table size overflow");
    r *= base;
  }
  return r;
}

inline std::size_t tuple_index(std::span<const Element> t, std::size_t d) {
  std::size_t idx = 0;
  for (Element e : t) idx = idx * d + static_cast<std::size_t>(e);
  return idx;
}

inline Tuple tuple_at(std::size_t index, std::size_t arity, std::size_t d) {
  Tuple t(arity);
  for (std::size_t i = arity; i-- > 0;) {
    t[i] = static_cast<Element>(index % d);
    index /= d;
  }
  return t;
}

// Odometer over D^arity in row-major order. Usage:
//   TupleCounter c(arity, d); do { ... c.tuple() ... } while (c.next());
class TupleCounter {
 public:
  TupleCounter(std::size_t arity, std::size_t d) : t_(arity, 0), d_(static_cast<Element>(d)) {}
  const Tuple& tuple() const { return t_; }
  bool next() {
    for (std::size_t i = t_.size(); i-- > 0;) {
      if (++t_[i] < d_) return true;
      t_[i] = 0;
    }
    return false;
  }

 private:
  Tuple t_;
  Element d_;
};

class Domain {
 public:
  explicit Domain(std::size_t size, std::vector<std::string> labels = {})
      : size_(size), labels_(std::move(labels)) {
    if (size_ == 0) throw std::invalid_argument("domain must be nonempty");
    if (!labels_.empty()) {
      if (labels_.size() != size_) throw std::invalid_argument("label count differs from domain size");
      std::set<std::string> seen(labels_.begin(), labels_.end());
      if (seen.size() != labels_.size()) throw std::invalid_argument("domain labels must be distinct");
    }
  }

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string label(Element a) const {
    check(a);
    return labels_.empty() ? std::to_string(a) : labels_[static_cast<std::size_t>(a)];
  }

  std::optional<Element> find(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<Element>(i);
    return std::nullopt;
  }

  bool contains(Element a) const { return a >= 0 && static_cast<std::size_t>(a) < size_; }
  void check(Element a) const {
    if (!contains(a)) throw std::out_of_range("domain element " + std::to_string(a) + " out of range");
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

class CostFunction {
 public:
  CostFunction(std::size_t domain_size, std::size_t arity, std::vector<Rational> table)
      : d_(domain_size), arity_(arity), table_(std::move(table)) {
    if (d_ == 0) throw std::invalid_argument("cost function over empty domain");
    if (arity_ == 0) throw std::invalid_argument("cost function arity must be positive");
    if (table_.size() != ipow(d_, arity_))
      throw std::invalid_argument("cost table has " + std::to_string(table_.size()) +
                                  " entries, expected " + std::to_string(ipow(d_, arity_)));
    for (const auto& v : table_)
      if (sgn(v) < 0) throw std::invalid_argument("cost values must be nonnegative");
  }

  template <class Fn>
  static CostFunction from_fn(std::size_t domain_size, std::size_t arity, Fn&& fn) {
    std::vector<Rational> table;
    table.reserve(ipow(domain_size, arity));
    TupleCounter c(arity, domain_size);
    do {
      table.emplace_back(fn(std::span<const Element>(c.tuple())));
    } while (c.next());
    return CostFunction(domain_size, arity, std::move(table));
  }

  std::size_t domain_size() const { return d_; }
  std::size_t arity() const { return arity_; }
  const std::vector<Rational>& table() const { return table_; }
  const Rational& at(std::size_t index) const { return table_[index]; }

  // Unchecked fast path.
  const Rational& operator()(std::span<const Element> t) const { return table_[tuple_index(t, d_)]; }

  friend bool operator==(const CostFunction&, const CostFunction&) = default;

 private:
  std::size_t d_;
  std::size_t arity_;
  std::vector<Rational> table_;
};

inline Rational evaluate(const CostFunction& f, std::span<const Element> t) {
  if (t.size() != f.arity())
    throw std::invalid_argument("tuple length " + std::to_string(t.size()) + " differs from arity " +
                                std::to_string(f.arity()));
  for (Element e : t)
    if (e < 0 || static_cast<std::size_t>(e) >= f.domain_size())
      throw std::out_of_range("domain element " + std::to_string(e) + " out of range");
  return f(t);
}

class ValuedLanguage {
 public:
  explicit ValuedLanguage(Domain domain) : domain_(std::move(domain)) {}

  const Domain& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }
  std::size_t size() const { return functions_.size(); }
  bool empty() const { return functions_.empty(); }

  const CostFunction& function(std::size_t i) const { return functions_.at(i); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<CostFunction>& functions() const { return functions_; }
  const std::vector<std::string>& names() const { return names_; }

  std::size_t add(std::string name, CostFunction f) {
    if (f.domain_size() != domain_.size())
      throw std::invalid_argument("function '" + name + "' is over a different domain");
    if (index_of(name)) throw std::invalid_argument("duplicate function name '" + name + "'");
    names_.push_back(std::move(name));
    functions_.push_back(std::move(f));
    return functions_.size() - 1;
  }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t max_arity() const {
    std::size_t r = 0;
    for (const auto& f : functions_) r = std::max(r, f.arity());
    return r;
  }

  friend bool operator==(const ValuedLanguage&, const ValuedLanguage&) = default;

 private:
  Domain domain_;
  std::vector<std::string> names_;
  std::vector<CostFunction> functions_;
};

struct Constraint {
  Rational weight;
  std::size_t function;               // index into the instance's language
  std::vector<std::size_t> scope;     // variable indices, length = arity

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// sum_i w_i * f_i(x^i) over a fixed valued language.
class VcspInstance {
 public:
  explicit VcspInstance(ValuedLanguage language) : language_(std::move(language)) {}

  const ValuedLanguage& language() const { return language_; }
  std::size_t domain_size() const { return language_.domain_size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t num_variables() const { return variables_.size(); }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  std::size_t add_variable(std::string name) {
    if (variable_index(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
    variables_.push_back(std::move(name));
    return variables_.size() - 1;
  }

  std::optional<std::size_t> variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == name) return i;
    return std::nullopt;
  }

  void add_constraint(Rational weight, std::size_t function, std::vector<std::size_t> scope) {
    if (sgn(weight) < 0) throw std::invalid_argument("constraint weight must be nonnegative");
    if (function >= language_.size()) throw std::out_of_range("constraint references unknown function");
    if (scope.size() != language_.function(function).arity())
      throw std::invalid_argument("scope length differs from arity of '" + language_.name(function) + "'");
    for (auto v : scope)
      if (v >= variables_.size()) throw std::out_of_range("scope references undeclared variable");
    constraints_.push_back(Constraint{std::move(weight), function, std::move(scope)});
  }

  void add_constraint(Rational weight, const std::string& function,
                      const std::vector<std::string>& scope) {
    auto fi = language_.index_of(function);
    if (!fi) throw std::invalid_argument("unknown function '" + function + "'");
    std::vector<std::size_t> idx;
    for (const auto& v : scope) {
      auto vi = variable_index(v);
      if (!vi) throw std::invalid_argument("undeclared variable '" + v + "'");
      idx.push_back(*vi);
    }
    add_constraint(std::move(weight), *fi, std::move(idx));
  }

  friend bool operator==(const VcspInstance&, const VcspInstance&) = default;

 private:
  ValuedLanguage language_;
  std::vector<std::string> variables_;
  std::vector<Constraint> constraints_;
};

// Total map from the instance's variables (by index) to domain elements.
using Assignment = std::vector<Element>;

inline Rational instance_value(const VcspInstance& inst, const Assignment& h) {
  if (h.size() != inst.num_variables())
    throw std::invalid_argument("assignment covers " + std::to_string(h.size()) + " of " +
                                std::to_string(inst.num_variables()) + " variables");
  for (Element e : h)
    if (e < 0 || static_cast<std::size_t>(e) >= inst.domain_size())
      throw std::out_of_range("assignment value out of range");
  Rational total = 0;
  Tuple t;
  for (const auto& c : inst.constraints()) {
    t.resize(c.scope.size());
    for (std::size_t p = 0; p < c.scope.size(); ++p) t[p] = h[c.scope[p]];
    total += c.weight * inst.language().function(c.function)(t);
  }
  return total;
}

/// A mapping D^m -> D^k stored as an explicit table; k = 1 for ordinary
/// operations. Entry j of the image of input tuple t is at
/// table[tuple_index(t) * k + j]. Ordering is lexicographic on
/// (m, k, d, table) so maps keyed by operations iterate deterministically.
class Operation {
 public:
  Operation(std::size_t domain_size, std::size_t in_arity, std::size_t out_arity,
            std::vector<Element> table)
      : m_(in_arity), k_(out_arity), d_(domain_size), table_(std::move(table)) {
    if (d_ == 0 || m_ == 0 || k_ == 0) throw std::invalid_argument("operation arities and domain must be positive");
    if (table_.size() != ipow(d_, m_) * k_)
      throw std::invalid_argument("operation table has wrong size");
    for (Element e : table_)
      if (e < 0 || static_cast<std::size_t>(e) >= d_)
        throw std::out_of_range("operation value out of range");
  }

  template <class Fn>
  static Operation from_fn(std::size_t d, std::size_t m, std::size_t k, Fn&& fn) {
    std::vector<Element> table;
    table.reserve(ipow(d, m) * k);
    TupleCounter c(m, d);
    do {
      Tuple out = fn(std::span<const Element>(c.tuple()));
      if (out.size() != k) throw std::invalid_argument("operation builder returned wrong width");
      table.insert(table.end(), out.begin(), out.end());
    } while (c.next());
    return Operation(d, m, k, std::move(table));
  }

  // 1 : D^m -> D^m.
  static Operation identity(std::size_t d, std::size_t m) {
    return from_fn(d, m, m, [](std::span<const Element> t) { return Tuple(t.begin(), t.end()); });
  }

  // pi_i : D^m -> D, zero-based i.
  static Operation projection(std::size_t d, std::size_t m, std::size_t i) {
    return from_fn(d, m, 1, [i](std::span<const Element> t) { return Tuple{t[i]}; });
  }

  std::size_t domain_size() const { return d_; }
  std::size_t in_arity() const { return m_; }
  std::size_t out_arity() const { return k_; }
  const std::vector<Element>& table() const { return table_; }

  Element at(std::size_t in_index, std::size_t j = 0) const { return table_[in_index * k_ + j]; }

  Tuple apply(std::span<const Element> in) const {
    if (in.size() != m_) throw std::invalid_argument("operation applied to wrong number of arguments");
    for (Element e : in)
      if (e < 0 || static_cast<std::size_t>(e) >= d_) throw std::out_of_range("argument out of range");
    const std::size_t base = tuple_index(in, d_) * k_;
    return Tuple(table_.begin() + static_cast<std::ptrdiff_t>(base),
                 table_.begin() + static_cast<std::ptrdiff_t>(base + k_));
  }

  // Output coordinate j as an m-ary operation.
  Operation component(std::size_t j) const {
    std::vector<Element> t(ipow(d_, m_));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = at(i, j);
    return Operation(d_, m_, 1, std::move(t));
  }

  friend auto operator<=>(const Operation& a, const Operation& b) {
    if (auto c = a.m_ <=> b.m_; c != 0) return c;
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    if (auto c = a.d_ <=> b.d_; c != 0) return c;
    return a.table_ <=> b.table_;
  }
  friend bool operator==(const Operation&, const Operation&) = default;

 private:
  std::size_t m_;
  std::size_t k_;
  std::size_t d_;
  std::vector<Element> table_;
};

/// Applies g to m tuples of a common length n, position by position.
inline std::vector<Tuple> apply_componentwise(const Operation& g, const std::vector<Tuple>& tuples) {
  if (tuples.size() != g.in_arity())
    throw std::invalid_argument("expected " + std::to_string(g.in_arity()) + " tuples");
  const std::size_t n = tuples.empty() ? 0 : tuples.front().size();
  for (const auto& t : tuples) {
    if (t.size() != n) throw std::invalid_argument("tuples differ in length");
    for (Element e : t)
      if (e < 0 || static_cast<std::size_t>(e) >= g.domain_size()) throw std::out_of_range("tuple entry out of range");
  }
  std::vector<Tuple> out(g.out_arity(), Tuple(n));
  Tuple column(g.in_arity());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t i = 0; i < tuples.size(); ++i) column[i] = tuples[i][p];
    const std::size_t idx = tuple_index(column, g.domain_size());
    for (std::size_t j = 0; j < g.out_arity(); ++j) out[j][p] = g.at(idx, j);
  }
  return out;
}

struct OpFlags {
  bool idempotent = false;
  bool symmetric = false;
  bool cyclic = false;
  std::optional<bool> injective;  // unary operations only

  friend bool operator==(const OpFlags&, const OpFlags&) = default;
};

inline OpFlags op_predicates(const Operation& g) {
  if (g.out_arity() != 1) throw std::invalid_argument("op_predicates needs an operation with one output");
  const std::size_t m = g.in_arity(), d = g.domain_size();
  OpFlags flags{true, true, true, std::nullopt};
  for (std::size_t a = 0; a < d; ++a) {
    Tuple diag(m, static_cast<Element>(a));
    if (g.at(tuple_index(diag, d)) != static_cast<Element>(a)) flags.idempotent = false;
  }
  // The cyclic shift and the transposition (0 1) generate S_m.
  TupleCounter c(m, d);
  Tuple shifted(m), swapped;
  do {
    const auto& t = c.tuple();
    const Element v = g.at(tuple_index(t, d));
    for (std::size_t i = 0; i < m; ++i) shifted[i] = t[(i + 1) % m];
    if (g.at(tuple_index(shifted, d)) != v) flags.cyclic = false;
    if (m >= 2) {
      swapped = t;
      std::swap(swapped[0], swapped[1]);
      if (g.at(tuple_index(swapped, d)) != v) flags.symmetric = false;
    }
  } while (c.next());
  if (!flags.cyclic) flags.symmetric = false;
  if (m == 1) {
    std::vector<bool> hit(d, false);
    bool inj = true;
    for (std::size_t a = 0; a < d; ++a) {
      auto v = static_cast<std::size_t>(g.at(a));
      if (hit[v]) inj = false;
      hit[v] = true;
    }
    flags.injective = inj;
  }
  return flags;
}

inline std::size_t image_size(const Operation& g) {
  std::set<Element> img(g.table().begin(), g.table().end());
  return img.size();
}

/// A probability distribution over generalised operations D^m -> D^k.
class FractionalOperation {
 public:
  using Terms = std::map<Operation, Rational>;

  explicit FractionalOperation(Terms terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("fractional operation with empty support");
    const Operation& first = terms_.begin()->first;
    Rational total = 0;
    for (const auto& [g, w] : terms_) {
      if (g.in_arity() != first.in_arity() || g.out_arity() != first.out_arity() ||
          g.domain_size() != first.domain_size())
        throw std::invalid_argument("fractional operation mixes arities or domains");
      if (sgn(w) <= 0) throw std::invalid_argument("fractional operation weights must be positive");
      total += w;
    }
    if (total != 1) throw std::invalid_argument("fractional operation weights sum to " + to_string(total));
  }

  static FractionalOperation indicator(Operation g) {
    Terms t;
    t.emplace(std::move(g), Rational(1));
    return FractionalOperation(std::move(t));
  }

  // Drops nonpositive entries and rescales so the weights sum to one.
  static FractionalOperation normalized(const Terms& raw) {
    Rational total = 0;
    for (const auto& [g, w] : raw)
      if (sgn(w) > 0) total += w;
    if (sgn(total) <= 0) throw std::invalid_argument("cannot normalize a zero fractional operation");
    Terms t;
    for (const auto& [g, w] : raw)
      if (sgn(w) > 0) t.emplace(g, w / total);
    return FractionalOperation(std::move(t));
  }

  std::size_t in_arity() const { return terms_.begin()->first.in_arity(); }
  std::size_t out_arity() const { return terms_.begin()->first.out_arity(); }
  std::size_t domain_size() const { return terms_.begin()->first.domain_size(); }
  const Terms& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }

  std::vector<Operation> support() const {
    std::vector<Operation> s;
    for (const auto& [g, w] : terms_) s.push_back(g);
    return s;
  }

  Rational weight(const Operation& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const FractionalOperation&, const FractionalOperation&) = default;

 private:
  Terms terms_;
};

/// (u, h) with u unary and h binary over one domain.
struct UnaryFunctionPair {
  CostFunction u;
  CostFunction h;
};

// Commonly used operations.
inline Operation min_op(std::size_t d) {
  return Operation::from_fn(d, 2, 1, [](std::span<const Element> t) { return Tuple{std::min(t[0], t[1])}; });
}
inline Operation max_op(std::size_t d) {
  return Operation::from_fn(d, 2, 1, [](std::span<const Element> t) { return Tuple{std::max(t[0], t[1])}; });
}

}  // namespace vcsplab
