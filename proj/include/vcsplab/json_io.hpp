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

// JSON reading and writing for languages, instances, fractional operations
// and the result types of the pipeline.
//
// Rationals are written as "p/q" strings ("p" for integers) and read from
// strings, JSON integers, or {"exact": "p/q", ...} objects. Objects keep
// insertion order so output is byte-stable.

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcsplab/blp.hpp"
#include "vcsplab/bruteforce.hpp"
#include "vcsplab/classifier.hpp"
#include "vcsplab/core.hpp"
#include "vcsplab/foundation.hpp"
#include "vcsplab/langops.hpp"
#include "vcsplab/markov.hpp"
#include "vcsplab/rational.hpp"

namespace vcsplab {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JsonOptions {
  bool decimal = false;  ///< add a floating-point "approx" next to each exact value
};

inline Json rational_json(const Rational& r, const JsonOptions& opt = {}) {
  if (!opt.decimal) return to_string(r);
  Json j;
  j["exact"] = to_string(r);
  j["approx"] = to_double(r);
  return j;
}

inline Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()), 10);
    if (j.is_object() && j.contains("exact")) return rational_from_json(j.at("exact"), where);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a rational as \"p/q\" or an integer");
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::size_t size_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_unsigned()) throw ParseError(where + "." + key + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

inline const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_array()) throw ParseError(where + "." + key + ": expected an array");
  return v;
}

inline std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

inline Json element_json(const Domain& dom, Element a) {
  if (dom.has_labels()) return dom.label(a);
  return a;
}

inline Json tuple_json(const Domain& dom, const Tuple& t) {
  Json out = Json::array();
  for (Element a : t) out.push_back(element_json(dom, a));
  return out;
}

inline Json rationals_json(const std::vector<Rational>& v, const JsonOptions& opt) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(rational_json(r, opt));
  return out;
}

// Converts constructor argument errors into parse errors with a location.
template <class Fn>
auto guarded(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

// ---- languages -------------------------------------------------------------

inline Json to_json(const CostFunction& f, const std::string& name, const JsonOptions& opt = {}) {
  Json j;
  j["name"] = name;
  j["arity"] = f.arity();
  j["table"] = detail::rationals_json(f.table(), opt);
  return j;
}

inline Json to_json(const ValuedLanguage& lang, const JsonOptions& opt = {}) {
  Json j;
  j["domain"]["size"] = lang.domain_size();
  if (lang.domain().has_labels()) j["domain"]["labels"] = lang.domain().labels();
  j["functions"] = Json::array();
  for (std::size_t i = 0; i < lang.size(); ++i) j["functions"].push_back(to_json(lang.function(i), lang.name(i), opt));
  return j;
}

inline ValuedLanguage language_from_json(const Json& j) {
  const std::string where = "language";
  const Json& dom = detail::field(j, "domain", where);
  const std::size_t d = detail::size_field(dom, "size", where + ".domain");
  std::vector<std::string> labels;
  if (dom.contains("labels")) {
    const Json& l = detail::array_field(dom, "labels", where + ".domain");
    for (std::size_t i = 0; i < l.size(); ++i) labels.push_back(detail::string_of(l[i], where + ".domain.labels"));
  }
  ValuedLanguage lang = detail::guarded(where + ".domain", [&] { return ValuedLanguage(Domain(d, labels)); });
  const Json& fs = detail::array_field(j, "functions", where);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string fw = where + ".functions[" + std::to_string(i) + "]";
    const std::string name = detail::string_of(detail::field(fs[i], "name", fw), fw + ".name");
    const std::size_t arity = detail::size_field(fs[i], "arity", fw);
    const Json& t = detail::array_field(fs[i], "table", fw);
    std::vector<Rational> table;
    for (std::size_t k = 0; k < t.size(); ++k) table.push_back(rational_from_json(t[k], fw + ".table[" + std::to_string(k) + "]"));
    detail::guarded(fw, [&] { return lang.add(name, CostFunction(d, arity, std::move(table))); });
  }
  return lang;
}

// ---- instances -------------------------------------------------------------

inline Json to_json(const VcspInstance& inst, const JsonOptions& opt = {}) {
  Json j;
  j["language"] = to_json(inst.language(), opt);
  j["variables"] = inst.variables();
  j["constraints"] = Json::array();
  for (const auto& c : inst.constraints()) {
    Json cj;
    cj["weight"] = rational_json(c.weight, opt);
    cj["function"] = inst.language().name(c.function);
    cj["scope"] = Json::array();
    for (auto v : c.scope) cj["scope"].push_back(inst.variables()[v]);
    j["constraints"].push_back(std::move(cj));
  }
  return j;
}

/// `base` resolves a language given as a path; relative paths are taken
/// from the directory of the instance file.
inline VcspInstance instance_from_json(const Json& j, const std::filesystem::path& base = {}) {
  const std::string where = "instance";
  const Json& lj = detail::field(j, "language", where);
  ValuedLanguage lang = lj.is_string() ? language_from_json(read_json_file(base / lj.get<std::string>()))
                                       : language_from_json(lj);
  VcspInstance inst(std::move(lang));
  const Json& vars = detail::array_field(j, "variables", where);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string name = detail::string_of(vars[i], where + ".variables[" + std::to_string(i) + "]");
    if (inst.variable_index(name)) throw ParseError(where + ": duplicate variable '" + name + "'");
    inst.add_variable(name);
  }
  const Json& cs = detail::array_field(j, "constraints", where);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string cw = where + ".constraints[" + std::to_string(i) + "]";
    const Rational w = cs[i].contains("weight") ? rational_from_json(cs[i].at("weight"), cw + ".weight") : Rational(1);
    const std::string fn = detail::string_of(detail::field(cs[i], "function", cw), cw + ".function");
    std::vector<std::string> scope;
    for (const auto& v : detail::array_field(cs[i], "scope", cw)) scope.push_back(detail::string_of(v, cw + ".scope"));
    detail::guarded(cw, [&] {
      inst.add_constraint(w, fn, scope);
      return 0;
    });
  }
  return inst;
}

// ---- fractional operations -------------------------------------------------

inline Json to_json(const Operation& g) {
  Json j;
  j["table"] = g.table();
  return j;
}

inline Json to_json(const FractionalOperation& w, const JsonOptions& opt = {}) {
  Json j;
  j["domainSize"] = w.domain_size();
  j["inArity"] = w.in_arity();
  j["outArity"] = w.out_arity();
  j["terms"] = Json::array();
  for (const auto& [g, weight] : w.terms()) {
    Json t;
    t["weight"] = rational_json(weight, opt);
    t["op"] = to_json(g);
    j["terms"].push_back(std::move(t));
  }
  return j;
}

/// `domain_size` is used when the document has no "domainSize" field.
inline FractionalOperation fractional_operation_from_json(const Json& j, std::size_t domain_size = 0) {
  const std::string where = "fractional operation";
  const std::size_t d = j.contains("domainSize") ? detail::size_field(j, "domainSize", where) : domain_size;
  if (d == 0) throw ParseError(where + ": domain size unknown");
  if (domain_size != 0 && d != domain_size)
    throw ParseError(where + ": domain size " + std::to_string(d) + " differs from language domain size " +
                     std::to_string(domain_size));
  const std::size_t m = detail::size_field(j, "inArity", where), k = detail::size_field(j, "outArity", where);
  FractionalOperation::Terms terms;
  const Json& ts = detail::array_field(j, "terms", where);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string tw = where + ".terms[" + std::to_string(i) + "]";
    const Rational w = rational_from_json(detail::field(ts[i], "weight", tw), tw + ".weight");
    const Json& table = detail::array_field(detail::field(ts[i], "op", tw), "table", tw + ".op");
    std::vector<Element> entries;
    for (const auto& e : table) {
      if (!e.is_number_integer()) throw ParseError(tw + ".op.table: expected integers");
      entries.push_back(e.get<Element>());
    }
    Operation g = detail::guarded(tw + ".op", [&] { return Operation(d, m, k, std::move(entries)); });
    if (!terms.emplace(std::move(g), w).second) throw ParseError(tw + ": repeated operation");
  }
  return detail::guarded(where, [&] { return FractionalOperation(std::move(terms)); });
}

// ---- results ---------------------------------------------------------------

inline Json to_json(const FpolCheck& c, const ValuedLanguage& lang, const JsonOptions& opt = {}) {
  Json j;
  j["holds"] = c.holds;
  if (c.violation) {
    const FpolViolation& v = *c.violation;
    Json vj;
    vj["function"] = lang.name(v.function);
    vj["tuples"] = Json::array();
    for (const auto& t : v.tuples) vj["tuples"].push_back(detail::tuple_json(lang.domain(), t));
    vj["lhs"] = rational_json(v.lhs, opt);
    vj["rhs"] = rational_json(v.rhs, opt);
    j["violation"] = std::move(vj);
  }
  return j;
}

inline Json to_json(const CoreReport& r, const CoreExtraction& core, const ValuedLanguage& lang,
                    const JsonOptions& opt = {}) {
  Json j;
  j["isCore"] = r.is_core;
  if (r.witness) j["witness"] = to_json(*r.witness, opt);
  Json cj;
  cj["subset"] = Json::array();
  for (Element a : core.subset) cj["subset"].push_back(detail::element_json(lang.domain(), a));
  cj["size"] = core.subset.size();
  cj["language"] = to_json(core.language, opt);
  cj["steps"] = Json::array();
  for (const auto& s : core.steps) cj["steps"].push_back(to_json(s, opt));
  j["core"] = std::move(cj);
  return j;
}

inline Json to_json(const HardnessWitness& h, const JsonOptions& opt = {}) {
  Json j;
  j["pair"] = Json::array({h.a, h.b});
  j["h"]["table"] = detail::rationals_json(h.h.table(), opt);
  j["instance"] = to_json(h.instance, opt);
  return j;
}

inline Json to_json(const ClassificationResult& r, const ValuedLanguage& lang, const JsonOptions& opt = {}) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  Json cj;
  cj["subset"] = Json::array();
  for (Element a : r.core.subset) cj["subset"].push_back(detail::element_json(lang.domain(), a));
  cj["language"] = to_json(r.core.language, opt);
  j["core"] = std::move(cj);
  if (r.tractable_witness) j["witness"] = to_json(*r.tractable_witness, opt);
  if (r.hardness) {
    Json g = to_json(*r.hardness, opt);
    g["pairOriginal"] = Json::array({detail::element_json(lang.domain(), r.core.subset[static_cast<std::size_t>(r.hardness->a)]),
                                     detail::element_json(lang.domain(), r.core.subset[static_cast<std::size_t>(r.hardness->b)])});
    j["gadget"] = std::move(g);
  }
  if (r.mcprime) {
    j["mcprime"]["u"]["table"] = detail::rationals_json(r.mcprime->u.table(), opt);
    j["mcprime"]["h"]["table"] = detail::rationals_json(r.mcprime->h.table(), opt);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const BlpSolution& s, const VcspInstance& inst, const JsonOptions& opt = {}) {
  Json j;
  j["method"] = "blp";
  j["value"] = rational_json(s.value, opt);
  if (s.integral) {
    Json a = Json::object();
    for (std::size_t x = 0; x < inst.num_variables(); ++x)
      for (std::size_t v = 0; v < s.mu[x].size(); ++v)
        if (s.mu[x][v] == 1) a[inst.variables()[x]] = detail::element_json(inst.language().domain(), static_cast<Element>(v));
    j["assignment"] = std::move(a);
  }
  Json mu = Json::object();
  for (std::size_t x = 0; x < inst.num_variables(); ++x) mu[inst.variables()[x]] = detail::rationals_json(s.mu[x], opt);
  j["mu"] = std::move(mu);
  j["integral"] = s.integral;
  return j;
}

inline Json to_json(const ExactSolution& s, const VcspInstance& inst, const std::string& method,
                    const JsonOptions& opt = {}) {
  Json j;
  j["method"] = method;
  j["value"] = rational_json(s.value, opt);
  Json a = Json::object();
  for (std::size_t x = 0; x < inst.num_variables(); ++x)
    a[inst.variables()[x]] = detail::element_json(inst.language().domain(), s.assignment[x]);
  j["assignment"] = std::move(a);
  j["integral"] = true;
  return j;
}

inline Json graph_stats_json(const RhoResult& r) {
  Json j;
  j["vertices"] = r.graph.vertices.size();
  j["sccs"] = r.num_sccs;
  j["recurrent"] = r.recurrent.size();
  return j;
}

inline Json to_json(const RhoResult& r, const JsonOptions& opt = {}) {
  Json j;
  j["fpol"] = to_json(r.rho, opt);
  j["graph"] = graph_stats_json(r);
  return j;
}

inline Json to_json(const PairGadgetResult& r, const JsonOptions& opt = {}) {
  Json j;
  if (r.gadget) j["gadget"] = to_json(*r.gadget, opt);
  if (r.certificate) j["certificate"] = to_json(*r.certificate, opt);
  return j;
}

}  // namespace vcsplab
