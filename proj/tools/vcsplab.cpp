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

// vcsplab: classify finite-valued constraint languages, solve instances,
// and check or construct fractional polymorphisms.
//
// Usage: vcsplab <command> [options] <files...>
//
// Exit codes:
//   0   success (classify: tractable)
//   1   verification failure or internal error
//   2   classify: NP-hard
//   3   inconclusive, or an enumeration cap was exceeded
//   64  usage or input parse error

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "vcsplab/json_io.hpp"

using namespace vcsplab;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kHard = 2;
constexpr int kInconclusive = 3;
constexpr int kUsage = 64;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct CliConfig {
  Caps caps;
  std::optional<std::size_t> domain, arity, closure, states;
  std::string output = "json";
  bool decimal = false;

  Caps effective_caps() const {
    Caps c = caps;
    if (domain) c.domain = *domain;
    if (arity) c.arity = *arity;
    if (closure) c.closure = *closure;
    if (states) c.states = *states;
    c.validate();
    return c;
  }
  JsonOptions json_options() const { return JsonOptions{decimal}; }
};

void emit(const CliConfig& cfg, const Json& j) {
  std::cout << (cfg.output == "pretty" ? j.dump(2) : j.dump()) << "\n";
}

ValuedLanguage load_language(const std::string& path) { return language_from_json(read_json_file(path)); }

// Accepts a bare fractional operation or a command output that carries one
// under "fpol" or "witness".
FractionalOperation load_fpol(const std::string& path, std::size_t domain_size) {
  const Json j = read_json_file(path);
  for (const char* key : {"fpol", "witness"})
    if (j.is_object() && !j.contains("terms") && j.contains(key)) return fractional_operation_from_json(j.at(key), domain_size);
  return fractional_operation_from_json(j, domain_size);
}

Element parse_element(const Domain& dom, const std::string& text) {
  if (auto e = dom.find(text)) return *e;
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && dom.contains(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("'" + text + "' is not an element of the domain");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_classify(const CliConfig& cfg, const std::string& file) {
  const ValuedLanguage lang = load_language(file);
  const ClassificationResult r = classify(lang, cfg.effective_caps());
  emit(cfg, to_json(r, lang, cfg.json_options()));
  switch (r.verdict) {
    case Verdict::Tractable: return kOk;
    case Verdict::NPHard: return kHard;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kFailure;
}

int cmd_solve(const CliConfig& cfg, const std::string& file, const std::string& method) {
  const Caps caps = cfg.effective_caps();
  const VcspInstance inst = instance_from_json(read_json_file(file), std::filesystem::path(file).parent_path());
  const JsonOptions opt = cfg.json_options();
  if (method == "blp") {
    emit(cfg, to_json(solve_blp(inst, caps), inst, opt));
  } else if (method == "exact") {
    emit(cfg, to_json(brute_force_solve(inst, caps), inst, "exact", opt));
  } else {
    const ClassificationResult r = classify(inst.language(), caps);
    if (r.verdict == Verdict::Tractable) {
      // The relaxation is exact on every instance over a tractable language.
      Json j = to_json(extract_assignment(inst, caps), inst, "blp", opt);
      j["verdict"] = to_string(r.verdict);
      emit(cfg, j);
    } else {
      Json j = to_json(brute_force_solve(inst, caps), inst, "exact", opt);
      j["verdict"] = to_string(r.verdict);
      emit(cfg, j);
    }
  }
  return kOk;
}

int cmd_core(const CliConfig& cfg, const std::string& file) {
  const Caps caps = cfg.effective_caps();
  const ValuedLanguage lang = load_language(file);
  emit(cfg, to_json(is_core(lang, caps), find_core(lang, caps), lang, cfg.json_options()));
  return kOk;
}

int cmd_check_fpol(const CliConfig& cfg, const std::string& lang_file, const std::string& fpol_file) {
  const ValuedLanguage lang = load_language(lang_file);
  const FractionalOperation w = load_fpol(fpol_file, lang.domain_size());
  emit(cfg, to_json(check_fractional_polymorphism(lang, w, cfg.effective_caps()), lang, cfg.json_options()));
  return kOk;
}

int cmd_gadget(const CliConfig& cfg, const std::string& file, const std::string& pair) {
  const Caps caps = cfg.effective_caps();
  const ValuedLanguage lang = load_language(file);
  const auto comma = pair.find(',');
  if (comma == std::string::npos) throw ParseError("--pair expects a,b");
  const Element a = parse_element(lang.domain(), pair.substr(0, comma));
  const Element b = parse_element(lang.domain(), pair.substr(comma + 1));
  const ValuedLanguage pinned = gamma_c(lang, caps.arity);
  emit(cfg, to_json(pair_hardness_gadget(pinned, a, b, caps), cfg.json_options()));
  return kOk;
}

int cmd_lift(const CliConfig& cfg, const std::string& lang_file, const std::string& fpol_file, std::size_t arity) {
  const Caps caps = cfg.effective_caps();
  const ValuedLanguage lang = load_language(lang_file);
  FractionalOperation w = load_fpol(fpol_file, lang.domain_size());
  if (arity <= w.in_arity()) throw std::invalid_argument("--arity must exceed the input arity");
  std::optional<RhoResult> last;
  while (w.in_arity() < arity) {
    LiftResult step = lift_arity(lang, w, w.in_arity() + 1, caps);
    w = std::move(step.omega);
    last = std::move(step.chain);
  }
  Json j;
  j["fpol"] = to_json(w, cfg.json_options());
  j["graph"] = graph_stats_json(*last);
  emit(cfg, j);
  return kOk;
}

int cmd_rho(const CliConfig& cfg, const std::string& lang_file, const std::string& fpol_file) {
  const ValuedLanguage lang = load_language(lang_file);
  const FractionalOperation w = load_fpol(fpol_file, lang.domain_size());
  emit(cfg, to_json(stationary_rho(lang, w, cfg.effective_caps()), cfg.json_options()));
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Finite-valued constraint language classification and fractional polymorphisms", "vcsplab"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::string profile = "desk";
  if (const char* env = std::getenv("VCSPLAB_CAPS_PROFILE")) profile = env;

  app.add_option("--caps.domain", cfg.domain, "Largest domain size")->check(CLI::PositiveNumber);
  app.add_option("--caps.arity", cfg.arity, "Largest function arity")->check(CLI::PositiveNumber);
  app.add_option("--caps.closure", cfg.closure, "Largest operation closure graph")->check(CLI::PositiveNumber);
  app.add_option("--caps.states", cfg.states, "Largest brute-force enumeration")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "Output format")->check(CLI::IsMember({"json", "pretty"}));
  app.add_flag("--decimal", cfg.decimal, "Add approximate decimal values (not authoritative)");

  std::string lang_file, fpol_file, inst_file, method = "auto", pair;
  std::size_t arity = 3;
  std::function<int()> action;

  auto* classify_cmd = app.add_subcommand("classify", "Decide tractable or NP-hard with a witness");
  classify_cmd->add_option("language", lang_file, "Language file")->required();
  classify_cmd->callback([&] { action = [&] { return cmd_classify(cfg, lang_file); }; });

  auto* solve_cmd = app.add_subcommand("solve", "Minimize an instance");
  solve_cmd->add_option("instance", inst_file, "Instance file")->required();
  solve_cmd->add_option("--method", method, "blp, exact or auto")->check(CLI::IsMember({"blp", "exact", "auto"}));
  solve_cmd->callback([&] { action = [&] { return cmd_solve(cfg, inst_file, method); }; });

  auto* core_cmd = app.add_subcommand("core", "Core test and core extraction");
  core_cmd->add_option("language", lang_file, "Language file")->required();
  core_cmd->callback([&] { action = [&] { return cmd_core(cfg, lang_file); }; });

  auto* check_cmd = app.add_subcommand("check-fpol", "Check a fractional polymorphism");
  check_cmd->add_option("language", lang_file, "Language file")->required();
  check_cmd->add_option("fpol", fpol_file, "Fractional operation file")->required();
  check_cmd->callback([&] { action = [&] { return cmd_check_fpol(cfg, lang_file, fpol_file); }; });

  auto* gadget_cmd = app.add_subcommand("gadget", "Hardness gadget search for one pair");
  gadget_cmd->add_option("language", lang_file, "Language file")->required();
  gadget_cmd->add_option("--pair", pair, "Two distinct domain elements a,b")->required();
  gadget_cmd->callback([&] { action = [&] { return cmd_gadget(cfg, lang_file, pair); }; });

  auto* lift_cmd = app.add_subcommand("lift", "Lift a symmetric fractional polymorphism to a higher arity");
  lift_cmd->alias("lift-fpol");
  lift_cmd->add_option("language", lang_file, "Language file")->required();
  lift_cmd->add_option("fpol", fpol_file, "Symmetric fractional polymorphism file")->required();
  lift_cmd->add_option("--arity", arity, "Target arity")->check(CLI::Range(3, 16));
  lift_cmd->callback([&] { action = [&] { return cmd_lift(cfg, lang_file, fpol_file, arity); }; });

  auto* rho_cmd = app.add_subcommand("rho", "Limit distribution of the operation Markov chain");
  rho_cmd->add_option("language", lang_file, "Language file")->required();
  rho_cmd->add_option("fpol", fpol_file, "Binary fractional polymorphism file")->required();
  rho_cmd->callback([&] { action = [&] { return cmd_rho(cfg, lang_file, fpol_file); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    cfg.caps = Caps::profile(profile);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: VCSPLAB_CAPS_PROFILE: " << e.what() << "\n";
    return kUsage;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kInconclusive;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kFailure;
  } catch (const InternalInconsistency& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
