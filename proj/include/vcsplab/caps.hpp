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
#include <stdexcept>
#include <string>
#include <string_view>

#include "vcsplab/errors.hpp"

namespace vcsplab {

/// Enumeration limits shared by every exhaustive routine.
struct Caps {
  std::size_t domain = 4;          ///< largest |D| accepted by LP constructions
  std::size_t arity = 4;           ///< largest function arity
  std::size_t closure = 20000;     ///< largest operation closure graph
  std::size_t states = 2000000;    ///< largest brute-force enumeration

  static Caps desk() { return Caps{}; }
  static Caps strict() { return Caps{3, 3, 5000, 200000}; }

  static Caps profile(std::string_view name) {
    if (name == "desk") return desk();
    if (name == "strict") return strict();
    throw std::invalid_argument("unknown caps profile '" + std::string(name) + "'");
  }

  void validate() const {
    if (domain == 0 || arity == 0 || closure == 0 || states == 0)
      throw std::invalid_argument("caps must be positive");
  }
};

inline void require_cap(std::size_t value, std::size_t cap, std::string_view what) {
  if (value > cap)
    throw CapExceeded(std::string(what) + " " + std::to_string(value) + " exceeds cap " +
                      std::to_string(cap));
}

// base^exp, throwing CapExceeded as soon as the result passes `cap`.
inline std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap,
                                 std::string_view what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base)
      throw CapExceeded(std::string(what) + " " + std::to_string(base) + "^" +
                        std::to_string(exp) + " exceeds cap " + std::to_string(cap));
    r *= base;
  }
  require_cap(r, cap, what);
  return r;
}

}  // namespace vcsplab
