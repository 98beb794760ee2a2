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

#include <stdexcept>
#include <string>

namespace vcsplab {

// An enumeration bound (domain size, arity, closure size, brute-force
// states) would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed witness failed its exact re-verification, or an input broke a
// precondition that only shows up during the computation (for example BLP
// extraction on an instance where the relaxation is not exact).
class VerificationFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The classifier found neither a tractability witness nor a hardness gadget
// on a complete search.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace vcsplab
