// Copyright 2026 The Trident Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trident/keystream.hpp"

namespace trident {

struct CheckResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;

  bool ok() const { return passed == total; }
};

// Runs the library's invariants over `trials` randomized accounts built from
// `seed`, against an in-memory store.
std::vector<CheckResult> run_selftest(const MasterKey& key, std::uint64_t seed,
                                      std::size_t trials);

}  // namespace trident
