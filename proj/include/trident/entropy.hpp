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

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace trident {

// Source of non-reproducible choices: selection draws, salts, nonces and
// identifiers. Instances are single-owner.
class EntropySource {
 public:
  virtual ~EntropySource() = default;

  virtual std::uint64_t next_u64() = 0;

  void fill(std::span<std::uint8_t> out);

  // Uniform in [lo, hi], unbiased.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  template <std::size_t N>
  std::array<std::uint8_t, N> bytes() {
    std::array<std::uint8_t, N> out{};
    fill(out);
    return out;
  }
};

// Operating-system CSPRNG.
class SystemEntropy final : public EntropySource {
 public:
  std::uint64_t next_u64() override;
};

// Reproducible source for scenario runs and tests. Not for production keys.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trident
