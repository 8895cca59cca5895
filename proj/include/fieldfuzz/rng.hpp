// Copyright 2026 The FieldFuzz Authors.
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

#ifndef FIELDFUZZ_RNG_HPP_
#define FIELDFUZZ_RNG_HPP_

#include <cstdint>
#include <random>

namespace fieldfuzz {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator. Bounded draws avoid std::uniform_int_distribution
// so the stream does not depend on the standard library version.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound); bound >= 1. Lemire reduction.
  uint32_t below(uint32_t bound) {
    const uint64_t x = uint32_t(next_u64());
    return uint32_t((x * bound) >> 32);
  }

  uint8_t next_byte() { return uint8_t(next_u64()); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_RNG_HPP_
