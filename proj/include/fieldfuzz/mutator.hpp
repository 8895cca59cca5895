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
//
// Mutation stages over the MutationView bit buffer. The deterministic
// stage walks a fixed candidate sequence; the havoc stage emits exactly
// `energy` stacked-random candidates, which is what makes energy the
// experiment's unit of work.

#ifndef FIELDFUZZ_MUTATOR_HPP_
#define FIELDFUZZ_MUTATOR_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fieldfuzz/bitbuf.hpp"
#include "fieldfuzz/layout.hpp"
#include "fieldfuzz/rng.hpp"

namespace fieldfuzz {

inline constexpr std::array<uint8_t, 7> kInterestingBytes = {0,   1,   16, 32,
                                                             127, 128, 255};

struct MutationBudget {
  uint32_t energy = 1;      // havoc iterations for this pass
  uint64_t rng_state = 0;   // stream seed; same seed, same candidates
};

// Fixed candidate walk: single-bit flips at every position, then 2- and
// 4-bit flips, then whole-byte flips, byte arithmetic +/-1..16, and
// interesting-byte substitutions. Candidate count is a closed-form
// function of the view length only.
class DeterministicStage {
 public:
  explicit DeterministicStage(const BitBuf& base);

  // Writes the next candidate into `out`; false when exhausted.
  bool next(BitBuf& out);

 private:
  enum class Phase { kFlip1, kFlip2, kFlip4, kFlipByte, kArith, kInteresting, kDone };

  void advance_phase();

  BitBuf base_;
  Phase phase_ = Phase::kFlip1;
  uint32_t pos_ = 0;   // bit or byte index depending on phase
  uint32_t sub_ = 0;   // step within the current position
};

// Stacked random mutations: bit flips, byte sets, byte arithmetic,
// interesting bytes, bit-range copies within the view, and whole-field
// fills at segment granularity.
class HavocStage {
 public:
  HavocStage(const BitBuf& base, std::span<const ViewSegment> segments,
             const MutationBudget& budget);

  // Writes the next candidate into `out`; false after exactly
  // budget.energy candidates.
  bool next(BitBuf& out);

 private:
  void apply_one(BitBuf& buf);

  BitBuf base_;
  std::vector<ViewSegment> segments_;
  uint32_t energy_;
  uint32_t emitted_ = 0;
  Rng rng_;
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_MUTATOR_HPP_
