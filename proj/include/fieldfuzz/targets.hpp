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
// Synthetic benchmark targets shaped like driver entry points: layered
// parameter-validity checks guarding deep logic. All are deterministic in
// the input bytes; per-level cost charging makes deeper runs "slower" in
// the deterministic duration the scheduler sees.

#ifndef FIELDFUZZ_TARGETS_HPP_
#define FIELDFUZZ_TARGETS_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fieldfuzz/executor.hpp"

namespace fieldfuzz {

// Chain of n 16-bit gates over a 64-byte input. Gate i reads the
// big-endian field at byte offset 4 + 2i and calls the next level (inside
// a depth guard) iff it equals gate key i; passing the last gate raises
// Crash("deep_bug"). Byte-wise short-circuit comparison gives coverage an
// edge per matched half, so the gates are climbable the way real
// validity checks are. For runs that do not crash, max_depth equals
// 1 + the number of consecutive leading gates passed.
class NestedGateTarget : public Target {
 public:
  NestedGateTarget(std::string name, uint32_t n_gates, uint64_t key_seed);

  std::string_view name() const override { return name_; }
  const LayoutSpec& layout() const override { return layout_; }
  void run(std::span<const uint8_t> input, ProbeContext& ctx) override;

  uint32_t n_gates() const { return uint32_t(keys_.size()); }
  const std::vector<uint16_t>& gate_keys() const { return keys_; }

 private:
  void level(uint32_t i, std::span<const uint8_t> input, ProbeContext& ctx);

  std::string name_;
  std::vector<uint16_t> keys_;
  LayoutSpec layout_;
};

// Single 4-byte magic comparison at offset 0, depth-flat (one guard).
// Raises Crash("magic_hit") on a full match. Control target for schedule
// experiments: call depth carries no signal here.
class MagicTarget : public Target {
 public:
  explicit MagicTarget(uint64_t key_seed);

  std::string_view name() const override { return "magic32"; }
  const LayoutSpec& layout() const override { return layout_; }
  void run(std::span<const uint8_t> input, ProbeContext& ctx) override;

  const std::array<uint8_t, 4>& magic() const { return magic_; }

 private:
  std::array<uint8_t, 4> magic_;
  LayoutSpec layout_;
};

// Loops past any deadline when the 4-byte knob equals kSpinMagic;
// otherwise returns immediately. Exercises the Timeout path.
class SpinTarget : public Target {
 public:
  static constexpr uint32_t kSpinMagic = 0xFEEDFACE;

  SpinTarget();

  std::string_view name() const override { return "spin"; }
  const LayoutSpec& layout() const override { return layout_; }
  void run(std::span<const uint8_t> input, ProbeContext& ctx) override;

 private:
  LayoutSpec layout_;
};

// Known names: nested4, nested8, magic32, spin. Key material is derived
// reproducibly from rng_seed. Throws FuzzError for unknown names.
std::unique_ptr<Target> make_target(std::string_view name, uint64_t rng_seed);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_TARGETS_HPP_
