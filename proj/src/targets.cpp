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

#include "fieldfuzz/targets.hpp"

#include "fieldfuzz/errors.hpp"
#include "fieldfuzz/rng.hpp"

namespace fieldfuzz {

namespace {

constexpr uint32_t kInputBytes = 64;

// Per-level deterministic work units; linear growth means deep runs look
// slow to the scheduler the way deep driver calls are slow in the wild.
constexpr uint64_t kLevelCost = 40;

constexpr uint16_t kNestedEntrySite = 0x1100;
constexpr uint16_t kNestedClassifySite = 0x1d00;
constexpr uint16_t kNestedHiNibbleSite = 0x2300;
constexpr uint16_t kNestedHiByteSite = 0x2900;
constexpr uint16_t kNestedLoNibbleSite = 0x3500;
constexpr uint16_t kNestedFullSite = 0x3b00;
constexpr uint16_t kMagicEntrySite = 0x4700;
constexpr uint16_t kMagicByteSite = 0x4900;
constexpr uint16_t kMagicFullSite = 0x4e00;
constexpr uint16_t kSpinEntrySite = 0x5b00;
constexpr uint16_t kSpinLoopSite = 0x5d00;

void check_input_len(std::span<const uint8_t> input) {
  if (input.size() != kInputBytes)
    throw FuzzError("target expects a 64-byte input, got " +
                    std::to_string(input.size()));
}

LayoutSpec gate_layout(uint32_t n_gates) {
  std::vector<FieldSpec> fields;
  fields.push_back({"header", 0, 32, FieldMode::kKeep});
  for (uint32_t i = 0; i < n_gates; ++i)
    fields.push_back({"gate" + std::to_string(i), 32 + 16 * i, 16, FieldMode::kFuzz});
  const uint32_t used = 32 + 16 * n_gates;
  fields.push_back({"pad", used, kInputBytes * 8 - used, FieldMode::kKeep});
  return LayoutSpec::make(kInputBytes * 8, std::move(fields));
}

LayoutSpec knob_layout(const char* knob_name) {
  std::vector<FieldSpec> fields;
  fields.push_back({knob_name, 0, 32, FieldMode::kFuzz});
  fields.push_back({"pad", 32, kInputBytes * 8 - 32, FieldMode::kKeep});
  return LayoutSpec::make(kInputBytes * 8, std::move(fields));
}

}  // namespace

NestedGateTarget::NestedGateTarget(std::string name, uint32_t n_gates,
                                   uint64_t key_seed)
    : name_(std::move(name)), layout_(gate_layout(n_gates)) {
  keys_.reserve(n_gates);
  const uint64_t base = splitmix64(key_seed ^ 0x6e65737465640ULL);
  for (uint32_t i = 0; i < n_gates; ++i)
    keys_.push_back(uint16_t(splitmix64(base + i)));
}

void NestedGateTarget::level(uint32_t i, std::span<const uint8_t> input,
                             ProbeContext& ctx) {
  ProbeContext::CallScope scope(ctx);
  ctx.record_edge(uint16_t(kNestedEntrySite + i));
  ctx.charge(kLevelCost);

  // Range checks before exact checks, the way parameter validation tends
  // to be written; each stage is a distinct coverage edge.
  const uint8_t hi = input[4 + 2 * i];
  const uint8_t lo = input[5 + 2 * i];
  const uint8_t key_hi = uint8_t(keys_[i] >> 8);
  const uint8_t key_lo = uint8_t(keys_[i]);
  if ((hi >> 4) != (key_hi >> 4)) return;
  ctx.record_edge(uint16_t(kNestedHiNibbleSite + i));
  if (hi != key_hi) return;
  ctx.record_edge(uint16_t(kNestedHiByteSite + i));
  if ((lo >> 4) != (key_lo >> 4)) return;
  ctx.record_edge(uint16_t(kNestedLoNibbleSite + i));
  if (lo != key_lo) return;
  ctx.record_edge(uint16_t(kNestedFullSite + i));

  if (i + 1 == keys_.size()) throw TargetFault{"deep_bug"};
  level(i + 1, input, ctx);
}

void NestedGateTarget::run(std::span<const uint8_t> input, ProbeContext& ctx) {
  check_input_len(input);
  // Shallow parameter classification before any validity gate: a branch
  // per value class of the last field's low byte. Gives the input space
  // the broad, mostly-rejected surface the gates sit behind.
  const uint8_t tail = input[3 + 2 * uint32_t(keys_.size())];
  ctx.record_edge(uint16_t(kNestedClassifySite + (tail >> 4)));
  level(0, input, ctx);
}

MagicTarget::MagicTarget(uint64_t key_seed) : layout_(knob_layout("magic")) {
  const uint64_t bits = splitmix64(key_seed ^ 0x6d6167696333320ULL);
  for (size_t j = 0; j < magic_.size(); ++j)
    magic_[j] = uint8_t(bits >> (8 * j));
}

void MagicTarget::run(std::span<const uint8_t> input, ProbeContext& ctx) {
  check_input_len(input);
  ProbeContext::CallScope scope(ctx);
  ctx.record_edge(kMagicEntrySite);
  ctx.charge(kLevelCost);
  for (size_t j = 0; j < magic_.size(); ++j) {
    if (input[j] != magic_[j]) return;
    ctx.record_edge(uint16_t(kMagicByteSite + j));
  }
  ctx.record_edge(kMagicFullSite);
  throw TargetFault{"magic_hit"};
}

SpinTarget::SpinTarget() : layout_(knob_layout("knob")) {}

void SpinTarget::run(std::span<const uint8_t> input, ProbeContext& ctx) {
  check_input_len(input);
  ProbeContext::CallScope scope(ctx);
  ctx.record_edge(kSpinEntrySite);
  ctx.charge(kLevelCost);
  const uint32_t knob = uint32_t(input[0]) << 24 | uint32_t(input[1]) << 16 |
                        uint32_t(input[2]) << 8 | uint32_t(input[3]);
  if (knob != kSpinMagic) return;
  ctx.record_edge(kSpinLoopSite);
  ctx.charge(100000);
  while (!ctx.past_deadline()) {
  }
}

std::unique_ptr<Target> make_target(std::string_view name, uint64_t rng_seed) {
  if (name == "nested4")
    return std::make_unique<NestedGateTarget>("nested4", 4, rng_seed);
  if (name == "nested8")
    return std::make_unique<NestedGateTarget>("nested8", 8, rng_seed);
  if (name == "magic32") return std::make_unique<MagicTarget>(rng_seed);
  if (name == "spin") return std::make_unique<SpinTarget>();
  throw FuzzError("unknown target '" + std::string(name) +
                  "' (known: nested4, nested8, magic32, spin)");
}

}  // namespace fieldfuzz
