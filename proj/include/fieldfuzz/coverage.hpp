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
// Edge coverage recording and novelty detection. Edges are (prev >> 1) ^
// cur transitions over 16-bit site ids, counted in a 64 KiB map and
// classified into coarse hit-count buckets before comparison against the
// campaign-global virgin map.

#ifndef FIELDFUZZ_COVERAGE_HPP_
#define FIELDFUZZ_COVERAGE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace fieldfuzz {

inline constexpr size_t kMapSize = 65536;

namespace detail {
constexpr std::array<uint8_t, 256> make_bucket_lut() {
  std::array<uint8_t, 256> lut{};
  lut[0] = 0;
  lut[1] = 1;
  lut[2] = 2;
  lut[3] = 4;
  for (int i = 4; i <= 7; ++i) lut[i] = 8;
  for (int i = 8; i <= 15; ++i) lut[i] = 16;
  for (int i = 16; i <= 31; ++i) lut[i] = 32;
  for (int i = 32; i <= 127; ++i) lut[i] = 64;
  for (int i = 128; i <= 255; ++i) lut[i] = 128;
  return lut;
}
inline constexpr std::array<uint8_t, 256> kBucketLut = make_bucket_lut();
}  // namespace detail

// One-hot bucket mask for a raw hit count: 0->0, 1->bit0, 2->bit1, 3->bit2,
// 4-7->bit3, 8-15->bit4, 16-31->bit5, 32-127->bit6, 128-255->bit7.
inline uint8_t bucket_for_count(uint8_t count) { return detail::kBucketLut[count]; }

class CoverageMap {
 public:
  CoverageMap() : counts_(kMapSize, 0) {}

  void record_edge(uint16_t site) {
    uint8_t& c = counts_[uint16_t(site ^ prev_location_)];
    if (c != 0xFF) ++c;
    prev_location_ = uint16_t(site >> 1);
    clean_ = false;
  }

  // Zeroes counters and the rolling edge state. Skips the map walk when no
  // edge has been recorded since the last reset.
  void reset();

  std::span<const uint8_t> counts() const { return counts_; }
  std::span<uint8_t> mutable_counts() { return counts_; }
  uint16_t prev_location() const { return prev_location_; }
  bool clean() const { return clean_; }

 private:
  friend struct ScanAccess;
  std::vector<uint8_t> counts_;
  uint16_t prev_location_ = 0;
  bool clean_ = true;
};

// Classify every raw counter into its bucket mask. out.size() must equal
// counts.size().
void classify_counts(std::span<const uint8_t> counts, std::span<uint8_t> out);

enum class Novelty { kNothing = 0, kNewBucket = 1, kNewEdge = 2 };

// Campaign-global record of every bucket bit ever observed.
class VirginMap {
 public:
  VirginMap() : seen_(kMapSize, 0) {}
  std::span<const uint8_t> seen() const { return seen_; }
  std::span<uint8_t> mutable_seen() { return seen_; }

 private:
  std::vector<uint8_t> seen_;
};

// Compares a classified map against the virgin map, ORs the new bits in,
// and reports the strongest kind of novelty found.
Novelty has_new_bits(VirginMap& virgin, std::span<const uint8_t> classified);

struct ScanResult {
  Novelty novelty = Novelty::kNothing;
  uint32_t popcount = 0;     // set bits across the classified map
  uint64_t fingerprint = 0;  // order-stable hash of (index, bucket) pairs
};

// Single fused pass over a raw coverage map: classifies, checks novelty
// against `virgin` (skipped when null), accumulates popcount and
// fingerprint, and zeroes the map for the next execution. Equivalent to
// classify_counts + has_new_bits + reset; kept as one walk because it runs
// once per execution.
ScanResult scan_and_reset(CoverageMap& map, VirginMap* virgin);

// Fingerprint of a classified map, matching what scan_and_reset reports.
uint64_t coverage_fingerprint(std::span<const uint8_t> classified);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_COVERAGE_HPP_
