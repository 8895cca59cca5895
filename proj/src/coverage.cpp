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

#include "fieldfuzz/coverage.hpp"

#include <bit>
#include <cstring>

namespace fieldfuzz {

struct ScanAccess {
  static void mark_clean(CoverageMap& m) {
    m.clean_ = true;
    m.prev_location_ = 0;
  }
};

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

inline uint64_t load_u64(const uint8_t* p) {
  uint64_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

// True when the 64-byte block starting at p is all zero.
inline bool block_is_zero(const uint8_t* p) {
  uint64_t acc = 0;
  for (int k = 0; k < 8; ++k) acc |= load_u64(p + 8 * k);
  return acc == 0;
}

}  // namespace

void CoverageMap::reset() {
  prev_location_ = 0;
  if (clean_) return;
  uint8_t* counts = counts_.data();
  for (size_t base = 0; base < kMapSize; base += 64) {
    if (!block_is_zero(counts + base)) std::memset(counts + base, 0, 64);
  }
  clean_ = true;
}

void classify_counts(std::span<const uint8_t> counts, std::span<uint8_t> out) {
  for (size_t i = 0; i < counts.size(); ++i) out[i] = detail::kBucketLut[counts[i]];
}

Novelty has_new_bits(VirginMap& virgin, std::span<const uint8_t> classified) {
  Novelty nov = Novelty::kNothing;
  std::span<uint8_t> seen = virgin.mutable_seen();
  for (size_t i = 0; i < classified.size(); ++i) {
    const uint8_t cls = classified[i];
    if (cls == 0) continue;
    const uint8_t old = seen[i];
    if (cls & ~old) {
      const Novelty kind = (old == 0) ? Novelty::kNewEdge : Novelty::kNewBucket;
      if (kind > nov) nov = kind;
      seen[i] = uint8_t(old | cls);
    }
  }
  return nov;
}

uint64_t coverage_fingerprint(std::span<const uint8_t> classified) {
  uint64_t fp = kFnvOffset;
  for (size_t i = 0; i < classified.size(); ++i) {
    const uint8_t cls = classified[i];
    if (cls == 0) continue;
    fp ^= uint64_t(i);
    fp *= kFnvPrime;
    fp ^= cls;
    fp *= kFnvPrime;
  }
  return fp;
}

ScanResult scan_and_reset(CoverageMap& map, VirginMap* virgin) {
  ScanResult res;
  res.fingerprint = kFnvOffset;
  uint8_t* counts = map.mutable_counts().data();
  uint8_t* seen = virgin ? virgin->mutable_seen().data() : nullptr;

  if (!map.clean()) {
    for (size_t base = 0; base < kMapSize; base += 64) {
      if (block_is_zero(counts + base)) continue;
      for (size_t i = base; i < base + 64; ++i) {
        const uint8_t c = counts[i];
        if (c == 0) continue;
        const uint8_t cls = detail::kBucketLut[c];
        res.popcount += uint32_t(std::popcount(cls));
        res.fingerprint ^= uint64_t(i);
        res.fingerprint *= kFnvPrime;
        res.fingerprint ^= cls;
        res.fingerprint *= kFnvPrime;
        if (seen) {
          const uint8_t old = seen[i];
          if (cls & ~old) {
            const Novelty kind = (old == 0) ? Novelty::kNewEdge : Novelty::kNewBucket;
            if (kind > res.novelty) res.novelty = kind;
            seen[i] = uint8_t(old | cls);
          }
        }
        counts[i] = 0;
      }
    }
  }
  ScanAccess::mark_clean(map);
  return res;
}

}  // namespace fieldfuzz
