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

#include "fieldfuzz/mutator.hpp"

#include <algorithm>

namespace fieldfuzz {

DeterministicStage::DeterministicStage(const BitBuf& base) : base_(base) {}

void DeterministicStage::advance_phase() {
  const uint32_t n = base_.size_bits();
  const uint32_t whole_bytes = n / 8;
  pos_ = 0;
  sub_ = 0;
  switch (phase_) {
    case Phase::kFlip1:
      phase_ = (n >= 2) ? Phase::kFlip2 : Phase::kDone;
      if (phase_ == Phase::kFlip2) return;
      break;
    case Phase::kFlip2:
      if (n >= 4) {
        phase_ = Phase::kFlip4;
        return;
      }
      break;
    case Phase::kFlip4:
      if (whole_bytes >= 1) {
        phase_ = Phase::kFlipByte;
        return;
      }
      break;
    case Phase::kFlipByte:
      phase_ = Phase::kArith;
      return;
    case Phase::kArith:
      phase_ = Phase::kInteresting;
      return;
    default:
      break;
  }
  phase_ = Phase::kDone;
}

bool DeterministicStage::next(BitBuf& out) {
  const uint32_t n = base_.size_bits();
  const uint32_t whole_bytes = n / 8;
  for (;;) {
    switch (phase_) {
      case Phase::kFlip1:
        if (pos_ < n) {
          out = base_;
          out.flip(pos_);
          ++pos_;
          return true;
        }
        break;
      case Phase::kFlip2:
        if (pos_ + 1 < n) {
          out = base_;
          out.flip(pos_);
          out.flip(pos_ + 1);
          ++pos_;
          return true;
        }
        break;
      case Phase::kFlip4:
        if (pos_ + 3 < n) {
          out = base_;
          for (uint32_t k = 0; k < 4; ++k) out.flip(pos_ + k);
          ++pos_;
          return true;
        }
        break;
      case Phase::kFlipByte:
        if (pos_ < whole_bytes) {
          out = base_;
          out.set_byte(pos_, uint8_t(base_.byte(pos_) ^ 0xFF));
          ++pos_;
          return true;
        }
        break;
      case Phase::kArith:
        // Per byte: +1, -1, +2, -2, ... +16, -16 (wrapping).
        if (pos_ < whole_bytes) {
          const uint32_t delta = sub_ / 2 + 1;
          const bool negative = sub_ % 2 != 0;
          out = base_;
          const uint8_t old = base_.byte(pos_);
          out.set_byte(pos_, negative ? uint8_t(old - delta) : uint8_t(old + delta));
          if (++sub_ == 32) {
            sub_ = 0;
            ++pos_;
          }
          return true;
        }
        break;
      case Phase::kInteresting:
        if (pos_ < whole_bytes) {
          out = base_;
          out.set_byte(pos_, kInterestingBytes[sub_]);
          if (++sub_ == kInterestingBytes.size()) {
            sub_ = 0;
            ++pos_;
          }
          return true;
        }
        break;
      case Phase::kDone:
        return false;
    }
    advance_phase();
  }
}

HavocStage::HavocStage(const BitBuf& base, std::span<const ViewSegment> segments,
                       const MutationBudget& budget)
    : base_(base),
      segments_(segments.begin(), segments.end()),
      energy_(budget.energy),
      rng_(budget.rng_state) {}

bool HavocStage::next(BitBuf& out) {
  if (emitted_ >= energy_) return false;
  out = base_;
  // Small stacks dominate: on fixed layouts every extra mutation mostly
  // destroys an already-valid field.
  const uint32_t roll = rng_.below(100);
  const uint32_t stack = roll < 70 ? 1 : roll < 85 ? 2 : roll < 95 ? 4 : 8;
  for (uint32_t k = 0; k < stack; ++k) apply_one(out);
  ++emitted_;
  return true;
}

void HavocStage::apply_one(BitBuf& buf) {
  const uint32_t n = buf.size_bits();
  const uint32_t nbytes = uint32_t(buf.size_bytes());
  const uint32_t pick = rng_.below(100);
  if (pick < 12) {  // bit flip
    buf.flip(rng_.below(n));
  } else if (pick < 62) {  // byte set
    buf.set_byte(rng_.below(nbytes), rng_.next_byte());
  } else if (pick < 74) {  // byte arithmetic
    const uint32_t b = rng_.below(nbytes);
    const uint8_t delta = uint8_t(1 + rng_.below(16));
    const uint8_t old = buf.byte(b);
    buf.set_byte(b, rng_.below(2) ? uint8_t(old + delta) : uint8_t(old - delta));
  } else if (pick < 82) {  // interesting byte
    buf.set_byte(rng_.below(nbytes),
                 kInterestingBytes[rng_.below(uint32_t(kInterestingBytes.size()))]);
  } else if (pick < 85) {  // bit-range copy within the view
    const uint32_t len = 1 + rng_.below(std::min<uint32_t>(32, n));
    const uint32_t src = rng_.below(n - len + 1);
    const uint32_t dst = rng_.below(n - len + 1);
    BitBuf tmp(len);
    std::span<uint8_t> tmp_span(tmp.data(), tmp.size_bytes());
    copy_bits({buf.data(), buf.size_bytes()}, src, tmp_span, 0, len);
    copy_bits({tmp.data(), tmp.size_bytes()}, 0, {buf.data(), buf.size_bytes()},
              dst, len);
  } else {  // whole-field fill
    if (segments_.empty()) {
      buf.set_byte(rng_.below(nbytes), rng_.next_byte());
      return;
    }
    const ViewSegment& seg = segments_[rng_.below(uint32_t(segments_.size()))];
    for (uint32_t off = 0; off < seg.length_bits; off += 8) {
      const uint32_t chunk = std::min<uint32_t>(8, seg.length_bits - off);
      const uint8_t value = rng_.next_byte();
      for (uint32_t k = 0; k < chunk; ++k)
        buf.set(seg.view_offset_bits + off + k, (value >> (7 - k)) & 1);
    }
  }
}

}  // namespace fieldfuzz
