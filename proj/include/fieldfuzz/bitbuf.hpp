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

#ifndef FIELDFUZZ_BITBUF_HPP_
#define FIELDFUZZ_BITBUF_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace fieldfuzz {

// Compact bit buffer with MSB-first addressing: bit 0 of byte 0 is the
// byte's most significant bit. Unused tail bits of the last byte are kept
// zero so whole-buffer comparisons work on the byte representation.
class BitBuf {
 public:
  BitBuf() = default;
  explicit BitBuf(uint32_t len_bits) : data_((len_bits + 7) / 8), len_bits_(len_bits) {}

  static BitBuf from_bytes(std::span<const uint8_t> bytes, uint32_t len_bits);

  uint32_t size_bits() const { return len_bits_; }
  size_t size_bytes() const { return data_.size(); }
  bool empty() const { return len_bits_ == 0; }

  bool get(uint32_t i) const { return (data_[i >> 3] >> (7 - (i & 7))) & 1; }

  void set(uint32_t i, bool v) {
    const uint8_t mask = uint8_t(1u << (7 - (i & 7)));
    if (v)
      data_[i >> 3] |= mask;
    else
      data_[i >> 3] &= uint8_t(~mask);
  }

  void flip(uint32_t i) { data_[i >> 3] ^= uint8_t(1u << (7 - (i & 7))); }

  uint8_t byte(size_t b) const { return data_[b]; }

  // Writes a whole byte, masking away any bits past size_bits().
  void set_byte(size_t b, uint8_t v) {
    data_[b] = v & valid_mask(b);
  }

  std::span<const uint8_t> bytes() const { return data_; }
  uint8_t* data() { return data_.data(); }
  const uint8_t* data() const { return data_.data(); }

  friend bool operator==(const BitBuf&, const BitBuf&) = default;

 private:
  uint8_t valid_mask(size_t b) const {
    const uint32_t used = (b + 1 < data_.size() || len_bits_ % 8 == 0)
                              ? 8
                              : len_bits_ % 8;
    return uint8_t(0xFFu << (8 - used));
  }

  std::vector<uint8_t> data_;
  uint32_t len_bits_ = 0;
};

// Copies `len` bits from src starting at bit src_off to dst starting at bit
// dst_off, MSB-first addressing on both sides. Ranges must be in bounds;
// overlapping spans within one buffer are not supported.
void copy_bits(std::span<const uint8_t> src, uint32_t src_off,
               std::span<uint8_t> dst, uint32_t dst_off, uint32_t len);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_BITBUF_HPP_
