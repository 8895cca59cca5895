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

#include "fieldfuzz/bitbuf.hpp"

#include <cstring>

namespace fieldfuzz {

BitBuf BitBuf::from_bytes(std::span<const uint8_t> bytes, uint32_t len_bits) {
  BitBuf buf(len_bits);
  const size_t n = buf.data_.size();
  std::memcpy(buf.data_.data(), bytes.data(), n);
  if (len_bits % 8 != 0) buf.data_[n - 1] &= buf.valid_mask(n - 1);
  return buf;
}

void copy_bits(std::span<const uint8_t> src, uint32_t src_off,
               std::span<uint8_t> dst, uint32_t dst_off, uint32_t len) {
  // Byte-aligned runs take the memcpy path; everything else goes bit by bit.
  if ((src_off & 7) == 0 && (dst_off & 7) == 0) {
    const uint32_t whole = len / 8;
    if (whole > 0)
      std::memcpy(dst.data() + dst_off / 8, src.data() + src_off / 8, whole);
    src_off += whole * 8;
    dst_off += whole * 8;
    len -= whole * 8;
  }
  for (uint32_t i = 0; i < len; ++i) {
    const uint32_t s = src_off + i;
    const uint32_t d = dst_off + i;
    const uint8_t bit = (src[s >> 3] >> (7 - (s & 7))) & 1;
    const uint8_t mask = uint8_t(1u << (7 - (d & 7)));
    if (bit)
      dst[d >> 3] |= mask;
    else
      dst[d >> 3] &= uint8_t(~mask);
  }
}

}  // namespace fieldfuzz
