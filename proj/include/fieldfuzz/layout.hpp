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
// Field layout of a fixed-size binary input, and the extract/restore
// round trip that confines mutation to the fuzzable fields.
//
// Layout spec file format (UTF-8 text, one declaration per line, `#`
// starts a comment):
//
//   len <N>                                   total input length in BYTES
//   <name> <offset_bits> <length_bits> <fuzz|keep>
//
// Bit addressing is MSB-first: bit 0 of byte 0 is its most significant
// bit. Fields must not overlap; bits not covered by any field are frozen.

#ifndef FIELDFUZZ_LAYOUT_HPP_
#define FIELDFUZZ_LAYOUT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldfuzz/bitbuf.hpp"
#include "fieldfuzz/errors.hpp"

namespace fieldfuzz {

enum class FieldMode { kFuzz, kKeep };

struct FieldSpec {
  std::string name;
  uint32_t offset_bits = 0;
  uint32_t length_bits = 0;
  FieldMode mode = FieldMode::kKeep;
};

// One contiguous run of fuzzable bits: where it sits in the mutation view
// and where it came from in the full input.
struct ViewSegment {
  uint32_t view_offset_bits = 0;
  uint32_t source_offset_bits = 0;
  uint32_t length_bits = 0;

  friend bool operator==(const ViewSegment&, const ViewSegment&) = default;
};

// The concatenated bits of all fuzz fields plus the mapping back.
struct MutationView {
  BitBuf bits;
  std::vector<ViewSegment> segments;
};

class LayoutSpec {
 public:
  LayoutSpec() = default;

  // Validates, sorts fields by offset. Throws SpecError on overlap,
  // out-of-range fields, duplicate names, or bad total length.
  static LayoutSpec make(uint32_t total_len_bits, std::vector<FieldSpec> fields);

  // Parses the line-based spec file format. Throws SpecError with the
  // offending 1-based line number.
  static LayoutSpec parse(std::string_view text);

  // Emits the spec file form; parse(format()) reproduces the layout.
  std::string format() const;

  uint32_t total_len_bits() const { return total_len_bits_; }
  size_t total_len_bytes() const { return total_len_bits_ / 8; }
  std::span<const FieldSpec> fields() const { return fields_; }
  uint32_t fuzz_len_bits() const { return fuzz_len_bits_; }
  bool has_fuzz_field() const { return fuzz_len_bits_ > 0; }
  std::span<const ViewSegment> view_segments() const { return segments_; }

 private:
  uint32_t total_len_bits_ = 0;
  uint32_t fuzz_len_bits_ = 0;
  std::vector<FieldSpec> fields_;
  std::vector<ViewSegment> segments_;
};

// Pulls the fuzz-field bits out of a full input. Throws FuzzError when the
// input length does not match the spec.
MutationView extract(const LayoutSpec& spec, std::span<const uint8_t> input);

// Splices view bits back into a copy of the original input. Bits outside
// fuzz fields always come from the original. Throws FuzzError on length or
// segment-shape mismatch.
std::vector<uint8_t> restore(const LayoutSpec& spec,
                             std::span<const uint8_t> original,
                             const MutationView& view);

// Hot-path variant: same splice given just the view bits, writing into a
// caller-provided buffer already holding the original bytes.
void restore_into(const LayoutSpec& spec, const BitBuf& view_bits,
                  std::span<uint8_t> inout);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_LAYOUT_HPP_
