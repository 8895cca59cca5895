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

#include "fieldfuzz/layout.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <unordered_set>

namespace fieldfuzz {

namespace {

// Validation shared by make() and parse(). `lines`, when given, maps each
// field index to its 1-based source line for diagnostics.
void validate(uint32_t total_len_bits, std::vector<FieldSpec>& fields,
              const std::vector<int>* lines_by_field) {
  auto line_of = [&](size_t idx) {
    return lines_by_field ? (*lines_by_field)[idx] : 0;
  };

  if (total_len_bits == 0 || total_len_bits % 8 != 0)
    throw SpecError(0, "total length must be a positive number of bytes");

  std::unordered_set<std::string_view> names;
  for (size_t i = 0; i < fields.size(); ++i) {
    const FieldSpec& f = fields[i];
    if (f.name.empty())
      throw SpecError(line_of(i), "field name must not be empty");
    if (!names.insert(f.name).second)
      throw SpecError(line_of(i), "duplicate field name '" + f.name + "'");
    if (f.length_bits == 0)
      throw SpecError(line_of(i), "field '" + f.name + "' has zero length");
    if (uint64_t(f.offset_bits) + f.length_bits > total_len_bits)
      throw SpecError(line_of(i), "field '" + f.name + "' exceeds total input length");
  }

  std::vector<size_t> order(fields.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return fields[a].offset_bits < fields[b].offset_bits;
  });

  for (size_t k = 1; k < order.size(); ++k) {
    const FieldSpec& prev = fields[order[k - 1]];
    const FieldSpec& cur = fields[order[k]];
    if (cur.offset_bits < prev.offset_bits + prev.length_bits)
      throw SpecError(line_of(order[k]), "field '" + cur.name +
                                             "' overlaps field '" + prev.name + "'");
  }

  std::vector<FieldSpec> sorted;
  sorted.reserve(fields.size());
  for (size_t idx : order) sorted.push_back(std::move(fields[idx]));
  fields = std::move(sorted);
}

bool parse_u32(std::string_view tok, uint32_t& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> toks;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

LayoutSpec LayoutSpec::make(uint32_t total_len_bits, std::vector<FieldSpec> fields) {
  validate(total_len_bits, fields, nullptr);
  LayoutSpec spec;
  spec.total_len_bits_ = total_len_bits;
  spec.fields_ = std::move(fields);
  uint32_t view_off = 0;
  for (const FieldSpec& f : spec.fields_) {
    if (f.mode != FieldMode::kFuzz) continue;
    spec.segments_.push_back({view_off, f.offset_bits, f.length_bits});
    view_off += f.length_bits;
  }
  spec.fuzz_len_bits_ = view_off;
  return spec;
}

LayoutSpec LayoutSpec::parse(std::string_view text) {
  std::vector<FieldSpec> fields;
  std::vector<int> lines;
  bool have_len = false;
  uint32_t total_bytes = 0;
  int total_line = 0;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::vector<std::string_view> toks = split_tokens(line);
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (!have_len) {
      if (toks[0] != "len")
        throw SpecError(line_no, "first declaration must be 'len <bytes>'");
      if (toks.size() != 2 || !parse_u32(toks[1], total_bytes))
        throw SpecError(line_no, "malformed 'len' declaration");
      have_len = true;
      total_line = line_no;
      if (eol == text.size()) break;
      continue;
    }

    if (toks.size() != 4)
      throw SpecError(line_no, "expected '<name> <offset_bits> <length_bits> <fuzz|keep>'");
    FieldSpec f;
    f.name = std::string(toks[0]);
    if (!parse_u32(toks[1], f.offset_bits))
      throw SpecError(line_no, "malformed offset");
    if (!parse_u32(toks[2], f.length_bits))
      throw SpecError(line_no, "malformed length");
    if (toks[3] == "fuzz")
      f.mode = FieldMode::kFuzz;
    else if (toks[3] == "keep")
      f.mode = FieldMode::kKeep;
    else
      throw SpecError(line_no, "mode must be 'fuzz' or 'keep'");
    fields.push_back(std::move(f));
    lines.push_back(line_no);

    if (eol == text.size()) break;
  }

  if (!have_len) throw SpecError(0, "missing 'len' declaration");
  if (total_bytes == 0 || total_bytes > (UINT32_MAX / 8))
    throw SpecError(total_line, "total length out of range");

  const uint32_t total_len_bits = total_bytes * 8;
  validate(total_len_bits, fields, &lines);

  // validate() sorted the fields; reuse make() for segment construction.
  return make(total_len_bits, std::move(fields));
}

std::string LayoutSpec::format() const {
  std::ostringstream out;
  out << "len " << total_len_bits_ / 8 << "\n";
  for (const FieldSpec& f : fields_) {
    out << f.name << " " << f.offset_bits << " " << f.length_bits << " "
        << (f.mode == FieldMode::kFuzz ? "fuzz" : "keep") << "\n";
  }
  return out.str();
}

MutationView extract(const LayoutSpec& spec, std::span<const uint8_t> input) {
  if (input.size() * 8 != spec.total_len_bits())
    throw FuzzError("input length does not match layout (" +
                    std::to_string(input.size()) + " bytes, expected " +
                    std::to_string(spec.total_len_bytes()) + ")");
  MutationView view;
  view.bits = BitBuf(spec.fuzz_len_bits());
  view.segments.assign(spec.view_segments().begin(), spec.view_segments().end());
  std::span<uint8_t> dst(view.bits.data(), view.bits.size_bytes());
  for (const ViewSegment& seg : view.segments)
    copy_bits(input, seg.source_offset_bits, dst, seg.view_offset_bits,
              seg.length_bits);
  return view;
}

std::vector<uint8_t> restore(const LayoutSpec& spec,
                             std::span<const uint8_t> original,
                             const MutationView& view) {
  if (original.size() * 8 != spec.total_len_bits())
    throw FuzzError("original length does not match layout");
  if (view.bits.size_bits() != spec.fuzz_len_bits() ||
      !std::equal(view.segments.begin(), view.segments.end(),
                  spec.view_segments().begin(), spec.view_segments().end()))
    throw FuzzError("mutation view segment shape does not match layout");
  std::vector<uint8_t> out(original.begin(), original.end());
  restore_into(spec, view.bits, out);
  return out;
}

void restore_into(const LayoutSpec& spec, const BitBuf& view_bits,
                  std::span<uint8_t> inout) {
  if (view_bits.size_bits() != spec.fuzz_len_bits())
    throw FuzzError("mutation view length does not match layout");
  std::span<const uint8_t> src(view_bits.data(), view_bits.size_bytes());
  for (const ViewSegment& seg : spec.view_segments())
    copy_bits(src, seg.view_offset_bits, inout, seg.source_offset_bits,
              seg.length_bits);
}

}  // namespace fieldfuzz
