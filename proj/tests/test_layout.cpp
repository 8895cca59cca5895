#include <doctest.h>

#include <random>
#include <vector>

#include "fieldfuzz/layout.hpp"
#include "test_util.hpp"

using namespace fieldfuzz;

namespace {

// Independent per-bit reference for extract: walks fuzz fields in order and
// pulls bits with plain shift arithmetic.
std::vector<int> oracle_extract_bits(const LayoutSpec& spec,
                                     const std::vector<uint8_t>& input) {
  std::vector<int> bits;
  for (const FieldSpec& f : spec.fields()) {
    if (f.mode != FieldMode::kFuzz) continue;
    for (uint32_t k = 0; k < f.length_bits; ++k) {
      const uint32_t pos = f.offset_bits + k;
      bits.push_back((input[pos / 8] >> (7 - pos % 8)) & 1);
    }
  }
  return bits;
}

// Independent per-bit reference for restore.
std::vector<uint8_t> oracle_restore(const LayoutSpec& spec,
                                    const std::vector<uint8_t>& original,
                                    const std::vector<int>& view_bits) {
  std::vector<uint8_t> out = original;
  size_t consumed = 0;
  for (const FieldSpec& f : spec.fields()) {
    if (f.mode != FieldMode::kFuzz) continue;
    for (uint32_t k = 0; k < f.length_bits; ++k) {
      const uint32_t pos = f.offset_bits + k;
      const uint8_t mask = uint8_t(1u << (7 - pos % 8));
      if (view_bits[consumed++])
        out[pos / 8] |= mask;
      else
        out[pos / 8] &= uint8_t(~mask);
    }
  }
  return out;
}

std::vector<int> bits_of(const BitBuf& buf) {
  std::vector<int> bits;
  for (uint32_t i = 0; i < buf.size_bits(); ++i) bits.push_back(buf.get(i));
  return bits;
}

}  // namespace

TEST_CASE("parse: two-field spec") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nhdr 0 32 keep\nparam 32 16 fuzz");
  CHECK(spec.total_len_bits() == 64);
  CHECK(spec.fields().size() == 2);
  CHECK(spec.fields()[0].name == "hdr");
  CHECK(spec.fields()[1].mode == FieldMode::kFuzz);
  CHECK(spec.fuzz_len_bits() == 16);
}

TEST_CASE("parse: field past end of input") {
  CHECK_THROWS_AS(LayoutSpec::parse("len 4\nf 0 40 fuzz"), SpecError);
}

TEST_CASE("parse: overlapping fields") {
  try {
    LayoutSpec::parse("len 8\na 0 16 fuzz\nb 8 8 keep");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("parse: diagnostics carry line numbers") {
  try {
    LayoutSpec::parse("len 8\n# comment\nf 0 8 fz");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("parse: assorted rejects") {
  CHECK_THROWS_AS(LayoutSpec::parse(""), SpecError);
  CHECK_THROWS_AS(LayoutSpec::parse("f 0 8 fuzz\nlen 8"), SpecError);
  CHECK_THROWS_AS(LayoutSpec::parse("len 8\nf 0 8 fuzz\nf 8 8 keep"), SpecError);
  CHECK_THROWS_AS(LayoutSpec::parse("len 8\nf 0 0 fuzz"), SpecError);
  CHECK_THROWS_AS(LayoutSpec::parse("len 0"), SpecError);
  CHECK_THROWS_AS(LayoutSpec::parse("len 8 extra"), SpecError);
}

TEST_CASE("parse: comments, blank lines, unsorted input fields") {
  const LayoutSpec spec = LayoutSpec::parse(
      "# header comment\n\nlen 8\nb 32 8 fuzz  # trailing comment\n\na 0 8 fuzz\n");
  REQUIRE(spec.fields().size() == 2);
  CHECK(spec.fields()[0].name == "a");  // sorted by offset
  CHECK(spec.fields()[1].name == "b");
}

TEST_CASE("format round-trips through parse") {
  std::mt19937_64 gen(7);
  for (int it = 0; it < 50; ++it) {
    const LayoutSpec spec = testutil::random_layout(gen);
    const LayoutSpec reparsed = LayoutSpec::parse(spec.format());
    CHECK(reparsed.total_len_bits() == spec.total_len_bits());
    REQUIRE(reparsed.fields().size() == spec.fields().size());
    for (size_t i = 0; i < spec.fields().size(); ++i) {
      CHECK(reparsed.fields()[i].name == spec.fields()[i].name);
      CHECK(reparsed.fields()[i].offset_bits == spec.fields()[i].offset_bits);
      CHECK(reparsed.fields()[i].length_bits == spec.fields()[i].length_bits);
      CHECK(reparsed.fields()[i].mode == spec.fields()[i].mode);
    }
  }
}

TEST_CASE("extract: byte-aligned slice") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nmid 32 16 fuzz");
  const std::vector<uint8_t> input = {0, 1, 2, 3, 4, 5, 6, 7};
  const MutationView view = extract(spec, input);
  REQUIRE(view.bits.size_bits() == 16);
  CHECK(view.bits.byte(0) == 4);
  CHECK(view.bits.byte(1) == 5);
  REQUIRE(view.segments.size() == 1);
  CHECK(view.segments[0] == ViewSegment{0, 32, 16});
}

TEST_CASE("extract: no fuzz fields yields an empty view") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nhdr 0 64 keep");
  const std::vector<uint8_t> input(8, 0xAB);
  const MutationView view = extract(spec, input);
  CHECK(view.bits.size_bits() == 0);
  CHECK(view.segments.empty());
}

TEST_CASE("extract: bit-granular field against the per-bit oracle") {
  const LayoutSpec spec = LayoutSpec::parse("len 1\nf 3 5 fuzz");
  for (int value = 0; value < 256; ++value) {
    const std::vector<uint8_t> input = {uint8_t(value)};
    const MutationView view = extract(spec, input);
    REQUIRE(view.bits.size_bits() == 5);
    CHECK(bits_of(view.bits) == oracle_extract_bits(spec, input));
  }
  // Spot value from the field diagram: 0b10110101 -> bits 3..7 are 10101.
  const MutationView view = extract(spec, std::vector<uint8_t>{0b10110101});
  CHECK(bits_of(view.bits) == std::vector<int>{1, 0, 1, 0, 1});
}

TEST_CASE("extract: length mismatch is an error") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nf 0 8 fuzz");
  CHECK_THROWS_AS(extract(spec, std::vector<uint8_t>(7, 0)), FuzzError);
}

TEST_CASE("restore: byte-aligned splice") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nmid 32 16 fuzz");
  const std::vector<uint8_t> input = {0, 1, 2, 3, 4, 5, 6, 7};
  MutationView view = extract(spec, input);
  view.bits.set_byte(0, 0xAA);
  view.bits.set_byte(1, 0xBB);
  const std::vector<uint8_t> out = restore(spec, input, view);
  CHECK(out == std::vector<uint8_t>{0, 1, 2, 3, 0xAA, 0xBB, 6, 7});
}

TEST_CASE("restore: bit-granular all-ones touches only the field bits") {
  const LayoutSpec spec = LayoutSpec::parse("len 1\nf 3 5 fuzz");
  for (int value = 0; value < 256; ++value) {
    const std::vector<uint8_t> input = {uint8_t(value)};
    MutationView view = extract(spec, input);
    for (uint32_t i = 0; i < 5; ++i) view.bits.set(i, true);
    const std::vector<uint8_t> out = restore(spec, input, view);
    CHECK(out == oracle_restore(spec, input, {1, 1, 1, 1, 1}));
    CHECK((out[0] & 0b11100000) == (input[0] & 0b11100000));
    CHECK((out[0] & 0b00011111) == 0b00011111);
  }
}

TEST_CASE("restore: segment shape mismatch is an error") {
  const LayoutSpec spec = LayoutSpec::parse("len 8\nmid 32 16 fuzz");
  const LayoutSpec other = LayoutSpec::parse("len 8\nmid 0 16 fuzz");
  const std::vector<uint8_t> input(8, 0);
  const MutationView view = extract(other, input);
  CHECK_THROWS_AS(restore(spec, input, view), FuzzError);
}

TEST_CASE("codec properties: round trip, frozen bits, composition, length") {
  std::mt19937_64 gen(42);
  for (int it = 0; it < 500; ++it) {
    const LayoutSpec spec = testutil::random_layout(gen);
    const std::vector<uint8_t> input =
        testutil::random_bytes(gen, spec.total_len_bytes());

    MutationView view = extract(spec, input);
    uint32_t expected_len = 0;
    for (const FieldSpec& f : spec.fields())
      if (f.mode == FieldMode::kFuzz) expected_len += f.length_bits;
    CHECK(view.bits.size_bits() == expected_len);

    // Round trip.
    CHECK(restore(spec, input, view) == input);

    // Arbitrary view contents: frozen bits preserved, composition holds.
    std::vector<int> scrambled;
    for (uint32_t i = 0; i < view.bits.size_bits(); ++i) {
      const bool bit = gen() % 2 == 0;
      view.bits.set(i, bit);
      scrambled.push_back(bit);
    }
    const std::vector<uint8_t> out = restore(spec, input, view);
    CHECK(out == oracle_restore(spec, input, scrambled));

    const MutationView back = extract(spec, out);
    CHECK(back.bits == view.bits);
    CHECK(back.segments == view.segments);
  }
}
