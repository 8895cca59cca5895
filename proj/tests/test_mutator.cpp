#include <doctest.h>

#include <random>
#include <vector>

#include "fieldfuzz/layout.hpp"
#include "fieldfuzz/mutator.hpp"
#include "test_util.hpp"

using namespace fieldfuzz;

namespace {

std::vector<BitBuf> drain_deterministic(const BitBuf& base) {
  DeterministicStage stage(base);
  std::vector<BitBuf> out;
  BitBuf candidate;
  while (stage.next(candidate)) out.push_back(candidate);
  return out;
}

// Independent candidate count: one loop per stage, written the dumb way.
uint64_t oracle_candidate_count(uint32_t n_bits) {
  uint64_t count = 0;
  for (uint32_t i = 0; i < n_bits; ++i) ++count;                       // 1-bit flips
  for (uint32_t i = 0; i + 2 <= n_bits; ++i) ++count;                  // 2-bit flips
  for (uint32_t i = 0; i + 4 <= n_bits; ++i) ++count;                  // 4-bit flips
  for (uint32_t b = 0; b + 1 <= n_bits / 8; ++b) ++count;              // byte flips
  for (uint32_t b = 0; b + 1 <= n_bits / 8; ++b) count += 16 * 2;      // arithmetic
  for (uint32_t b = 0; b + 1 <= n_bits / 8; ++b)
    count += kInterestingBytes.size();                                 // interesting
  return count;
}

}  // namespace

TEST_CASE("deterministic stage flips the MSB first") {
  BitBuf base(8);  // 0x00
  DeterministicStage stage(base);
  BitBuf first;
  REQUIRE(stage.next(first));
  CHECK(first.byte(0) == 0x80);
}

TEST_CASE("five-bit view yields exactly the 11 flip candidates") {
  BitBuf base(5);
  const auto candidates = drain_deterministic(base);
  CHECK(candidates.size() == 11);  // 5 + 4 + 2, byte stages skipped
  for (const BitBuf& c : candidates) CHECK(c.size_bits() == 5);
}

TEST_CASE("candidate count matches the counting oracle") {
  for (uint32_t n : {1u, 2u, 3u, 5u, 8u, 9u, 16u, 24u, 61u, 128u}) {
    BitBuf base(n);
    CHECK(drain_deterministic(base).size() == oracle_candidate_count(n));
  }
}

TEST_CASE("16-bit view candidate count, spelled out") {
  BitBuf base(16);
  // 16 + 15 + 13 one/two/four-bit flips, 2 byte flips, 64 arithmetic,
  // 14 interesting substitutions.
  CHECK(drain_deterministic(base).size() == 124);
}

TEST_CASE("deterministic candidates differ from the base only where mutated") {
  BitBuf base(24);
  // Bytes chosen away from the interesting-value set so no substitution
  // can be a no-op.
  base.set_byte(0, 0x42);
  base.set_byte(1, 0x91);
  base.set_byte(2, 0x5A);
  for (const BitBuf& c : drain_deterministic(base)) {
    uint32_t diff = 0;
    for (uint32_t i = 0; i < 24; ++i) diff += c.get(i) != base.get(i);
    CHECK(diff >= 1);
    CHECK(diff <= 8);  // at most one byte's worth of change per candidate
  }
}

TEST_CASE("havoc yields exactly energy candidates of the view shape") {
  BitBuf base(40);
  const std::vector<ViewSegment> segments = {{0, 0, 40}};
  HavocStage stage(base, segments, MutationBudget{100, 7});
  BitBuf candidate;
  uint32_t count = 0;
  while (stage.next(candidate)) {
    ++count;
    CHECK(candidate.size_bits() == 40);
  }
  CHECK(count == 100);
}

TEST_CASE("havoc streams are pure functions of the rng seed") {
  BitBuf base(64);
  const std::vector<ViewSegment> segments = {{0, 8, 32}, {32, 48, 32}};

  auto drain = [&](uint64_t seed) {
    HavocStage stage(base, segments, MutationBudget{50, seed});
    std::vector<BitBuf> out;
    BitBuf c;
    while (stage.next(c)) out.push_back(c);
    return out;
  };

  CHECK(drain(99) == drain(99));
  CHECK(drain(99) != drain(100));
}

TEST_CASE("restored havoc candidates only differ inside fuzz fields") {
  std::mt19937_64 gen(21);
  for (int it = 0; it < 50; ++it) {
    const LayoutSpec spec = testutil::random_layout(gen);
    if (!spec.has_fuzz_field()) continue;
    const std::vector<uint8_t> input =
        testutil::random_bytes(gen, spec.total_len_bytes());
    const MutationView view = extract(spec, input);

    HavocStage stage(view.bits, view.segments, MutationBudget{20, gen()});
    BitBuf candidate;
    while (stage.next(candidate)) {
      MutationView mutated{candidate, view.segments};
      const std::vector<uint8_t> out = restore(spec, input, mutated);
      // Walk every bit: outside fuzz fields the restored input must agree
      // with the original.
      for (uint32_t pos = 0; pos < spec.total_len_bits(); ++pos) {
        bool in_fuzz = false;
        for (const FieldSpec& f : spec.fields())
          if (f.mode == FieldMode::kFuzz && pos >= f.offset_bits &&
              pos < f.offset_bits + f.length_bits)
            in_fuzz = true;
        if (in_fuzz) continue;
        const int orig = (input[pos / 8] >> (7 - pos % 8)) & 1;
        const int got = (out[pos / 8] >> (7 - pos % 8)) & 1;
        REQUIRE(orig == got);
      }
    }
  }
}
