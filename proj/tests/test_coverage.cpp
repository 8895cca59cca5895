#include <doctest.h>

#include <bit>
#include <random>
#include <vector>

#include "fieldfuzz/coverage.hpp"

using namespace fieldfuzz;

TEST_CASE("record_edge follows the transition rule") {
  CoverageMap map;
  map.record_edge(5);
  CHECK(map.counts()[5] == 1);  // 5 XOR 0
  CHECK(map.prev_location() == 2);
}

TEST_CASE("replaying a sequence doubles counters below saturation") {
  CoverageMap map;
  // The trace ends at site 1, which rolls prev_location back to 0, so a
  // replay walks the exact same edge indices.
  const std::vector<uint16_t> trace = {10, 700, 33, 33, 9000, 1};
  for (uint16_t s : trace) map.record_edge(s);
  REQUIRE(map.prev_location() == 0);
  std::vector<uint8_t> once(map.counts().begin(), map.counts().end());
  for (uint16_t s : trace) map.record_edge(s);
  for (size_t i = 0; i < kMapSize; ++i) CHECK(map.counts()[i] == 2 * once[i]);
}

TEST_CASE("self-edge saturates at 255") {
  CoverageMap map;
  const uint16_t site = 77;
  for (int i = 0; i < 300; ++i) map.record_edge(site);
  // After the first record, every further one lands on site ^ (site >> 1).
  CHECK(map.counts()[site ^ (site >> 1)] == 255);
}

TEST_CASE("reset clears counts and rolling state") {
  CoverageMap map;
  map.record_edge(123);
  map.record_edge(9876);
  map.reset();
  CHECK(map.prev_location() == 0);
  for (size_t i = 0; i < kMapSize; ++i) CHECK(map.counts()[i] == 0);
}

TEST_CASE("bucket classification table") {
  CHECK(bucket_for_count(0) == 0);
  CHECK(bucket_for_count(1) == 1);
  CHECK(bucket_for_count(2) == 2);
  CHECK(bucket_for_count(3) == 4);
  CHECK(bucket_for_count(4) == 8);
  CHECK(bucket_for_count(5) == 8);
  CHECK(bucket_for_count(7) == 8);
  CHECK(bucket_for_count(8) == 16);
  CHECK(bucket_for_count(15) == 16);
  CHECK(bucket_for_count(16) == 32);
  CHECK(bucket_for_count(31) == 32);
  CHECK(bucket_for_count(32) == 64);
  CHECK(bucket_for_count(127) == 64);
  CHECK(bucket_for_count(128) == 128);
  CHECK(bucket_for_count(200) == 128);
  CHECK(bucket_for_count(255) == 128);
}

TEST_CASE("has_new_bits distinguishes edges, buckets, and nothing") {
  VirginMap virgin;
  std::vector<uint8_t> classified(kMapSize, 0);

  classified[7] = 1;  // fresh edge
  CHECK(has_new_bits(virgin, classified) == Novelty::kNewEdge);

  classified[7] = 8;  // same edge, new bucket only
  CHECK(has_new_bits(virgin, classified) == Novelty::kNewBucket);

  CHECK(has_new_bits(virgin, classified) == Novelty::kNothing);  // idempotent
}

TEST_CASE("new edge wins over new bucket in one map") {
  VirginMap virgin;
  std::vector<uint8_t> classified(kMapSize, 0);
  classified[3] = 1;
  REQUIRE(has_new_bits(virgin, classified) == Novelty::kNewEdge);
  classified[3] = 2;   // bucket-level novelty
  classified[90] = 1;  // plus an entirely new edge
  CHECK(has_new_bits(virgin, classified) == Novelty::kNewEdge);
}

TEST_CASE("virgin map only accumulates") {
  std::mt19937_64 gen(3);
  VirginMap virgin;
  std::vector<uint8_t> classified(kMapSize, 0);
  size_t last_pop = 0;
  for (int round = 0; round < 50; ++round) {
    for (int k = 0; k < 20; ++k)
      classified[gen() % kMapSize] = uint8_t(1u << (gen() % 8));
    has_new_bits(virgin, classified);
    size_t pop = 0;
    for (uint8_t b : virgin.seen()) pop += size_t(std::popcount(b));
    CHECK(pop >= last_pop);
    last_pop = pop;
  }
}

// Dual-route check: the fused per-execution walk must agree with the
// documented classify + has_new_bits + fingerprint composition.
TEST_CASE("scan_and_reset matches the dense route") {
  std::mt19937_64 gen(11);
  VirginMap virgin_fused, virgin_dense;
  CoverageMap map;
  for (int round = 0; round < 200; ++round) {
    const int edges = 1 + int(gen() % 40);
    std::vector<uint16_t> sites;
    for (int k = 0; k < edges; ++k) sites.push_back(uint16_t(gen()));
    // Occasionally hammer one site to move through buckets.
    if (round % 3 == 0)
      for (int k = 0; k < int(gen() % 200); ++k) sites.push_back(sites[0]);

    for (uint16_t s : sites) map.record_edge(s);

    // Dense reference on a copy of the raw counters.
    std::vector<uint8_t> raw(map.counts().begin(), map.counts().end());
    std::vector<uint8_t> classified(kMapSize, 0);
    classify_counts(raw, classified);
    const Novelty dense_novelty = has_new_bits(virgin_dense, classified);
    uint32_t dense_pop = 0;
    for (uint8_t b : classified) dense_pop += uint32_t(std::popcount(b));
    const uint64_t dense_fp = coverage_fingerprint(classified);

    const ScanResult fused = scan_and_reset(map, &virgin_fused);
    CHECK(fused.novelty == dense_novelty);
    CHECK(fused.popcount == dense_pop);
    CHECK(fused.fingerprint == dense_fp);

    // Map must be fully reset afterwards.
    CHECK(map.prev_location() == 0);
    for (size_t i = 0; i < kMapSize; ++i) REQUIRE(map.counts()[i] == 0);
  }
  // The two virgin maps must have accumulated identically.
  for (size_t i = 0; i < kMapSize; ++i)
    REQUIRE(virgin_fused.seen()[i] == virgin_dense.seen()[i]);
}
