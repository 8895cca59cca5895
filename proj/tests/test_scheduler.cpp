#include <doctest.h>

#include <cstdint>

#include "fieldfuzz/scheduler.hpp"

using namespace fieldfuzz;

namespace {

// Direct transcription of the piecewise schedule definition, kept separate
// from the implementation on purpose.
uint32_t reference_pv(uint32_t p, double v, uint32_t u) {
  if (v >= 0.5 && double(p) <= double(u) / 2.0) return 2 * p;
  if (v < 0.5) return p;
  return u;
}

}  // namespace

TEST_CASE("base_energy factor table") {
  const EnergyConfig cfg;
  // Perfectly average seed.
  CHECK(base_energy(100, 10, {100.0, 10.0}, cfg) == 100);
  // 4x faster than average with 1.5x coverage.
  CHECK(base_energy(25, 15, {100.0, 10.0}, cfg) == 450);
  // 4x slower, low coverage.
  CHECK(base_energy(400, 5, {100.0, 10.0}, cfg) == 19);
}

TEST_CASE("base_energy stays within [1, U]") {
  EnergyConfig cfg;
  cfg.max_energy_u = 200;
  CHECK(base_energy(25, 15, {100.0, 10.0}, cfg) == 200);  // clamped from 450
  CHECK(base_energy(400, 5, {100.0, 10.0}, cfg) >= 1);
}

TEST_CASE("validity matches the stated ratios") {
  DepthLedger ledger;
  ledger.note_depth(12);
  CHECK(validity(ledger, 12) == doctest::Approx(1.0));
  CHECK(validity(ledger, 6) == doctest::Approx(0.5));
  CHECK(validity(ledger, 0) == doctest::Approx(0.0));

  DepthLedger fresh;  // no probe has fired anywhere
  CHECK(validity(fresh, 0) == doctest::Approx(1.0));
}

TEST_CASE("validity is monotone in last depth for a fixed global max") {
  DepthLedger ledger;
  ledger.note_depth(9);
  double prev = -1.0;
  for (uint32_t d = 0; d <= 9; ++d) {
    const double v = validity(ledger, d);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("depth_energy piecewise cases") {
  const EnergyConfig cfg;  // U = 1600
  CHECK(depth_energy(100, 0.7, cfg) == 200);
  CHECK(depth_energy(100, 0.3, cfg) == 100);
  CHECK(depth_energy(900, 0.9, cfg) == 1600);
  CHECK(depth_energy(800, 0.5, cfg) == 1600);  // boundary: 2p == U
}

TEST_CASE("depth_energy matches the reference over the full grid") {
  const EnergyConfig cfg;
  const double vs[] = {0.0, 0.25, 0.49, 0.5, 0.75, 1.0};
  for (uint32_t p = 1; p <= cfg.max_energy_u; ++p) {
    for (double v : vs) {
      const uint32_t pv = depth_energy(p, v, cfg);
      CHECK(pv == reference_pv(p, v, cfg.max_energy_u));
      CHECK(pv >= p);
      CHECK(pv <= cfg.max_energy_u);
    }
  }
}

TEST_CASE("higher validity never gets less energy at equal base") {
  const EnergyConfig cfg;
  for (uint32_t p = 1; p < cfg.max_energy_u; ++p) {
    const uint32_t high = depth_energy(p, 0.75, cfg);
    const uint32_t low = depth_energy(p, 0.25, cfg);
    CHECK(high > low);
    CHECK(depth_energy(p, 1.0, cfg) == depth_energy(p, 0.5, cfg));
  }
}

TEST_CASE("observe_execution updates the seed and the ledger") {
  DepthLedger ledger;
  Seed seed;
  ExecResult result;

  ledger.note_depth(5);
  result.max_depth = 9;
  observe_execution(ledger, seed, result);
  CHECK(ledger.global_max_depth() == 9);
  CHECK(seed.last_depth == 9);

  result.max_depth = 3;
  observe_execution(ledger, seed, result);
  CHECK(ledger.global_max_depth() == 9);  // monotone
  CHECK(seed.last_depth == 3);

  DepthLedger fresh;
  Seed other;
  result.max_depth = 0;
  observe_execution(fresh, other, result);
  CHECK(fresh.global_max_depth() == 0);
  CHECK(validity(fresh, other.last_depth) == doctest::Approx(1.0));
}

TEST_CASE("ledger maximum never decreases") {
  DepthLedger ledger;
  uint32_t prev = 0;
  const uint32_t depths[] = {3, 1, 7, 7, 2, 9, 0, 4};
  for (uint32_t d : depths) {
    ledger.note_depth(d);
    CHECK(ledger.global_max_depth() >= prev);
    CHECK(ledger.global_max_depth() >= d);
    prev = ledger.global_max_depth();
  }
}
