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
// Energy assignment. base_energy is a two-factor reconstruction of the
// classic AFL score (speed and coverage relative to the queue averages).
// The depth-based schedule scales it by seed validity: the ratio of the
// seed's last observed maximum call depth to the campaign-wide historical
// maximum. Seeds at least 50% valid get twice the energy, capped at U.

#ifndef FIELDFUZZ_SCHEDULER_HPP_
#define FIELDFUZZ_SCHEDULER_HPP_

#include <cstdint>

#include "fieldfuzz/executor.hpp"
#include "fieldfuzz/seed.hpp"

namespace fieldfuzz {

enum class Schedule { kAflBase, kDepthBased };

struct EnergyConfig {
  uint32_t max_energy_u = 1600;  // U: havoc-iteration ceiling per pass
  Schedule schedule = Schedule::kDepthBased;
};

// Queue-wide averages the base score is computed against.
struct QueueStats {
  double avg_exec_us = 1.0;
  double avg_popcount = 1.0;
};

// Base score p(s) in [1, U]:
//   p = round(100 * speed_factor * coverage_factor)
// speed_factor from avg_exec/seed_exec: >=4 -> 3, >=2 -> 2, >=1 -> 1,
// >=0.5 -> 0.5, else 0.25. coverage_factor from seed_pop/avg_pop:
// >=1.5 -> 1.5, >=1 -> 1, else 0.75.
uint32_t base_energy(uint64_t seed_exec_us, uint32_t seed_popcount,
                     const QueueStats& stats, const EnergyConfig& cfg);

// Campaign-wide depth bookkeeping. global_max_depth is the maximum depth
// of every execution observed so far and never decreases.
class DepthLedger {
 public:
  void note_depth(uint32_t depth) {
    if (depth > global_max_) global_max_ = depth;
  }
  uint32_t global_max_depth() const { return global_max_; }

 private:
  uint32_t global_max_ = 0;
};

// v(s) = last_depth / global_max_depth, clamped to [0, 1]; defined as 1
// when no depth probe has fired campaign-wide.
double validity(const DepthLedger& ledger, uint32_t seed_last_depth);

// Piecewise depth-based schedule:
//   2p  if v >= 50% and p <= U/2
//   p   if v < 50%
//   U   otherwise
uint32_t depth_energy(uint32_t p, double v, const EnergyConfig& cfg);

// Records one execution attributed to a seed: refreshes the seed's last
// observed depth and folds the depth into the ledger.
void observe_execution(DepthLedger& ledger, Seed& seed, const ExecResult& result);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_SCHEDULER_HPP_
