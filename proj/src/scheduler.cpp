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

#include "fieldfuzz/scheduler.hpp"

#include <algorithm>
#include <cmath>

namespace fieldfuzz {

uint32_t base_energy(uint64_t seed_exec_us, uint32_t seed_popcount,
                     const QueueStats& stats, const EnergyConfig& cfg) {
  const double exec_us = seed_exec_us > 0 ? double(seed_exec_us) : 1.0;
  const double speed_ratio = stats.avg_exec_us / exec_us;
  double speed_factor;
  if (speed_ratio >= 4.0)
    speed_factor = 3.0;
  else if (speed_ratio >= 2.0)
    speed_factor = 2.0;
  else if (speed_ratio >= 1.0)
    speed_factor = 1.0;
  else if (speed_ratio >= 0.5)
    speed_factor = 0.5;
  else
    speed_factor = 0.25;

  const double cov_ratio =
      stats.avg_popcount > 0 ? double(seed_popcount) / stats.avg_popcount : 1.0;
  double cov_factor;
  if (cov_ratio >= 1.5)
    cov_factor = 1.5;
  else if (cov_ratio >= 1.0)
    cov_factor = 1.0;
  else
    cov_factor = 0.75;

  const auto p = uint32_t(std::lround(100.0 * speed_factor * cov_factor));
  return std::clamp<uint32_t>(p, 1, cfg.max_energy_u);
}

double validity(const DepthLedger& ledger, uint32_t seed_last_depth) {
  const uint32_t gmax = ledger.global_max_depth();
  if (gmax == 0) return 1.0;
  return std::min(1.0, double(seed_last_depth) / double(gmax));
}

uint32_t depth_energy(uint32_t p, double v, const EnergyConfig& cfg) {
  const uint32_t u = cfg.max_energy_u;
  if (v < 0.5) return p;
  if (uint64_t(p) * 2 <= u) return p * 2;
  return u;
}

void observe_execution(DepthLedger& ledger, Seed& seed, const ExecResult& result) {
  seed.last_depth = result.max_depth;
  ledger.note_depth(result.max_depth);
}

}  // namespace fieldfuzz
