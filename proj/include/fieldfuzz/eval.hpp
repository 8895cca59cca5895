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
// A/B experiment driver: runs isolated campaigns per (schedule, trial)
// over an identical corpus and seed list, then summarizes paths at budget,
// executions to the first crash, and per-execution wall overhead, with a
// rank-based two-sample comparison between the first two arms.

#ifndef FIELDFUZZ_EVAL_HPP_
#define FIELDFUZZ_EVAL_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fieldfuzz/campaign.hpp"

namespace fieldfuzz {

std::string_view schedule_name(Schedule s);
Schedule parse_schedule(std::string_view name);  // "depth" | "afl"

struct Experiment {
  std::string target_name = "nested8";
  std::vector<Schedule> schedules = {Schedule::kDepthBased, Schedule::kAflBase};
  uint32_t trials = 20;
  uint64_t budget_execs = 2'000'000;
  uint64_t base_rng_seed = 1;
  std::filesystem::path out_dir;
  uint32_t max_energy_u = 1600;
  uint64_t sample_interval_execs = 10'000;
  unsigned jobs = 1;  // trials may run in parallel; arms within a trial stay serial
  bool quiet = true;
};

struct TrialResult {
  Schedule schedule = Schedule::kDepthBased;
  uint32_t trial = 0;
  uint64_t rng_seed = 0;
  uint64_t paths = 0;
  uint64_t execs_to_crash = 0;  // budget when censored
  bool crash_censored = true;
  uint64_t execs_total = 0;
  uint64_t wall_us = 0;
  std::vector<StatsRow> rows;
};

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0;

  friend bool operator==(const Quartiles&, const Quartiles&) = default;
};

// Linear-interpolation quantiles of a copy of `values`.
Quartiles quartiles(std::vector<double> values);

struct ArmSummary {
  Schedule schedule = Schedule::kDepthBased;
  Quartiles paths_at_budget;
  Quartiles execs_to_crash;
  uint32_t censored_trials = 0;
  double mean_exec_ns = 0.0;  // wall time per execution
  // Median paths across trials at each logical sample point.
  std::vector<StatsRow> median_curve;
};

struct RankSumResult {
  double u = 0;  // U statistic of sample a
  double z = 0;
  double p = 1;  // two-sided, normal approximation with tie correction
};

// Mann-Whitney U with midranks and continuity correction.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

struct EfficiencyRatio {
  double ratio = 1.0;
  bool censored = false;  // b never reached a's final paths count
  std::string display;    // e.g. "2.70" or ">3.12"
};

// Logical-time analogue of curve-to-curve efficiency: how many executions
// arm b needs to reach arm a's final paths count, relative to when arm a
// got there. Computed on the median curves.
EfficiencyRatio efficiency_ratio(const ArmSummary& a, const ArmSummary& b);

struct ExperimentSummary {
  Experiment experiment;
  std::vector<TrialResult> trials;       // trial-major, arm order preserved
  std::vector<ArmSummary> arms;
  RankSumResult crash_comparison;        // arms[0] vs arms[1] execs-to-crash
  RankSumResult paths_comparison;        // arms[0] vs arms[1] paths at budget
  EfficiencyRatio efficiency;            // arms[0] as a, arms[1] as b
  bool has_comparison = false;
};

// Runs the full experiment. Writes per-trial campaign outputs under
// out_dir plus summary.csv, trials.csv, and summary.txt. Throws FuzzError
// when out_dir already has contents.
ExperimentSummary run_experiment(const Experiment& exp);

// Renders the aligned-text summary table.
std::string format_summary_table(const ExperimentSummary& summary);

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_EVAL_HPP_
