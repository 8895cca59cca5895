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

#include "fieldfuzz/eval.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "fieldfuzz/errors.hpp"
#include "fieldfuzz/targets.hpp"

namespace fieldfuzz {

std::string_view schedule_name(Schedule s) {
  return s == Schedule::kDepthBased ? "depth" : "afl";
}

Schedule parse_schedule(std::string_view name) {
  if (name == "depth") return Schedule::kDepthBased;
  if (name == "afl") return Schedule::kAflBase;
  throw FuzzError("unknown schedule '" + std::string(name) + "' (depth|afl)");
}

Quartiles quartiles(std::vector<double> values) {
  Quartiles q;
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  auto at = [&](double frac) {
    const double idx = frac * double(values.size() - 1);
    const size_t lo = size_t(idx);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double w = idx - double(lo);
    return values[lo] * (1.0 - w) + values[hi] * w;
  };
  q.q1 = at(0.25);
  q.median = at(0.5);
  q.q3 = at(0.75);
  return q;
}

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
  RankSumResult res;
  const size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return res;

  struct Obs {
    double value;
    bool from_a;
  };
  std::vector<Obs> all;
  all.reserve(na + nb);
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::sort(all.begin(), all.end(),
            [](const Obs& x, const Obs& y) { return x.value < y.value; });

  const size_t n = all.size();
  double rank_sum_a = 0;
  double tie_term = 0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && all[j].value == all[i].value) ++j;
    const double tied = double(j - i);
    const double midrank = (double(i + 1) + double(j)) / 2.0;
    for (size_t k = i; k < j; ++k)
      if (all[k].from_a) rank_sum_a += midrank;
    tie_term += tied * tied * tied - tied;
    i = j;
  }

  res.u = rank_sum_a - double(na) * double(na + 1) / 2.0;
  const double mu = double(na) * double(nb) / 2.0;
  const double nn = double(n);
  const double var = double(na) * double(nb) / 12.0 *
                     ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0) {
    res.z = 0;
    res.p = 1;
    return res;
  }
  double diff = res.u - mu;
  // Continuity correction toward the mean.
  if (diff > 0.5)
    diff -= 0.5;
  else if (diff < -0.5)
    diff += 0.5;
  else
    diff = 0;
  res.z = diff / std::sqrt(var);
  res.p = std::erfc(std::fabs(res.z) / std::sqrt(2.0));
  return res;
}

EfficiencyRatio efficiency_ratio(const ArmSummary& a, const ArmSummary& b) {
  EfficiencyRatio out;
  if (a.median_curve.empty() || b.median_curve.empty()) {
    out.display = "n/a";
    return out;
  }
  const uint64_t target_paths = a.median_curve.back().paths;
  auto execs_to_reach = [&](const std::vector<StatsRow>& curve) -> uint64_t {
    for (const StatsRow& row : curve)
      if (row.paths >= target_paths) return row.execs;
    return 0;  // never reached
  };
  const uint64_t a_execs = execs_to_reach(a.median_curve);
  const uint64_t b_execs = execs_to_reach(b.median_curve);
  char buf[32];
  if (a_execs == 0) {
    out.display = "n/a";
    return out;
  }
  if (b_execs == 0) {
    out.censored = true;
    out.ratio = double(b.median_curve.back().execs) / double(a_execs);
    std::snprintf(buf, sizeof(buf), ">%.2f", out.ratio);
    out.display = buf;
    return out;
  }
  out.ratio = double(b_execs) / double(a_execs);
  std::snprintf(buf, sizeof(buf), "%.2f", out.ratio);
  out.display = buf;
  return out;
}

namespace {

TrialResult run_trial(const Experiment& exp, Schedule schedule, uint32_t trial,
                      uint64_t rng_seed, const std::filesystem::path& corpus_dir,
                      const std::filesystem::path& trial_dir) {
  auto target = make_target(exp.target_name, rng_seed);

  CampaignConfig cfg;
  cfg.schedule = schedule;
  cfg.max_energy_u = exp.max_energy_u;
  cfg.rng_seed = rng_seed;
  cfg.logical_time = true;
  cfg.sample_interval_execs = exp.sample_interval_execs;
  cfg.budget_execs = exp.budget_execs;
  cfg.out_dir = trial_dir;
  cfg.quiet = exp.quiet;

  Campaign campaign(*target, target->layout(), cfg);
  campaign.init_from_corpus(corpus_dir);

  const auto start = std::chrono::steady_clock::now();
  const CampaignStats& stats = campaign.run();
  const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);

  TrialResult result;
  result.schedule = schedule;
  result.trial = trial;
  result.rng_seed = rng_seed;
  result.paths = stats.paths_total;
  result.execs_total = stats.execs_total;
  result.wall_us = uint64_t(wall.count());
  result.rows = stats.rows;
  if (!stats.first_crash_execs.empty()) {
    uint64_t first = UINT64_MAX;
    for (const auto& [kind, execs] : stats.first_crash_execs)
      first = std::min(first, execs);
    result.execs_to_crash = first;
    result.crash_censored = false;
  } else {
    result.execs_to_crash = exp.budget_execs;
    result.crash_censored = true;
  }
  return result;
}

ArmSummary summarize_arm(const Experiment& exp, Schedule schedule,
                         std::span<const TrialResult> trials) {
  ArmSummary arm;
  arm.schedule = schedule;
  std::vector<double> paths, crash;
  uint64_t wall_sum = 0, exec_sum = 0;
  size_t min_rows = SIZE_MAX;
  for (const TrialResult& t : trials) {
    paths.push_back(double(t.paths));
    crash.push_back(double(t.execs_to_crash));
    if (t.crash_censored) ++arm.censored_trials;
    wall_sum += t.wall_us;
    exec_sum += t.execs_total;
    min_rows = std::min(min_rows, t.rows.size());
  }
  arm.paths_at_budget = quartiles(paths);
  arm.execs_to_crash = quartiles(crash);
  arm.mean_exec_ns = exec_sum > 0 ? 1000.0 * double(wall_sum) / double(exec_sum) : 0;

  if (min_rows != SIZE_MAX) {
    for (size_t r = 0; r < min_rows; ++r) {
      std::vector<double> at_point;
      at_point.reserve(trials.size());
      for (const TrialResult& t : trials) at_point.push_back(double(t.rows[r].paths));
      StatsRow row = trials.front().rows[r];
      row.paths = uint64_t(std::llround(quartiles(at_point).median));
      arm.median_curve.push_back(row);
    }
  }
  (void)exp;
  return arm;
}

void write_outputs(const ExperimentSummary& summary,
                   const std::filesystem::path& out_dir) {
  {
    std::ofstream csv(out_dir / "trials.csv", std::ios::trunc);
    csv << "schedule,trial,rng_seed,paths,execs_to_crash,censored,execs_total,"
           "wall_us\n";
    for (const TrialResult& t : summary.trials)
      csv << schedule_name(t.schedule) << "," << t.trial << "," << t.rng_seed
          << "," << t.paths << "," << t.execs_to_crash << ","
          << (t.crash_censored ? 1 : 0) << "," << t.execs_total << ","
          << t.wall_us << "\n";
  }
  {
    std::ofstream csv(out_dir / "summary.csv", std::ios::trunc);
    csv << "schedule,paths_q1,paths_median,paths_q3,crash_q1,crash_median,"
           "crash_q3,censored_trials,mean_exec_ns\n";
    for (const ArmSummary& arm : summary.arms) {
      csv << schedule_name(arm.schedule) << "," << arm.paths_at_budget.q1 << ","
          << arm.paths_at_budget.median << "," << arm.paths_at_budget.q3 << ","
          << arm.execs_to_crash.q1 << "," << arm.execs_to_crash.median << ","
          << arm.execs_to_crash.q3 << "," << arm.censored_trials << ","
          << arm.mean_exec_ns << "\n";
    }
    if (summary.has_comparison) {
      csv << "# comparison " << schedule_name(summary.arms[0].schedule) << " vs "
          << schedule_name(summary.arms[1].schedule) << "\n";
      csv << "crash_ranksum_u," << summary.crash_comparison.u << "\n";
      csv << "crash_ranksum_z," << summary.crash_comparison.z << "\n";
      csv << "crash_ranksum_p," << summary.crash_comparison.p << "\n";
      csv << "paths_ranksum_p," << summary.paths_comparison.p << "\n";
      csv << "efficiency_ratio," << summary.efficiency.display << "\n";
    }
  }
  {
    std::ofstream txt(out_dir / "summary.txt", std::ios::trunc);
    txt << format_summary_table(summary);
  }
}

}  // namespace

ExperimentSummary run_experiment(const Experiment& exp) {
  if (exp.trials < 1) throw FuzzError("experiment needs at least one trial");
  if (exp.schedules.empty()) throw FuzzError("experiment needs at least one schedule");
  if (exp.out_dir.empty()) throw FuzzError("experiment needs an output directory");
  if (std::filesystem::exists(exp.out_dir) &&
      !std::filesystem::is_empty(exp.out_dir))
    throw FuzzError("output directory " + exp.out_dir.string() +
                    " already has contents");
  std::filesystem::create_directories(exp.out_dir);

  // One corpus shared by every arm.
  auto probe = make_target(exp.target_name, exp.base_rng_seed);
  const std::filesystem::path corpus_dir = exp.out_dir / "corpus";
  std::filesystem::create_directories(corpus_dir);
  {
    std::ofstream seed_file(corpus_dir / "seed_000000",
                            std::ios::binary | std::ios::trunc);
    const std::vector<uint8_t> zeros(probe->layout().total_len_bytes(), 0);
    seed_file.write(reinterpret_cast<const char*>(zeros.data()),
                    std::streamsize(zeros.size()));
  }

  const size_t n_arms = exp.schedules.size();
  std::vector<TrialResult> results(size_t(exp.trials) * n_arms);

  auto run_slice = [&](unsigned worker) {
    for (uint32_t t = worker; t < exp.trials; t += std::max(1u, exp.jobs)) {
      const uint64_t rng_seed = exp.base_rng_seed + t;
      for (size_t a = 0; a < n_arms; ++a) {
        char dir_name[64];
        std::snprintf(dir_name, sizeof(dir_name), "arm%zu_%s/trial_%03u", a,
                      std::string(schedule_name(exp.schedules[a])).c_str(), t);
        results[size_t(t) * n_arms + a] =
            run_trial(exp, exp.schedules[a], t, rng_seed, corpus_dir,
                      exp.out_dir / dir_name);
      }
    }
  };

  if (exp.jobs <= 1) {
    run_slice(0);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < exp.jobs; ++w) workers.emplace_back(run_slice, w);
    for (auto& th : workers) th.join();
  }

  ExperimentSummary summary;
  summary.experiment = exp;
  summary.trials = std::move(results);

  for (size_t a = 0; a < n_arms; ++a) {
    std::vector<TrialResult> arm_trials;
    for (uint32_t t = 0; t < exp.trials; ++t)
      arm_trials.push_back(summary.trials[size_t(t) * n_arms + a]);
    summary.arms.push_back(summarize_arm(exp, exp.schedules[a], arm_trials));
  }

  if (n_arms >= 2) {
    summary.has_comparison = true;
    std::vector<double> crash_a, crash_b, paths_a, paths_b;
    for (uint32_t t = 0; t < exp.trials; ++t) {
      crash_a.push_back(double(summary.trials[size_t(t) * n_arms].execs_to_crash));
      crash_b.push_back(
          double(summary.trials[size_t(t) * n_arms + 1].execs_to_crash));
      paths_a.push_back(double(summary.trials[size_t(t) * n_arms].paths));
      paths_b.push_back(double(summary.trials[size_t(t) * n_arms + 1].paths));
    }
    summary.crash_comparison = rank_sum_test(crash_a, crash_b);
    summary.paths_comparison = rank_sum_test(paths_a, paths_b);
    summary.efficiency = efficiency_ratio(summary.arms[0], summary.arms[1]);
  }

  write_outputs(summary, exp.out_dir);
  return summary;
}

std::string format_summary_table(const ExperimentSummary& summary) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "target %s, %u trial(s), budget %" PRIu64
                                    " execs\n",
                summary.experiment.target_name.c_str(), summary.experiment.trials,
                summary.experiment.budget_execs);
  out << line;
  std::snprintf(line, sizeof(line), "%-8s %26s %33s %10s %12s\n", "arm",
                "paths@budget (q1/med/q3)", "execs-to-crash (q1/med/q3)",
                "censored", "ns/exec");
  out << line;
  for (const ArmSummary& arm : summary.arms) {
    std::snprintf(line, sizeof(line),
                  "%-8s %8.0f /%6.0f /%6.0f %11.0f /%9.0f /%9.0f %7u/%-2u %12.1f\n",
                  std::string(schedule_name(arm.schedule)).c_str(),
                  arm.paths_at_budget.q1, arm.paths_at_budget.median,
                  arm.paths_at_budget.q3, arm.execs_to_crash.q1,
                  arm.execs_to_crash.median, arm.execs_to_crash.q3,
                  arm.censored_trials, summary.experiment.trials,
                  arm.mean_exec_ns);
    out << line;
  }
  if (summary.has_comparison) {
    std::snprintf(line, sizeof(line),
                  "rank-sum (execs-to-crash): U=%.1f z=%.3f p=%.6f\n",
                  summary.crash_comparison.u, summary.crash_comparison.z,
                  summary.crash_comparison.p);
    out << line;
    std::snprintf(line, sizeof(line), "rank-sum (paths): p=%.6f\n",
                  summary.paths_comparison.p);
    out << line;
    std::snprintf(line, sizeof(line),
                  "efficiency ratio (%s reaches %s's final paths): %s\n",
                  std::string(schedule_name(summary.arms[1].schedule)).c_str(),
                  std::string(schedule_name(summary.arms[0].schedule)).c_str(),
                  summary.efficiency.display.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace fieldfuzz
