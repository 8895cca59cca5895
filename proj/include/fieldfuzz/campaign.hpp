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
// The main fuzzing loop: seed queue, energy-driven passes, novelty-based
// corpus growth, crash deduplication, stats emission. Strictly
// single-threaded; with a fixed rng seed and logical time the whole
// campaign is bit-reproducible.

#ifndef FIELDFUZZ_CAMPAIGN_HPP_
#define FIELDFUZZ_CAMPAIGN_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fieldfuzz/coverage.hpp"
#include "fieldfuzz/executor.hpp"
#include "fieldfuzz/layout.hpp"
#include "fieldfuzz/mutator.hpp"
#include "fieldfuzz/rng.hpp"
#include "fieldfuzz/scheduler.hpp"
#include "fieldfuzz/seed.hpp"

namespace fieldfuzz {

struct StatsRow {
  uint64_t time = 0;  // execs in logical-time mode, elapsed seconds otherwise
  uint64_t execs = 0;
  uint64_t paths = 0;
  uint32_t max_depth = 0;
  uint64_t unique_crashes = 0;

  friend bool operator==(const StatsRow&, const StatsRow&) = default;
};

struct CampaignStats {
  uint64_t execs_total = 0;
  uint64_t paths_total = 0;
  uint64_t crashes_unique = 0;
  uint32_t max_depth_global = 0;
  uint64_t elapsed_us = 0;  // wall clock
  std::vector<StatsRow> rows;
  // execs_total at the first sighting of each crash kind.
  std::map<std::string, uint64_t> first_crash_execs;
};

struct CampaignConfig {
  Schedule schedule = Schedule::kDepthBased;
  uint32_t max_energy_u = 1600;
  uint64_t timeout_us = 1'000'000;
  uint64_t rng_seed = 0;
  bool logical_time = false;
  uint64_t sample_interval_execs = 1000;   // row stride in logical-time mode
  std::optional<uint64_t> budget_execs;    // total execs, init included
  std::optional<double> budget_seconds;    // wall clock
  std::filesystem::path out_dir;           // empty = keep everything in memory
  bool quiet = false;
};

class Campaign {
 public:
  // The spec's total length must match the target's layout.
  Campaign(Target& target, const LayoutSpec& spec, CampaignConfig cfg);

  // Executes every corpus file once and admits the ones that add coverage.
  // Throws FuzzError on an empty corpus, a wrong-length file (named in the
  // message), or a spec with no fuzzable field.
  void init_from_corpus(const std::filesystem::path& corpus_dir);
  void init_from_inputs(const std::vector<std::vector<uint8_t>>& inputs,
                        const std::vector<std::string>& names);

  // Round-robin over the queue until the budget is exhausted, then flushes
  // plot_data.csv and fuzzer_stats (when an output directory is set).
  const CampaignStats& run();

  // One pass over one seed: parent re-execution, the deterministic stage
  // on first contact, then exactly `energy` havoc candidates.
  void fuzz_one(size_t queue_index);

  const std::vector<Seed>& queue() const { return queue_; }
  const DepthLedger& ledger() const { return ledger_; }
  const CampaignStats& stats() const { return stats_; }
  const LayoutSpec& spec() const { return spec_; }

 private:
  ExecResult exec_input(std::span<const uint8_t> input);
  void emit_candidate(size_t parent_index, const BitBuf& view_bits);
  void admit_seed(const std::vector<uint8_t>& input, const ExecResult& result,
                  const ScanResult& scan, std::optional<uint32_t> parent_id);
  void record_crash(const std::vector<uint8_t>& input, const ExecResult& result,
                    uint64_t fingerprint);
  QueueStats queue_stats() const;
  bool out_of_budget() const;
  uint64_t wall_elapsed_us() const;
  void maybe_sample();
  void maybe_heartbeat();
  void push_row();
  void finalize();
  void write_file(const std::filesystem::path& path,
                  std::span<const uint8_t> bytes) const;

  Target* target_;
  LayoutSpec spec_;
  CampaignConfig cfg_;
  EnergyConfig energy_cfg_;
  CoverageMap map_;
  VirginMap virgin_;
  DepthLedger ledger_;
  Rng rng_;
  std::vector<Seed> queue_;
  CampaignStats stats_;
  std::set<std::pair<std::string, uint64_t>> crash_keys_;
  uint64_t crash_files_ = 0;
  std::vector<uint8_t> scratch_;
  std::chrono::steady_clock::time_point wall_start_;
  uint64_t last_sample_mark_ = 0;
  uint64_t last_heartbeat_sec_ = 0;
  bool initialized_ = false;
  char debug_stage_ = 'H';
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_CAMPAIGN_HPP_
