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

#include "fieldfuzz/campaign.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fieldfuzz/errors.hpp"

namespace fieldfuzz {

namespace {

std::string seed_file_name(const Seed& seed) {
  char buf[64];
  if (seed.parent_id.has_value())
    std::snprintf(buf, sizeof(buf), "id:%06u,src:%06u,depth:%u", seed.id,
                  *seed.parent_id, seed.last_depth);
  else
    std::snprintf(buf, sizeof(buf), "id:%06u,src:init,depth:%u", seed.id,
                  seed.last_depth);
  return buf;
}

}  // namespace

Campaign::Campaign(Target& target, const LayoutSpec& spec, CampaignConfig cfg)
    : target_(&target),
      spec_(spec),
      cfg_(std::move(cfg)),
      rng_(cfg_.rng_seed),
      wall_start_(std::chrono::steady_clock::now()) {
  energy_cfg_.max_energy_u = cfg_.max_energy_u;
  energy_cfg_.schedule = cfg_.schedule;
  if (cfg_.sample_interval_execs == 0) cfg_.sample_interval_execs = 1000;
  if (spec_.total_len_bits() != target_->layout().total_len_bits())
    throw FuzzError("layout length (" + std::to_string(spec_.total_len_bytes()) +
                    " bytes) does not match target input size (" +
                    std::to_string(target_->layout().total_len_bytes()) + " bytes)");
  if (!cfg_.out_dir.empty()) {
    std::filesystem::create_directories(cfg_.out_dir / "queue");
    std::filesystem::create_directories(cfg_.out_dir / "crashes");
  }
}

void Campaign::init_from_corpus(const std::filesystem::path& corpus_dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(corpus_dir, ec))
    if (entry.is_regular_file()) files.push_back(entry.path());
  if (ec) throw FuzzError("cannot read corpus directory " + corpus_dir.string());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw FuzzError("corpus directory " + corpus_dir.string() + " has no files");

  std::vector<std::vector<uint8_t>> inputs;
  std::vector<std::string> names;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    inputs.push_back(std::move(bytes));
    names.push_back(path.filename().string());
  }
  init_from_inputs(inputs, names);
}

void Campaign::init_from_inputs(const std::vector<std::vector<uint8_t>>& inputs,
                                const std::vector<std::string>& names) {
  if (initialized_) throw FuzzError("campaign already initialized");
  if (!spec_.has_fuzz_field())
    throw FuzzError("layout has no fuzz field; nothing to mutate");
  if (inputs.empty()) throw FuzzError("initial corpus is empty");

  for (size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != spec_.total_len_bytes())
      throw FuzzError("corpus file '" + names[i] + "' has " +
                      std::to_string(inputs[i].size()) + " bytes, layout needs " +
                      std::to_string(spec_.total_len_bytes()));
  }

  for (size_t i = 0; i < inputs.size(); ++i) {
    const ExecResult result = exec_input(inputs[i]);
    switch (result.status) {
      case ExecStatus::kOk: {
        if (target_->provides_coverage()) {
          const ScanResult scan = scan_and_reset(map_, &virgin_);
          if (scan.novelty != Novelty::kNothing)
            admit_seed(inputs[i], result, scan, std::nullopt);
        } else {
          map_.reset();
          admit_seed(inputs[i], result, ScanResult{}, std::nullopt);
        }
        break;
      }
      case ExecStatus::kCrash: {
        const ScanResult scan = scan_and_reset(map_, nullptr);
        record_crash(inputs[i], result, scan.fingerprint);
        break;
      }
      case ExecStatus::kTimeout:
        map_.reset();
        break;
    }
  }

  if (queue_.empty())
    throw FuzzError("no initial seed survived execution (all crashed, timed "
                    "out, or added no coverage)");
  initialized_ = true;
}

const CampaignStats& Campaign::run() {
  if (!initialized_) throw FuzzError("campaign not initialized");
  if (!cfg_.budget_execs.has_value() && !cfg_.budget_seconds.has_value())
    throw FuzzError("no budget configured (execs or seconds)");

  while (!out_of_budget()) {
    for (size_t qi = 0; qi < queue_.size() && !out_of_budget(); ++qi) fuzz_one(qi);
  }
  finalize();
  return stats_;
}

void Campaign::fuzz_one(size_t qi) {
  if (out_of_budget()) return;

  // Re-execute the seed itself so its last observed depth is fresh for
  // this pass's validity.
  {
    Seed& seed = queue_[qi];
    const ExecResult result = exec_input(seed.input);
    observe_execution(ledger_, seed, result);
    if (target_->provides_coverage())
      (void)scan_and_reset(map_, &virgin_);
    else
      map_.reset();
  }

  const MutationView view = extract(spec_, queue_[qi].input);

  if (!queue_[qi].deterministic_done) {
    debug_stage_ = 'D';
    DeterministicStage det(view.bits);
    BitBuf candidate;
    while (!out_of_budget() && det.next(candidate)) emit_candidate(qi, candidate);
    queue_[qi].deterministic_done = true;
    debug_stage_ = 'H';
  }

  uint32_t energy;
  {
    const Seed& seed = queue_[qi];
    const uint32_t p =
        base_energy(seed.exec_time_us, seed.bucket_popcount, queue_stats(), energy_cfg_);
    energy = cfg_.schedule == Schedule::kDepthBased
                 ? depth_energy(p, validity(ledger_, seed.last_depth), energy_cfg_)
                 : p;
    if (::getenv("FIELDFUZZ_DEBUG_ENERGY"))
      std::fprintf(stderr,
                   "pass seed=%u depth=%u gmax=%u cost=%llu pop=%u p=%u e=%u "
                   "execs=%llu q=%zu\n",
                   seed.id, seed.last_depth, ledger_.global_max_depth(),
                   (unsigned long long)seed.exec_time_us, seed.bucket_popcount, p,
                   energy, (unsigned long long)stats_.execs_total, queue_.size());
  }

  HavocStage havoc(view.bits, view.segments, MutationBudget{energy, rng_.next_u64()});
  BitBuf candidate;
  while (!out_of_budget() && havoc.next(candidate)) emit_candidate(qi, candidate);
}

ExecResult Campaign::exec_input(std::span<const uint8_t> input) {
  const ExecResult result = run_target(*target_, input, cfg_.timeout_us, map_);
  ++stats_.execs_total;
  ledger_.note_depth(result.max_depth);
  if (ledger_.global_max_depth() > stats_.max_depth_global)
    stats_.max_depth_global = ledger_.global_max_depth();
  maybe_sample();
  maybe_heartbeat();
  return result;
}

void Campaign::emit_candidate(size_t parent_index, const BitBuf& view_bits) {
  const Seed& parent = queue_[parent_index];
  scratch_.assign(parent.input.begin(), parent.input.end());
  restore_into(spec_, view_bits, scratch_);
  const uint32_t parent_id = parent.id;

  const uint32_t gmax_before = ledger_.global_max_depth();
  const ExecResult result = exec_input(scratch_);

  switch (result.status) {
    case ExecStatus::kOk: {
      if (target_->provides_coverage()) {
        const ScanResult scan = scan_and_reset(map_, &virgin_);
        if (scan.novelty != Novelty::kNothing)
          admit_seed(scratch_, result, scan, parent_id);
      } else {
        map_.reset();
        // Without coverage, novelty is a new depth record.
        if (result.max_depth > gmax_before)
          admit_seed(scratch_, result, ScanResult{}, parent_id);
      }
      break;
    }
    case ExecStatus::kCrash: {
      const ScanResult scan = scan_and_reset(map_, nullptr);
      record_crash(scratch_, result, scan.fingerprint);
      break;
    }
    case ExecStatus::kTimeout:
      map_.reset();
      break;
  }
}

void Campaign::admit_seed(const std::vector<uint8_t>& input,
                          const ExecResult& result, const ScanResult& scan,
                          std::optional<uint32_t> parent_id) {
  Seed seed;
  seed.id = uint32_t(queue_.size());
  seed.input = input;
  seed.exec_time_us = result.duration_us;
  seed.bucket_popcount = scan.popcount;
  seed.last_depth = result.max_depth;
  seed.discovered_at_execs = stats_.execs_total;
  seed.fingerprint = scan.fingerprint;
  seed.parent_id = parent_id;

  if (::getenv("FIELDFUZZ_DEBUG_ENERGY")) {
    uint32_t parent_depth = 0;
    if (parent_id) parent_depth = queue_[*parent_id].last_depth;
    std::fprintf(stderr, "admit id=%u depth=%u parent_depth=%u stage=%c execs=%llu\n",
                 seed.id, seed.last_depth, parent_depth, debug_stage_,
                 (unsigned long long)stats_.execs_total);
  }
  if (!cfg_.out_dir.empty())
    write_file(cfg_.out_dir / "queue" / seed_file_name(seed), seed.input);
  queue_.push_back(std::move(seed));
  stats_.paths_total = queue_.size();
}

void Campaign::record_crash(const std::vector<uint8_t>& input,
                            const ExecResult& result, uint64_t fingerprint) {
  if (!crash_keys_.emplace(result.crash_kind, fingerprint).second) return;
  ++stats_.crashes_unique;
  stats_.first_crash_execs.emplace(result.crash_kind, stats_.execs_total);

  if (!cfg_.out_dir.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "id:%06" PRIu64 ",kind:%s", crash_files_,
                  result.crash_kind.c_str());
    write_file(cfg_.out_dir / "crashes" / buf, input);
  }
  ++crash_files_;
}

QueueStats Campaign::queue_stats() const {
  QueueStats stats;
  if (queue_.empty()) return stats;
  uint64_t exec_sum = 0;
  uint64_t pop_sum = 0;
  for (const Seed& s : queue_) {
    exec_sum += s.exec_time_us;
    pop_sum += s.bucket_popcount;
  }
  stats.avg_exec_us = double(exec_sum) / double(queue_.size());
  stats.avg_popcount = double(pop_sum) / double(queue_.size());
  return stats;
}

bool Campaign::out_of_budget() const {
  if (cfg_.budget_execs && stats_.execs_total >= *cfg_.budget_execs) return true;
  if (cfg_.budget_seconds && double(wall_elapsed_us()) / 1e6 >= *cfg_.budget_seconds)
    return true;
  return false;
}

uint64_t Campaign::wall_elapsed_us() const {
  return uint64_t(std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - wall_start_)
                      .count());
}

void Campaign::maybe_sample() {
  if (cfg_.logical_time) {
    if (stats_.execs_total % cfg_.sample_interval_execs == 0) push_row();
  } else {
    const uint64_t sec = wall_elapsed_us() / 1'000'000;
    if (sec > last_sample_mark_ || stats_.rows.empty()) {
      last_sample_mark_ = sec;
      push_row();
    }
  }
}

void Campaign::maybe_heartbeat() {
  if (cfg_.quiet) return;
  const uint64_t sec = wall_elapsed_us() / 1'000'000;
  if (sec <= last_heartbeat_sec_ && stats_.execs_total != 1) return;
  last_heartbeat_sec_ = sec;
  const double rate = sec > 0 ? double(stats_.execs_total) / double(sec) : 0.0;
  std::fprintf(stderr,
               "[%4" PRIu64 "s] execs %" PRIu64 " (%.0f/s) paths %" PRIu64
               " depth %u crashes %" PRIu64 "\n",
               sec, stats_.execs_total, rate, stats_.paths_total,
               stats_.max_depth_global, stats_.crashes_unique);
}

void Campaign::push_row() {
  StatsRow row;
  row.time = cfg_.logical_time ? stats_.execs_total : wall_elapsed_us() / 1'000'000;
  row.execs = stats_.execs_total;
  row.paths = stats_.paths_total;
  row.max_depth = stats_.max_depth_global;
  row.unique_crashes = stats_.crashes_unique;
  stats_.rows.push_back(row);
}

void Campaign::finalize() {
  if (stats_.rows.empty() || stats_.rows.back().execs != stats_.execs_total)
    push_row();
  stats_.elapsed_us = wall_elapsed_us();

  if (cfg_.out_dir.empty()) return;

  {
    std::ofstream plot(cfg_.out_dir / "plot_data.csv", std::ios::trunc);
    plot << "time,execs,paths,max_depth,unique_crashes\n";
    for (const StatsRow& r : stats_.rows)
      plot << r.time << "," << r.execs << "," << r.paths << "," << r.max_depth
           << "," << r.unique_crashes << "\n";
  }
  {
    std::ofstream st(cfg_.out_dir / "fuzzer_stats", std::ios::trunc);
    st << "target=" << target_->name() << "\n";
    st << "schedule=" << (cfg_.schedule == Schedule::kDepthBased ? "depth" : "afl")
       << "\n";
    st << "rng_seed=" << cfg_.rng_seed << "\n";
    st << "max_energy=" << cfg_.max_energy_u << "\n";
    st << "execs_total=" << stats_.execs_total << "\n";
    st << "paths_total=" << stats_.paths_total << "\n";
    st << "unique_crashes=" << stats_.crashes_unique << "\n";
    st << "max_depth=" << stats_.max_depth_global << "\n";
    st << "elapsed_us=" << stats_.elapsed_us << "\n";
    const double secs = double(stats_.elapsed_us) / 1e6;
    st << "execs_per_sec="
       << (secs > 0 ? uint64_t(double(stats_.execs_total) / secs) : 0) << "\n";
    for (const auto& [kind, execs] : stats_.first_crash_execs)
      st << "first_crash[" << kind << "]=" << execs << "\n";
  }
}

void Campaign::write_file(const std::filesystem::path& path,
                          std::span<const uint8_t> bytes) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FuzzError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
}

}  // namespace fieldfuzz
