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
// Execution of one input against a target under the harness contract:
// coverage probes, scoped call-depth accounting, deterministic cost
// charging, cooperative deadlines, and fault signalling.

#ifndef FIELDFUZZ_EXECUTOR_HPP_
#define FIELDFUZZ_EXECUTOR_HPP_

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fieldfuzz/coverage.hpp"
#include "fieldfuzz/layout.hpp"

namespace fieldfuzz {

// Thrown by targets to signal a detected fault. The kind is a stable
// identifier used for crash deduplication and filenames.
struct TargetFault {
  std::string kind;
};

// Probe interface handed to targets. Offers edge recording, a scoped
// call-depth guard, deterministic cost charging, and a cooperative
// deadline for looping targets.
class ProbeContext {
 public:
  void record_edge(uint16_t site) { map_->record_edge(site); }

  // Deterministic work units; becomes the execution's reported duration so
  // schedule decisions never depend on wall-clock noise.
  void charge(uint64_t units) { cost_ += units; }

  // Raises the depth high-water mark directly. Used by harnesses that learn
  // depth out-of-band (subprocess log parsing) instead of via guards.
  void note_depth(uint32_t depth) {
    if (depth > max_depth_) max_depth_ = depth;
  }

  // Sticky: once a target observes its deadline, the run reports Timeout.
  bool past_deadline() {
    if (std::chrono::steady_clock::now() >= deadline_) deadline_hit_ = true;
    return deadline_hit_;
  }

  uint32_t current_depth() const { return current_depth_; }
  uint32_t max_depth() const { return max_depth_; }
  uint64_t cost() const { return cost_; }
  bool deadline_hit() const { return deadline_hit_; }

  // Depth guard. Construct at entry of each depth-probed call.
  class CallScope {
   public:
    explicit CallScope(ProbeContext& ctx) : ctx_(ctx) {
      ++ctx_.current_depth_;
      if (ctx_.current_depth_ > ctx_.max_depth_) ctx_.max_depth_ = ctx_.current_depth_;
    }
    ~CallScope() { --ctx_.current_depth_; }
    CallScope(const CallScope&) = delete;
    CallScope& operator=(const CallScope&) = delete;

   private:
    ProbeContext& ctx_;
  };

 private:
  friend ProbeContext make_probe_context(CoverageMap&,
                                         std::chrono::steady_clock::time_point);
  CoverageMap* map_ = nullptr;
  uint32_t current_depth_ = 0;
  uint32_t max_depth_ = 0;
  uint64_t cost_ = 0;
  bool deadline_hit_ = false;
  std::chrono::steady_clock::time_point deadline_;
};

// Behavioral contract every fuzz target implements. run() must be
// deterministic in the input bytes and must not retain state across runs;
// reset() is invoked before each run.
class Target {
 public:
  virtual ~Target() = default;
  virtual std::string_view name() const = 0;
  virtual const LayoutSpec& layout() const = 0;
  virtual void reset() {}
  virtual bool provides_coverage() const { return true; }
  // Throws TargetFault on a detected fault.
  virtual void run(std::span<const uint8_t> input, ProbeContext& ctx) = 0;
};

enum class ExecStatus { kOk, kCrash, kTimeout };

struct ExecResult {
  ExecStatus status = ExecStatus::kOk;
  std::string crash_kind;   // set iff status == kCrash
  uint32_t max_depth = 0;   // 0 iff no depth probe fired
  uint64_t duration_us = 1; // deterministic cost units for in-process runs
};

// Runs one input. The map is reset before the run and holds the raw edge
// counters afterwards; callers consume them via scan_and_reset. Unbalanced
// depth guards are a programming error and abort via std::logic_error.
ExecResult run_target(Target& target, std::span<const uint8_t> input,
                      uint64_t timeout_us, CoverageMap& map);

struct LogDepthScan {
  uint32_t max_depth = 0;
  uint32_t malformed = 0;  // lines with the marker but a non-numeric value
};

// Scans captured output for `MF_DEPTH=<n>` lines and returns the maximum.
LogDepthScan parse_depth_from_log(std::string_view log);

// Target driven through an external command. `@@` in the template is
// replaced with the input file path; exit code 0 maps to Ok, nonzero to
// Crash("exit_<code>"); standard output is scanned for MF_DEPTH markers.
// No coverage is available, so campaigns fall back to depth novelty, and
// durations are wall-clock. No timeout is enforced.
class SubprocessTarget : public Target {
 public:
  SubprocessTarget(std::string command_template, LayoutSpec layout);
  ~SubprocessTarget() override;

  std::string_view name() const override { return "subprocess"; }
  const LayoutSpec& layout() const override { return layout_; }
  bool provides_coverage() const override { return false; }
  void run(std::span<const uint8_t> input, ProbeContext& ctx) override;

 private:
  std::string command_template_;
  LayoutSpec layout_;
  std::string input_path_;  // reused scratch file
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_EXECUTOR_HPP_
