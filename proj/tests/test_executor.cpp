#include <doctest.h>

#include <memory>
#include <vector>

#include "fieldfuzz/executor.hpp"
#include "fieldfuzz/targets.hpp"

using namespace fieldfuzz;

namespace {

// Minimal targets for guard semantics.
class GuardProbeTarget : public Target {
 public:
  enum class Mode { kNested3, kSequential3, kRecursion10 };
  explicit GuardProbeTarget(Mode mode)
      : mode_(mode), layout_(LayoutSpec::parse("len 1\nf 0 8 fuzz")) {}

  std::string_view name() const override { return "guard_probe"; }
  const LayoutSpec& layout() const override { return layout_; }

  void run(std::span<const uint8_t>, ProbeContext& ctx) override {
    ctx.charge(1);
    switch (mode_) {
      case Mode::kNested3: {
        ProbeContext::CallScope a(ctx);
        ProbeContext::CallScope b(ctx);
        ProbeContext::CallScope c(ctx);
        break;
      }
      case Mode::kSequential3: {
        for (int i = 0; i < 3; ++i) ProbeContext::CallScope scope(ctx);
        break;
      }
      case Mode::kRecursion10:
        recurse(10, ctx);
        break;
    }
  }

 private:
  static void recurse(int depth, ProbeContext& ctx) {
    if (depth == 0) return;
    ProbeContext::CallScope scope(ctx);
    recurse(depth - 1, ctx);
  }

  Mode mode_;
  LayoutSpec layout_;
};

std::vector<uint8_t> input64() { return std::vector<uint8_t>(64, 0); }

// Input that passes the first `n` gates of a nested target.
std::vector<uint8_t> passing_input(const NestedGateTarget& target, uint32_t n) {
  std::vector<uint8_t> input(64, 0);
  for (uint32_t i = 0; i < n; ++i) {
    input[4 + 2 * i] = uint8_t(target.gate_keys()[i] >> 8);
    input[5 + 2 * i] = uint8_t(target.gate_keys()[i]);
  }
  return input;
}

}  // namespace

TEST_CASE("depth guard: nesting vs sequence vs recursion") {
  CoverageMap map;
  GuardProbeTarget nested(GuardProbeTarget::Mode::kNested3);
  CHECK(run_target(nested, input64(), 1000, map).max_depth == 3);
  GuardProbeTarget seq(GuardProbeTarget::Mode::kSequential3);
  CHECK(run_target(seq, input64(), 1000, map).max_depth == 1);
  GuardProbeTarget rec(GuardProbeTarget::Mode::kRecursion10);
  CHECK(run_target(rec, input64(), 1000, map).max_depth == 10);
}

TEST_CASE("run_target on the nested chain: ok, crash, depth") {
  CoverageMap map;
  NestedGateTarget target("nested8", 8, 42);

  // All gates fail at the first check.
  std::vector<uint8_t> blocked = passing_input(target, 0);
  if (uint8_t(target.gate_keys()[0] >> 8) == 0) blocked[4] = 1;
  ExecResult r = run_target(target, blocked, 1000, map);
  CHECK(r.status == ExecStatus::kOk);
  CHECK(r.max_depth == 1);
  CHECK(r.duration_us > 0);

  // All eight fields correct.
  r = run_target(target, passing_input(target, 8), 1000, map);
  CHECK(r.status == ExecStatus::kCrash);
  CHECK(r.crash_kind == "deep_bug");
  CHECK(r.max_depth == 8);
}

TEST_CASE("run_target: spin target times out") {
  CoverageMap map;
  SpinTarget target;
  std::vector<uint8_t> input(64, 0);
  input[0] = 0xFE;
  input[1] = 0xED;
  input[2] = 0xFA;
  input[3] = 0xCE;
  const ExecResult r = run_target(target, input, 2000, map);
  CHECK(r.status == ExecStatus::kTimeout);

  const ExecResult ok = run_target(target, std::vector<uint8_t>(64, 0), 2000, map);
  CHECK(ok.status == ExecStatus::kOk);
}

TEST_CASE("run_target is reproducible for deterministic targets") {
  NestedGateTarget target("nested8", 8, 1234);
  const std::vector<uint8_t> input = passing_input(target, 3);

  CoverageMap map_a;
  const ExecResult a = run_target(target, input, 1000, map_a);
  std::vector<uint8_t> counts_a(map_a.counts().begin(), map_a.counts().end());

  CoverageMap map_b;
  const ExecResult b = run_target(target, input, 1000, map_b);

  CHECK(a.status == b.status);
  CHECK(a.max_depth == b.max_depth);
  CHECK(a.max_depth == 4);  // three leading gates passed
  CHECK(a.duration_us == b.duration_us);
  CHECK(std::equal(counts_a.begin(), counts_a.end(), map_b.counts().begin()));
}

TEST_CASE("parse_depth_from_log: maximum across markers") {
  CHECK(parse_depth_from_log("init\nMF_DEPTH=4\nMF_DEPTH=9\ndone").max_depth == 9);
  CHECK(parse_depth_from_log("MF_DEPTH=9\nMF_DEPTH=4").max_depth == 9);
}

TEST_CASE("parse_depth_from_log: no markers") {
  const LogDepthScan scan = parse_depth_from_log("no markers here");
  CHECK(scan.max_depth == 0);
  CHECK(scan.malformed == 0);
}

TEST_CASE("parse_depth_from_log: malformed values are skipped with a warning") {
  const LogDepthScan scan = parse_depth_from_log("MF_DEPTH=3\nMF_DEPTH=xx\nMF_DEPTH=7");
  CHECK(scan.max_depth == 7);
  CHECK(scan.malformed == 1);
}

TEST_CASE("subprocess target: exit code and depth markers") {
  const LayoutSpec layout = LayoutSpec::parse("len 4\nf 0 32 fuzz");
  CoverageMap map;

  SubprocessTarget ok_target("sh -c 'echo MF_DEPTH=5; cat @@ > /dev/null'", layout);
  const std::vector<uint8_t> input = {1, 2, 3, 4};
  ExecResult r = run_target(ok_target, input, 1'000'000, map);
  CHECK(r.status == ExecStatus::kOk);
  CHECK(r.max_depth == 5);

  SubprocessTarget crash_target("sh -c 'exit 3' <@@", layout);
  r = run_target(crash_target, input, 1'000'000, map);
  CHECK(r.status == ExecStatus::kCrash);
  CHECK(r.crash_kind == "exit_3");
}
