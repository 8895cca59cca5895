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

#include "fieldfuzz/executor.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

#include "fieldfuzz/errors.hpp"

namespace fieldfuzz {

ProbeContext make_probe_context(CoverageMap& map,
                                std::chrono::steady_clock::time_point deadline) {
  ProbeContext ctx;
  ctx.map_ = &map;
  ctx.deadline_ = deadline;
  return ctx;
}

ExecResult run_target(Target& target, std::span<const uint8_t> input,
                      uint64_t timeout_us, CoverageMap& map) {
  map.reset();
  target.reset();
  ProbeContext ctx = make_probe_context(
      map, std::chrono::steady_clock::now() + std::chrono::microseconds(timeout_us));

  ExecResult result;
  try {
    target.run(input, ctx);
    result.status = ctx.deadline_hit() ? ExecStatus::kTimeout : ExecStatus::kOk;
  } catch (const TargetFault& fault) {
    result.status = ExecStatus::kCrash;
    result.crash_kind = fault.kind;
  }

  if (ctx.current_depth() != 0)
    throw std::logic_error("target left unbalanced depth guards");

  result.max_depth = ctx.max_depth();
  result.duration_us = ctx.cost() > 0 ? ctx.cost() : 1;
  return result;
}

LogDepthScan parse_depth_from_log(std::string_view log) {
  static constexpr std::string_view kMarker = "MF_DEPTH=";
  LogDepthScan scan;
  size_t pos = 0;
  while (pos < log.size()) {
    size_t eol = log.find('\n', pos);
    if (eol == std::string_view::npos) eol = log.size();
    std::string_view line = log.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.substr(0, kMarker.size()) != kMarker) continue;
    std::string_view value = line.substr(kMarker.size());
    uint64_t parsed = 0;
    bool ok = !value.empty();
    for (char c : value) {
      if (c < '0' || c > '9') {
        ok = false;
        break;
      }
      parsed = parsed * 10 + uint64_t(c - '0');
      if (parsed > UINT32_MAX) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++scan.malformed;
      continue;
    }
    if (parsed > scan.max_depth) scan.max_depth = uint32_t(parsed);
  }
  return scan;
}

SubprocessTarget::SubprocessTarget(std::string command_template, LayoutSpec layout)
    : command_template_(std::move(command_template)), layout_(std::move(layout)) {
  if (command_template_.find("@@") == std::string::npos)
    throw FuzzError("command template must contain @@ for the input file");
  const auto dir = std::filesystem::temp_directory_path();
  input_path_ = (dir / ("fieldfuzz_input_" + std::to_string(::getpid()) + "_" +
                        std::to_string(reinterpret_cast<uintptr_t>(this))))
                    .string();
}

SubprocessTarget::~SubprocessTarget() {
  std::error_code ec;
  std::filesystem::remove(input_path_, ec);
}

void SubprocessTarget::run(std::span<const uint8_t> input, ProbeContext& ctx) {
  {
    std::ofstream file(input_path_, std::ios::binary | std::ios::trunc);
    if (!file) throw FuzzError("cannot write input file " + input_path_);
    file.write(reinterpret_cast<const char*>(input.data()),
               std::streamsize(input.size()));
  }

  std::string cmd = command_template_;
  for (size_t at = cmd.find("@@"); at != std::string::npos; at = cmd.find("@@", at))
    cmd.replace(at, 2, input_path_);

  const auto start = std::chrono::steady_clock::now();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw FuzzError("failed to launch: " + cmd);
  std::string output;
  char buf[4096];
  size_t n;
  while ((n = ::fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
  const int rc = ::pclose(pipe);
  const auto wall = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);

  ctx.charge(uint64_t(wall.count()) + 1);
  const LogDepthScan scan = parse_depth_from_log(output);
  if (scan.malformed > 0)
    std::fprintf(stderr, "warning: %u malformed MF_DEPTH line(s) skipped\n",
                 scan.malformed);
  ctx.note_depth(scan.max_depth);

  int exit_code = -1;
  if (rc != -1 && WIFEXITED(rc)) exit_code = WEXITSTATUS(rc);
  if (exit_code != 0) throw TargetFault{"exit_" + std::to_string(exit_code)};
}

}  // namespace fieldfuzz
