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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fieldfuzz/campaign.hpp"
#include "fieldfuzz/errors.hpp"
#include "fieldfuzz/eval.hpp"
#include "fieldfuzz/targets.hpp"

namespace {

using namespace fieldfuzz;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FuzzError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunOptions {
  std::string corpus_dir;
  std::string out_dir;
  std::string spec_path;
  std::string target_name;
  std::string command;
  std::string schedule = "depth";
  uint32_t max_energy = 1600;
  uint64_t timeout_us = 1'000'000;
  uint64_t rng_seed = 0;
  bool logical_time = false;
  uint64_t sample_interval = 1000;
  uint64_t budget_execs = 0;
  double budget_seconds = 0;
  bool quiet = false;
};

int do_run(const RunOptions& opt, bool have_exec_budget, bool have_sec_budget) {
  if (opt.target_name.empty() == opt.command.empty()) {
    std::cerr << "run: exactly one of --target or --cmd is required\n";
    return 1;
  }
  if (!have_exec_budget && !have_sec_budget) {
    std::cerr << "run: a budget is required (--budget-execs or --budget-seconds)\n";
    return 1;
  }

  const LayoutSpec spec = LayoutSpec::parse(read_text_file(opt.spec_path));

  std::unique_ptr<Target> target;
  if (!opt.target_name.empty())
    target = make_target(opt.target_name, opt.rng_seed);
  else
    target = std::make_unique<SubprocessTarget>(opt.command, spec);

  CampaignConfig cfg;
  cfg.schedule = parse_schedule(opt.schedule);
  cfg.max_energy_u = opt.max_energy;
  cfg.timeout_us = opt.timeout_us;
  cfg.rng_seed = opt.rng_seed;
  cfg.logical_time = opt.logical_time;
  cfg.sample_interval_execs = opt.sample_interval;
  if (have_exec_budget) cfg.budget_execs = opt.budget_execs;
  if (have_sec_budget) cfg.budget_seconds = opt.budget_seconds;
  cfg.out_dir = opt.out_dir;
  cfg.quiet = opt.quiet;

  Campaign campaign(*target, spec, cfg);
  campaign.init_from_corpus(opt.corpus_dir);
  const CampaignStats& stats = campaign.run();

  std::fprintf(stderr,
               "done: execs %llu, paths %llu, max depth %u, unique crashes %llu\n",
               (unsigned long long)stats.execs_total,
               (unsigned long long)stats.paths_total, stats.max_depth_global,
               (unsigned long long)stats.crashes_unique);
  return 0;
}

struct EvalOptions {
  std::string target_name = "nested8";
  std::string schedules = "depth,afl";
  uint32_t trials = 20;
  uint64_t budget_execs = 2'000'000;
  uint64_t rng_seed = 1;
  std::string out_dir;
  uint32_t max_energy = 1600;
  uint64_t sample_interval = 10'000;
  unsigned jobs = 1;
  bool verbose = false;
};

int do_eval(const EvalOptions& opt) {
  Experiment exp;
  exp.target_name = opt.target_name;
  exp.schedules.clear();
  std::stringstream ss(opt.schedules);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) exp.schedules.push_back(parse_schedule(item));
  exp.trials = opt.trials;
  exp.budget_execs = opt.budget_execs;
  exp.base_rng_seed = opt.rng_seed;
  exp.out_dir = opt.out_dir;
  exp.max_energy_u = opt.max_energy;
  exp.sample_interval_execs = opt.sample_interval;
  exp.jobs = opt.jobs;
  exp.quiet = !opt.verbose;

  const ExperimentSummary summary = run_experiment(exp);
  std::cout << format_summary_table(summary);
  return 0;
}

int do_spec_check(const std::string& path) {
  const LayoutSpec spec = LayoutSpec::parse(read_text_file(path));
  uint32_t fuzz_fields = 0;
  for (const FieldSpec& f : spec.fields())
    if (f.mode == FieldMode::kFuzz) ++fuzz_fields;
  std::cout << path << ": ok, " << spec.total_len_bytes() << " bytes, "
            << spec.fields().size() << " field(s), " << fuzz_fields
            << " fuzzable (" << spec.fuzz_len_bits() << " bits)\n";
  return 0;
}

int do_spec_dump(const std::string& target_name, const std::string& out_path) {
  auto target = make_target(target_name, 0);
  const std::string text = target->layout().format();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw FuzzError("cannot write " + out_path);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fieldfuzz - field-selective coverage-guided fuzzer with a "
               "call-depth power schedule"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run one fuzzing campaign");
  run->add_option("-i,--corpus", run_opt.corpus_dir, "initial corpus directory")
      ->required();
  run->add_option("-o,--out", run_opt.out_dir, "output directory")->required();
  run->add_option("--spec", run_opt.spec_path, "layout spec file")->required();
  run->add_option("--target", run_opt.target_name,
                  "built-in target (nested4|nested8|magic32|spin)");
  run->add_option("--cmd", run_opt.command,
                  "subprocess command template; @@ is the input file");
  run->add_option("--schedule", run_opt.schedule, "power schedule: depth|afl");
  run->add_option("--max-energy", run_opt.max_energy, "energy ceiling U");
  run->add_option("--timeout-us", run_opt.timeout_us, "per-exec deadline");
  run->add_option("--rng-seed", run_opt.rng_seed, "seed for all randomness");
  run->add_flag("--logical-time", run_opt.logical_time,
                "plot rows keyed by exec count, not wall clock");
  run->add_option("--sample-interval", run_opt.sample_interval,
                  "execs between plot rows in logical-time mode");
  auto* exec_budget_opt =
      run->add_option("--budget-execs", run_opt.budget_execs, "stop after N execs");
  auto* sec_budget_opt = run->add_option("--budget-seconds", run_opt.budget_seconds,
                                         "stop after S seconds");
  run->add_flag("--quiet", run_opt.quiet, "suppress the heartbeat");

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "A/B schedule experiment");
  eval->add_option("--target", eval_opt.target_name, "built-in target")->required();
  eval->add_option("--out", eval_opt.out_dir, "output directory")->required();
  eval->add_option("--schedules", eval_opt.schedules, "comma list, e.g. depth,afl");
  eval->add_option("--trials", eval_opt.trials, "trials per arm");
  eval->add_option("--budget-execs", eval_opt.budget_execs, "execs per trial");
  eval->add_option("--rng-seed", eval_opt.rng_seed, "base seed; trial t uses seed+t");
  eval->add_option("--max-energy", eval_opt.max_energy, "energy ceiling U");
  eval->add_option("--sample-interval", eval_opt.sample_interval,
                   "execs between plot rows");
  eval->add_option("--jobs", eval_opt.jobs, "parallel trials (arms stay serial)");
  eval->add_flag("--verbose", eval_opt.verbose, "per-campaign heartbeats");

  std::string check_path;
  CLI::App* check = app.add_subcommand("spec-check", "validate a layout spec file");
  check->add_option("--spec", check_path, "layout spec file")->required();

  std::string dump_target, dump_out;
  CLI::App* dump = app.add_subcommand("spec-dump", "print a target's layout spec");
  dump->add_option("--target", dump_target, "built-in target")->required();
  dump->add_option("-o,--out", dump_out, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run)
      return do_run(run_opt, exec_budget_opt->count() > 0,
                    sec_budget_opt->count() > 0);
    if (*eval) return do_eval(eval_opt);
    if (*check) return do_spec_check(check_path);
    if (*dump) return do_spec_dump(dump_target, dump_out);
  } catch (const FuzzError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
