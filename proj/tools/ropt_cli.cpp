// Copyright 2026 The ropt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ropt/experiments.hpp"

namespace fs = std::filesystem;
using namespace ropt;

namespace
{

constexpr int kExitConfig = 1;
constexpr int kExitFailures = 2;

struct Flags
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::string> out;
  std::optional<std::string> variant;
  std::optional<int> jobs;
  std::optional<std::string> scenario;
  std::optional<double> v_f2;
  std::optional<double> a_f2;
  bool records{false};
};

ExperimentConfig resolve(const Flags & f, ExperimentMode mode)
{
  ExperimentConfig base;
  if (const char * dir = std::getenv("ROPT_OUT_DIR"); dir != nullptr && *dir != '\0') {
    base.out_dir = dir;
  }
  ExperimentConfig cfg = f.config.empty() ? base : load_config(f.config, base);
  cfg.mode = mode;
  if (f.seed) cfg.seed = *f.seed;
  if (f.runs) cfg.runs = *f.runs;
  if (f.out) cfg.out_dir = *f.out;
  if (f.variant) cfg.variant = *f.variant;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (f.scenario) cfg.single.scenario = *f.scenario;
  if (f.v_f2) cfg.single.v_f2 = *f.v_f2;
  if (f.a_f2) cfg.single.a_f2 = *f.a_f2;
  if (cfg.jobs < 1) {
    throw InvalidInput("jobs must be at least 1");
  }
  return cfg;
}

std::ofstream open_out(const ExperimentConfig & cfg, const std::string & name)
{
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return os;
}

void save_config(const ExperimentConfig & cfg)
{
  auto os = open_out(cfg, "config.json");
  os << config_to_json(cfg).dump(2) << '\n';
}

Progress reporter(const std::string & label)
{
  return [label](std::size_t done, std::size_t total) {
    const std::size_t every = std::max<std::size_t>(1, total / 20);
    if (done % every == 0 || done == total) {
      std::cerr << label << ": " << done << '/' << total << '\n';
    }
  };
}

int verdict(std::size_t failed, std::size_t total, const ExperimentConfig & cfg)
{
  if (failed > 0) {
    std::cerr << failed << " of " << total << " runs failed\n";
  }
  const double share = total > 0 ? static_cast<double>(failed) / static_cast<double>(total) : 0;
  return share > cfg.failure_threshold ? kExitFailures : 0;
}

int cmd_run(const ExperimentConfig & cfg)
{
  const Scenario sc = single_scenario(cfg);
  const RunRecord rec = simulate(sc);
  nlohmann::json out = run_record_json(rec);
  out["indicators"] = indicators_json(compute_indicators(rec, cfg.indicators));
  out["config_hash"] = hash_hex(config_hash(cfg));
  save_config(cfg);
  auto os = open_out(cfg, "run.json");
  os << out.dump() << '\n';
  std::cerr << "run: " << to_string(rec.termination) << " after " << rec.steps.size()
            << " steps\n";
  return 0;
}

template <typename Variant, typename Parse, typename Run>
int cmd_sweep(const ExperimentConfig & cfg, const std::string & prefix,
              std::vector<Variant> variants, Parse parse, Run run)
{
  if (!cfg.variant.empty()) {
    variants = {parse(cfg.variant)};
  }
  save_config(cfg);
  std::size_t failed = 0;
  std::size_t total = 0;
  for (const Variant v : variants) {
    const std::string name(to_string(v));
    const SweepResult result = run(cfg, v, reporter(prefix + " " + name));
    for (const auto & c : result.cells) {
      failed += c.error.empty() ? 0 : 1;
    }
    total += result.cells.size();
    auto os = open_out(cfg, prefix + "_" + name + ".csv");
    write_sweep_csv(os, result, cfg);
  }
  return verdict(failed, total, cfg);
}

int cmd_batch(const ExperimentConfig & cfg, bool records)
{
  save_config(cfg);
  const std::vector<BatchRow> rows = run_randomized_batch(cfg, reporter("batch"));
  std::size_t failed = 0;
  for (const auto & r : rows) {
    failed += r.error.empty() ? 0 : 1;
  }
  {
    auto os = open_out(cfg, "batch.csv");
    write_batch_csv(os, rows, cfg);
  }
  {
    auto os = open_out(cfg, "th2d_cdf.csv");
    write_th2d_cdf_csv(os, rows, cfg);
  }
  {
    auto os = open_out(cfg, "rmax_hist.csv");
    write_rmax_hist_csv(os, rows, cfg);
  }
  if (records) {
    fs::create_directories(fs::path(cfg.out_dir) / "records");
    for (const auto & r : rows) {
      if (!r.error.empty()) {
        continue;
      }
      const RunRecord rec =
        simulate(build_random_scenario(r.spec, cfg.random, cfg.ego, cfg.reactive, cfg.sim));
      auto os = open_out(cfg, "records/run_" + std::to_string(r.index) + ".json");
      os << run_record_json(rec).dump() << '\n';
    }
  }
  return verdict(failed, rows.size(), cfg);
}

void common_flags(CLI::App * app, Flags & f)
{
  app->add_option("--config", f.config, "JSON config overriding the defaults")
    ->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--out", f.out, "Output directory (default $ROPT_OUT_DIR or ./out)");
  app->add_option("--jobs", f.jobs, "Worker threads");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Risk-based velocity planning experiments"};
  app.require_subcommand(1);
  Flags f;

  auto * run = app.add_subcommand("run", "Simulate a single scenario and dump its record");
  common_flags(run, f);
  run->add_option("--scenario", f.scenario, "following | crossing | random");
  run->add_option("--variant", f.variant, "Scenario variant");
  run->add_option("--v-f2", f.v_f2, "Initial speed of the other agent [m/s]");
  run->add_option("--a-f2", f.a_f2, "Maneuver acceleration of the other agent [m/s^2]");

  auto * following = app.add_subcommand("sweep-following", "Grid over the other's speed and "
                                                           "acceleration, same lane");
  common_flags(following, f);
  following->add_option("--variant", f.variant, "other-in-front | other-in-back (default both)");

  auto * crossing = app.add_subcommand("sweep-intersection", "Grid over the other's speed and "
                                                             "acceleration, crossing");
  common_flags(crossing, f);
  crossing->add_option("--variant", f.variant,
                       "other-from-right | other-from-left (default both)");

  auto * batch = app.add_subcommand("batch", "Randomized junction runs");
  common_flags(batch, f);
  batch->add_option("--runs", f.runs, "Number of runs");
  batch->add_flag("--records", f.records, "Also write every run record as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  ExperimentConfig cfg;
  try {
    if (run->parsed()) {
      cfg = resolve(f, ExperimentMode::kSingle);
    } else if (following->parsed()) {
      cfg = resolve(f, ExperimentMode::kSweepFollowing);
    } else if (crossing->parsed()) {
      cfg = resolve(f, ExperimentMode::kSweepIntersection);
    } else {
      cfg = resolve(f, ExperimentMode::kBatch);
    }
    // Surface bad variant names before any work is done.
    if (!cfg.variant.empty()) {
      if (following->parsed()) {
        parse_following_variant(cfg.variant);
      } else if (crossing->parsed()) {
        parse_crossing_variant(cfg.variant);
      }
    }
    if (run->parsed()) {
      single_scenario(cfg);
    }
  } catch (const std::exception & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      return cmd_run(cfg);
    }
    if (following->parsed()) {
      return cmd_sweep(
        cfg, "sweep_following",
        std::vector{FollowingVariant::kOtherInFront, FollowingVariant::kOtherInBack},
        parse_following_variant,
        [](const ExperimentConfig & c, FollowingVariant v, const Progress & p) {
          return run_following_sweep(c, v, p);
        });
    }
    if (crossing->parsed()) {
      return cmd_sweep(
        cfg, "sweep_intersection",
        std::vector{CrossingVariant::kOtherFromRight, CrossingVariant::kOtherFromLeft},
        parse_crossing_variant,
        [](const ExperimentConfig & c, CrossingVariant v, const Progress & p) {
          return run_crossing_sweep(c, v, p);
        });
    }
    return cmd_batch(cfg, f.records);
  } catch (const InvalidInput & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailures;
  }
}
