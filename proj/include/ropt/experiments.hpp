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

#ifndef ROPT__EXPERIMENTS_HPP_
#define ROPT__EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ropt/metrics.hpp"
#include "ropt/scenario.hpp"

namespace ropt
{

enum class ExperimentMode { kSingle, kSweepFollowing, kSweepIntersection, kBatch };

std::string_view to_string(ExperimentMode m);
ExperimentMode parse_mode(std::string_view name);

struct SweepGrid
{
  double v_min{0.0};
  double v_max{15.0};
  double v_step{0.5};
  double a_min{-3.0};
  double a_max{3.0};
  double a_step{0.5};

  std::vector<double> speeds() const;
  std::vector<double> accelerations() const;
};

// What the `run` mode simulates.
struct SingleRun
{
  std::string scenario{"crossing"};  // following | crossing | random
  double v_f2{10.0};
  double a_f2{0.0};
};

struct ExperimentConfig
{
  ExperimentMode mode{ExperimentMode::kSingle};
  // Sweep/scenario variant name; empty picks the first one.
  std::string variant;
  EgoConfig ego;
  ReactiveConfig reactive;
  SimConfig sim;
  FollowingSetup following;
  CrossingSetup crossing;
  RandomSetup random;
  SweepGrid grid;
  SingleRun single;
  IndicatorOptions indicators;
  int runs{2000};
  std::uint64_t seed{1};
  std::string out_dir{"out"};
  int jobs{1};
  // Fraction of failed runs above which the tool exits with status 2.
  double failure_threshold{0.01};
};

nlohmann::json config_to_json(const ExperimentConfig & cfg);
/// Overlays `j` on `base`; unknown keys are errors (InvalidInput).
ExperimentConfig config_from_json(const nlohmann::json & j, const ExperimentConfig & base = {});
ExperimentConfig load_config(const std::string & path, const ExperimentConfig & base = {});

/// FNV-1a of the canonical JSON of everything that affects results.
std::uint64_t config_hash(const ExperimentConfig & cfg);
std::string hash_hex(std::uint64_t h);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs fn(0..n-1) on `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> & fn,
                  const Progress & progress = {});

struct SweepCell
{
  double v_f2{0.0};
  double a_f2{0.0};
  IndicatorSet indicators;
  Termination termination{Termination::kTimeout};
  int optimizer_failures{0};
  std::string error;
};

struct SweepResult
{
  std::string variant;
  std::vector<SweepCell> cells;  // speed-major over the grid
};

SweepResult run_following_sweep(const ExperimentConfig & cfg, FollowingVariant variant,
                                const Progress & progress = {});
SweepResult run_crossing_sweep(const ExperimentConfig & cfg, CrossingVariant variant,
                               const Progress & progress = {});

struct BatchRow
{
  std::size_t index{0};
  std::uint64_t seed{0};
  RandomScenarioSpec spec;
  IndicatorSet indicators;
  Termination termination{Termination::kTimeout};
  int optimizer_failures{0};
  std::string error;
};

std::vector<BatchRow> run_randomized_batch(const ExperimentConfig & cfg,
                                           const Progress & progress = {});

/// Builds the scenario of the `run` mode.
Scenario single_scenario(const ExperimentConfig & cfg);

void write_sweep_csv(std::ostream & os, const SweepResult & result, const ExperimentConfig & cfg);
void write_batch_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                     const ExperimentConfig & cfg);

struct Histogram
{
  std::vector<double> edges;  // bins are [edges[i], edges[i+1]); last edge may be +inf
  std::vector<std::size_t> counts;
};

/// Values beyond the last finite edge land in an overflow bin up to +inf.
Histogram histogram(std::span<const std::optional<double>> values, double lo, double hi,
                    double width);

/// Cumulative TH_2D histogram, one block per compliance class; runs without
/// any overlap fall into the overflow bin.
void write_th2d_cdf_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                        const ExperimentConfig & cfg, double width = 0.25);
/// Probability histogram of the ego's filtered peak jerk per compliance class.
void write_rmax_hist_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                         const ExperimentConfig & cfg, double width = 0.25, double hi = 10.0);

nlohmann::json run_record_json(const RunRecord & record);
nlohmann::json indicators_json(const IndicatorSet & ind);

}  // namespace ropt

#endif  // ROPT__EXPERIMENTS_HPP_
