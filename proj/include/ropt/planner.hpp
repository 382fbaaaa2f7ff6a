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

#ifndef ROPT__PLANNER_HPP_
#define ROPT__PLANNER_HPP_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ropt/risk_cost.hpp"
#include "ropt/velocity_profile.hpp"

namespace ropt
{

struct OptimizerConfig
{
  int max_cycles{20};
  double penalty_weight{1e5};
  double v_max{20.0};
  double a_min{-8.0};
  double a_max{3.0};
  double brake_lag{0.4};
  double engine_lag{0.8};
  double convergence{1e-3};
  double v_bracket{1.5};
  double lag_bracket{0.3};
  // Constant-acceleration snakes tried next to the warm start; the search
  // begins from whichever has the lowest penalized fitness.
  std::vector<double> seed_accelerations{-4.0, -2.0, 0.0, 2.0};
};

// Everything the ego needs for one planning step; frozen for the step.
struct PlanningScene
{
  PathPtr path;
  VehicleShape shape;
  double l{0.0};
  double v{0.0};
  double a{0.0};
  std::span<const OtherInteraction> others;
  RateParams rates;
  CostWeights weights;
  ProfileConfig profile;
};

/// Quadratic soft-constraint penalty of a snake against the optimiser bounds.
double constraint_penalty(const SnakeParams & params, const OptimizerConfig & cfg);

double penalized_fitness(const SnakeParams & params, const PlanningScene & scene,
                         const OptimizerConfig & cfg);

struct OptimizeResult
{
  SnakeParams params;
  double fitness{0.0};
  int cycles{0};
  int evaluations{0};
  bool ok{true};
};

/// Powell search over (v_p1..v_p4, lag) starting from `start`.
OptimizeResult optimize(const SnakeParams & start, const PlanningScene & scene,
                        const OptimizerConfig & cfg);

/// Same search over an arbitrary objective of the five decision variables.
OptimizeResult optimize_objective(const SnakeParams & start,
                                  const std::function<double(const SnakeParams &)> & objective,
                                  const OptimizerConfig & cfg);

struct FixedCurves
{
  std::vector<double> constant;
  std::vector<double> stop;
  std::vector<double> accelerate;
};

/// Raw (unlagged, unsmoothed) constant / emergency-stop / full-acceleration curves.
FixedCurves build_fixed_candidates(double v_0, double a_min, double a_max, double v_max,
                                   double horizon, double step);

enum class CandidateId : int { kOptimized = 0, kConstant = 1, kStop = 2, kAccelerate = 3 };
inline constexpr std::size_t kCandidateCount = 4;

std::string_view to_string(CandidateId id);

struct Candidate
{
  CandidateId id{CandidateId::kOptimized};
  SampledProfile profile;
  Costs costs;
  double penalty{0.0};

  double score() const { return costs.fitness + penalty; }
};

struct CandidateSet
{
  std::vector<Candidate> candidates;
  bool optimizer_failed{false};

  const Candidate * find(CandidateId id) const;
};

struct HysteresisConfig
{
  double relative_factor{0.8};  // rho
  double absolute_margin{2000.0};
  double hold_time{0.3};
  // Risk slack allowed when returning from a fallback to the optimized plan.
  double resume_margin{500.0};
};

struct HysteresisState
{
  CandidateId active{CandidateId::kOptimized};
  // Time each candidate has continuously qualified as a switch target.
  std::array<double, kCandidateCount> held{};

  std::optional<CandidateId> pending() const;
};

/// Hysteresis switch between candidates. Advances `state` by dt and returns the
/// candidate to execute.
CandidateId select(const CandidateSet & set, HysteresisState & state,
                   const HysteresisConfig & cfg, double dt);

struct PlanResult
{
  CandidateId chosen{CandidateId::kOptimized};
  SampledProfile profile;
  CandidateSet candidates;
  SnakeParams params;
  int cycles{0};
};

// Stateful per-vehicle planner: warm-starts the snake from the previous cycle
// and carries the hysteresis state.
class Planner
{
public:
  Planner(OptimizerConfig optimizer, HysteresisConfig hysteresis)
  : optimizer_(optimizer), hysteresis_(hysteresis)
  {
  }

  PlanResult plan(const PlanningScene & scene, double dt);

  const HysteresisState & hysteresis_state() const { return state_; }
  const std::optional<SnakeParams> & params() const { return params_; }

private:
  OptimizerConfig optimizer_;
  HysteresisConfig hysteresis_;
  HysteresisState state_;
  std::optional<SnakeParams> params_;
  SampledProfile executed_;
};

}  // namespace ropt

#endif  // ROPT__PLANNER_HPP_
