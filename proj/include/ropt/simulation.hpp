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

#ifndef ROPT__SIMULATION_HPP_
#define ROPT__SIMULATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ropt/planner.hpp"
#include "ropt/priority.hpp"
#include "ropt/risk_cost.hpp"

namespace ropt
{

struct AgentState
{
  PathPtr path;
  VehicleShape shape;
  double l{0.0};
  double v{0.0};
  double a{0.0};
  double r{0.0};

  Vec2 position() const { return path->position(l); }
  double heading() const { return path->heading(l); }
  Quad footprint() const { return oriented_box(position(), heading(), shape.length, shape.width); }
};

// Scripted other: constant speed, then a constant acceleration for a while,
// then whatever speed that left it with.
struct FixedManeuver
{
  double v_f{0.0};
  double a_f{0.0};
  double t_onset{1.0};
  double duration{3.0};
};

double fixed_agent_velocity(const FixedManeuver & m, double t);

// How an agent anticipates the agents around it.
struct PredictionConfig
{
  PatternParams pattern;
  AwarenessParams awareness;
  ClassifyOptions classify;
};

struct EgoConfig
{
  OptimizerConfig optimizer;
  HysteresisConfig hysteresis;
  RateParams rates;
  CostWeights weights;
  ProfileConfig profile;
  PredictionConfig prediction;
};

struct ReactiveConfig
{
  int profile_count{21};
  double a_min{-7.0};
  double a_max{3.0};
  double brake_lag{0.4};
  double engine_lag{0.8};
  double v_max{10.0};
  bool compliant{true};
  // A non-compliant agent ignores others farther away than this (centers).
  double attention_distance{10.0};
  RateParams rates{.escape_rate = 0.15};
  CostWeights weights;
  ProfileConfig profile;
  PredictionConfig prediction;
};

// Predictions of the others as seen by one agent. Interactions point into
// `predictions`, so the struct must not be copied once filled.
struct Observation
{
  std::vector<AgentPrediction> predictions;
  std::vector<OtherInteraction> interactions;
  std::vector<PriorityRelation> relations;

  Observation() = default;
  Observation(const Observation &) = delete;
  Observation & operator=(const Observation &) = delete;
};

/// Classifies and predicts each other agent from `self`'s point of view.
/// zones[j] has bounds_1 on self's path and bounds_2 on the other's. Without
/// `discount` no awareness is applied.
void observe(const AgentState & self, std::span<const AgentState> others,
             std::span<const InteractionZone> zones, const PredictionConfig & cfg,
             double v_max, double a_y_max, const ProfileConfig & profile, bool discount,
             Observation & out);

struct ReactiveChoice
{
  SampledProfile profile;
  std::size_t index{0};
  double acceleration{0.0};
  std::vector<double> fitness;
};

/// Picks the best of the constant-acceleration profiles against the given
/// interactions.
ReactiveChoice select_reactive_profile(const AgentState & self,
                                       std::span<const OtherInteraction> others,
                                       const ReactiveConfig & cfg);

/// Full reactive decision: observes the ego unless a non-compliant agent is
/// beyond its attention distance.
ReactiveChoice reactive_agent_plan(const AgentState & self, const AgentState & ego,
                                   const InteractionZone & zone_self_first,
                                   const ReactiveConfig & cfg);

enum class OtherControl { kFixed, kReactive };

struct SimConfig
{
  double dt{0.1};
  double t_max{60.0};
  double settle_time{5.0};
  // Run the full t_max even once both agents have settled.
  bool fixed_duration{false};
  double corridor_width{3.0};
};

struct Scenario
{
  AgentState ego;
  AgentState other;
  EgoConfig ego_config;
  OtherControl control{OtherControl::kFixed};
  FixedManeuver maneuver;
  ReactiveConfig reactive;
  SimConfig sim;
  std::uint64_t seed{0};
  // Waypoints of both paths as given to the builder, for the record.
  std::array<std::vector<Vec2>, 2> waypoints;
};

enum class Termination { kSettled, kTimeout, kCollision };
std::string_view to_string(Termination t);

struct AgentSample
{
  double l{0.0};
  double x{0.0};
  double y{0.0};
  double heading{0.0};
  double v{0.0};
  double a{0.0};
  double r{0.0};
};

struct StepRecord
{
  double t{0.0};
  std::array<AgentSample, 2> agents;
  // False once an agent has reached the end of its path and left the scene.
  std::array<bool, 2> active{true, true};
  CandidateId chosen{CandidateId::kOptimized};
  RelationKind relation{RelationKind::kNone};
  bool other_superior{false};
};

struct RunRecord
{
  std::uint64_t seed{0};
  double dt{0.1};
  std::array<PathPtr, 2> paths;
  std::array<VehicleShape, 2> shapes;
  std::array<std::vector<Vec2>, 2> waypoints;
  InteractionZone zone;
  OtherControl control{OtherControl::kFixed};
  bool compliant{true};
  std::vector<StepRecord> steps;
  Termination termination{Termination::kTimeout};
  int optimizer_failures{0};
};

/// Advances a velocity plan by dt: trapezoid over the plan samples.
double advance_distance(const SampledProfile & profile, double dt);

// Called after every ego planning step with the step about to be recorded.
using StepObserver = std::function<void(const StepRecord &, const PlanResult &)>;

/// Closed-loop run of the ego planner against the other agent.
RunRecord simulate(const Scenario & scenario, const StepObserver & observer = {});

}  // namespace ropt

#endif  // ROPT__SIMULATION_HPP_
