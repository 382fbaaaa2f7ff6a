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

#ifndef ROPT__SCENARIO_HPP_
#define ROPT__SCENARIO_HPP_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ropt/simulation.hpp"

namespace ropt
{

enum class FollowingVariant { kOtherInFront, kOtherInBack };
enum class CrossingVariant { kOtherFromRight, kOtherFromLeft };

std::string_view to_string(FollowingVariant v);
std::string_view to_string(CrossingVariant v);
FollowingVariant parse_following_variant(std::string_view name);
CrossingVariant parse_crossing_variant(std::string_view name);

struct FollowingSetup
{
  double d_0{50.0};
  double v_max{20.0};
  double path_length{2500.0};
  double ego_start{100.0};
  double duration{90.0};
};

struct CrossingSetup
{
  double d_i{40.0};
  double v_ego{10.0};
  double v_max{20.0};
  double approach{200.0};
  double exit{800.0};
};

struct RandomSetup
{
  double v_max{8.5};
  double d_i{45.0};
  double angle_jitter_deg{25.0};
  double lane_width_min{2.75};
  double lane_width_max{3.5};
  double v_start_min{3.0};
  double v_start_max{8.5};
  double v_desired_other_min{3.0};
  double v_desired_other_max{10.0};
  double compliance_probability{0.5};
  // Distance of the junction edge from the junction center.
  double edge_radius{12.0};
  double exit_length{80.0};
  double corridor_width{2.5};
  int max_tries{100};
};

/// Same-lane pair at distance d_0, both starting at v_f2; the other replays
/// the maneuver in front of or behind the ego.
Scenario following_scenario(FollowingVariant variant, double v_f2, double a_f2,
                            const FollowingSetup & setup, const EgoConfig & ego, SimConfig sim);

/// Perpendicular crossing; both start d_i before the interaction zone.
Scenario crossing_scenario(CrossingVariant variant, double v_f2, double a_f2,
                           const CrossingSetup & setup, const EgoConfig & ego, SimConfig sim);

struct RandomScenarioSpec
{
  std::uint64_t seed{0};
  // Outward direction of each road [rad] and its lane width [m].
  std::array<double, 4> road_angles{};
  std::array<double, 4> lane_widths{};
  std::array<int, 2> start_road{};
  std::array<int, 2> goal_road{};
  double v_f1{0.0};
  double v_f2{0.0};
  double v_d2{0.0};
  bool compliant{true};
  int tries{0};
};

/// Lane-level waypoints from the start road through the junction to the goal
/// road (right-hand traffic).
std::vector<Vec2> junction_route(const RandomScenarioSpec & spec, const RandomSetup & setup,
                                 int start, int goal);

/// Draws a junction and a pair of routes whose corridors cross. Throws
/// InvalidInput when no such draw is found within max_tries.
RandomScenarioSpec randomize_scenario(std::uint64_t seed, const RandomSetup & setup);

Scenario build_random_scenario(const RandomScenarioSpec & spec, const RandomSetup & setup,
                               const EgoConfig & ego, const ReactiveConfig & reactive,
                               SimConfig sim);

/// Independent per-run seed derived from a master seed.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t index);

}  // namespace ropt

#endif  // ROPT__SCENARIO_HPP_
