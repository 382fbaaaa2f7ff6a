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

#include "ropt/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ropt
{

std::string_view to_string(FollowingVariant v)
{
  return v == FollowingVariant::kOtherInFront ? "other-in-front" : "other-in-back";
}

std::string_view to_string(CrossingVariant v)
{
  return v == CrossingVariant::kOtherFromRight ? "other-from-right" : "other-from-left";
}

FollowingVariant parse_following_variant(std::string_view name)
{
  if (name == "other-in-front") {
    return FollowingVariant::kOtherInFront;
  }
  if (name == "other-in-back") {
    return FollowingVariant::kOtherInBack;
  }
  throw InvalidInput("unknown following variant: " + std::string(name));
}

CrossingVariant parse_crossing_variant(std::string_view name)
{
  if (name == "other-from-right") {
    return CrossingVariant::kOtherFromRight;
  }
  if (name == "other-from-left") {
    return CrossingVariant::kOtherFromLeft;
  }
  throw InvalidInput("unknown crossing variant: " + std::string(name));
}

Scenario following_scenario(FollowingVariant variant, double v_f2, double a_f2,
                            const FollowingSetup & setup, const EgoConfig & ego, SimConfig sim)
{
  Scenario sc;
  const std::vector<Vec2> lane{{0.0, 0.0}, {setup.path_length, 0.0}};
  const PathPtr path = make_path(lane);
  sc.waypoints = {lane, lane};

  sc.ego_config = ego;
  sc.ego_config.optimizer.v_max = setup.v_max;
  sc.ego_config.weights.v_desired = v_f2;
  sc.ego = AgentState{path, VehicleShape{}, setup.ego_start, v_f2};
  const double other_l = variant == FollowingVariant::kOtherInFront
                           ? setup.ego_start + setup.d_0
                           : setup.ego_start - setup.d_0;
  sc.other = AgentState{path, VehicleShape{}, other_l, v_f2};
  sc.control = OtherControl::kFixed;
  sc.maneuver = FixedManeuver{v_f2, a_f2};
  sim.fixed_duration = true;
  sim.t_max = setup.duration;
  sc.sim = sim;
  return sc;
}

Scenario crossing_scenario(CrossingVariant variant, double v_f2, double a_f2,
                           const CrossingSetup & setup, const EgoConfig & ego, SimConfig sim)
{
  Scenario sc;
  // The ego drives east; south of it is its right-hand side.
  const std::vector<Vec2> ego_lane{{-setup.approach, 0.0}, {setup.exit, 0.0}};
  const std::vector<Vec2> other_lane =
    variant == CrossingVariant::kOtherFromRight
      ? std::vector<Vec2>{{0.0, -setup.approach}, {0.0, setup.exit}}
      : std::vector<Vec2>{{0.0, setup.approach}, {0.0, -setup.exit}};
  const PathPtr ego_path = make_path(ego_lane);
  const PathPtr other_path = make_path(other_lane);
  sc.waypoints = {ego_lane, other_lane};

  const InteractionZone zone = interaction_zone(Corridor(ego_path, sim.corridor_width),
                                                Corridor(other_path, sim.corridor_width));
  sc.ego_config = ego;
  sc.ego_config.optimizer.v_max = setup.v_max;
  sc.ego_config.weights.v_desired = setup.v_ego;
  sc.ego = AgentState{ego_path, VehicleShape{}, zone.bounds_1.start - setup.d_i, setup.v_ego};
  sc.other = AgentState{other_path, VehicleShape{}, zone.bounds_2.start - setup.d_i, v_f2};
  sc.control = OtherControl::kFixed;
  sc.maneuver = FixedManeuver{v_f2, a_f2};
  sc.sim = sim;
  return sc;
}

std::vector<Vec2> junction_route(const RandomScenarioSpec & spec, const RandomSetup & setup,
                                 int start, int goal)
{
  const auto s = static_cast<std::size_t>(start);
  const auto g = static_cast<std::size_t>(goal);
  const Vec2 u_s = unit_from_angle(spec.road_angles[s]);
  const Vec2 u_g = unit_from_angle(spec.road_angles[g]);
  // Inbound lanes lie left of the outward direction, outbound lanes right.
  const Vec2 in_offset = left_normal(u_s) * (0.5 * spec.lane_widths[s]);
  const Vec2 out_offset = left_normal(u_g) * (-0.5 * spec.lane_widths[g]);
  const double r = setup.edge_radius;

  const Vec2 entry = u_s * r + in_offset;
  const Vec2 exit = u_g * r + out_offset;
  std::vector<Vec2> route{u_s * (r + setup.d_i) + in_offset, entry};

  // Cubic Hermite through the junction, tangent to both lanes.
  const double chord = norm(exit - entry);
  const Vec2 m0 = -u_s * chord;
  const Vec2 m1 = u_g * chord;
  constexpr int kPieces = 32;
  for (int i = 1; i < kPieces; ++i) {
    const double t = static_cast<double>(i) / kPieces;
    const double t2 = t * t;
    const double t3 = t2 * t;
    route.push_back(entry * (2 * t3 - 3 * t2 + 1) + m0 * (t3 - 2 * t2 + t) +
                    exit * (-2 * t3 + 3 * t2) + m1 * (t3 - t2));
  }
  route.push_back(exit);
  route.push_back(u_g * (r + setup.exit_length) + out_offset);
  return route;
}

RandomScenarioSpec randomize_scenario(std::uint64_t seed, const RandomSetup & setup)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto pick = [&](int n) { return static_cast<int>(unit(rng) * n) % n; };
  const double jitter = setup.angle_jitter_deg * kPi / 180.0;

  for (int attempt = 1; attempt <= setup.max_tries; ++attempt) {
    RandomScenarioSpec spec;
    spec.seed = seed;
    spec.tries = attempt;
    for (std::size_t k = 0; k < 4; ++k) {
      spec.road_angles[k] = static_cast<double>(k) * 0.5 * kPi + uniform(-jitter, jitter);
      spec.lane_widths[k] = uniform(setup.lane_width_min, setup.lane_width_max);
    }
    spec.start_road[0] = pick(4);
    spec.start_road[1] = (spec.start_road[0] + 1 + pick(3)) % 4;
    for (std::size_t i = 0; i < 2; ++i) {
      spec.goal_road[i] = (spec.start_road[i] + 1 + pick(3)) % 4;
    }
    spec.v_f1 = uniform(setup.v_start_min, setup.v_start_max);
    spec.v_f2 = uniform(setup.v_start_min, setup.v_start_max);
    spec.v_d2 = uniform(setup.v_desired_other_min, setup.v_desired_other_max);
    spec.compliant = unit(rng) < setup.compliance_probability;

    const auto route_1 = junction_route(spec, setup, spec.start_road[0], spec.goal_road[0]);
    const auto route_2 = junction_route(spec, setup, spec.start_road[1], spec.goal_road[1]);
    const PathPtr p1 = make_path(route_1);
    const PathPtr p2 = make_path(route_2);
    const InteractionZone zone = interaction_zone(Corridor(p1, setup.corridor_width),
                                                  Corridor(p2, setup.corridor_width));
    if (!zone.exists || zone.bounds_1.start <= 0.0 || zone.bounds_2.start <= 0.0) {
      continue;
    }
    if (!is_lateral(classify({p1.get(), 0.0}, {p2.get(), 0.0}, zone).kind)) {
      continue;
    }
    return spec;
  }
  throw InvalidInput("randomize_scenario: no crossing routes after " +
                     std::to_string(setup.max_tries) + " draws");
}

Scenario build_random_scenario(const RandomScenarioSpec & spec, const RandomSetup & setup,
                               const EgoConfig & ego, const ReactiveConfig & reactive,
                               SimConfig sim)
{
  Scenario sc;
  sc.seed = spec.seed;
  sc.waypoints = {junction_route(spec, setup, spec.start_road[0], spec.goal_road[0]),
                  junction_route(spec, setup, spec.start_road[1], spec.goal_road[1])};
  sc.ego_config = ego;
  sc.ego_config.optimizer.v_max = setup.v_max;
  sc.ego_config.weights.v_desired = setup.v_max;
  sc.ego = AgentState{make_path(sc.waypoints[0]), VehicleShape{}, 0.0, spec.v_f1};
  sc.other = AgentState{make_path(sc.waypoints[1]), VehicleShape{}, 0.0, spec.v_f2};
  sc.control = OtherControl::kReactive;
  sc.reactive = reactive;
  sc.reactive.compliant = spec.compliant;
  sc.reactive.weights.v_desired = spec.v_d2;
  sim.corridor_width = setup.corridor_width;
  sc.sim = sim;
  return sc;
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t index)
{
  // splitmix64 finaliser over the combined state.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ropt
