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

#ifndef ROPT__RISK_COST_HPP_
#define ROPT__RISK_COST_HPP_

#include <span>
#include <vector>

#include "ropt/geometry.hpp"
#include "ropt/velocity_profile.hpp"

namespace ropt
{

struct VehicleShape
{
  double length{4.5};
  double width{1.8};
  double mass{1500.0};

  /// Radius of the circle circumscribing the footprint.
  double circumradius() const { return 0.5 * std::hypot(length, width); }
};

// Event-rate model. Collision rates use a Gaussian of the footprint gap whose
// spread grows linearly over the prediction; the curve rate is a logistic in
// the lateral acceleration excess.
struct RateParams
{
  double escape_rate{0.05};       // tau_0 [1/s]
  double peak_rate{1.0};          // [1/s]
  double sigma_pos0{1.0};         // [m]
  double sigma_pos_growth{1.0};   // [m/s]
  double a_y_max{3.0};            // [m/s^2]
  double sigma_ay{0.25};          // [m/s^2]
  double damage_offset{20000.0};  // D_0
  // Distance over which the collision rate fades out while a footprint clears
  // its part of the interaction zone.
  double exclusion_taper{2.0};  // [m]
  // Two vehicles that both stand still cannot close their gap. The rate fades
  // out below this combined speed.
  double rest_speed{0.1};  // [m/s]
};

struct CostWeights
{
  double b_t{50.0};
  double b_d{150.0};
  double b_c{100.0};
  double b_j{100.0};
  double v_desired{10.0};
  // Deviation from v_desired lowers the utility when true, raises it otherwise.
  bool deviation_as_penalty{true};
};

// Predicted motion of one agent on the common prediction grid.
struct AgentPrediction
{
  PathPtr path;
  VehicleShape shape;
  double step{0.05};
  std::vector<double> l;
  std::vector<double> v;
  std::vector<Vec2> position;
  std::vector<double> heading;

  std::size_t size() const { return v.size(); }
  Vec2 velocity(std::size_t k) const { return unit_from_angle(heading[k]) * v[k]; }
  Quad footprint(std::size_t k) const
  {
    return oriented_box(position[k], heading[k], shape.length, shape.width);
  }
};

/// Integrates v (trapezoid) from l_0 along the path and fills the poses.
AgentPrediction predict_along_path(PathPtr path, const VehicleShape & shape, double l_0,
                                   std::span<const double> v, double step);

double sigma_total(double s, const RateParams & p);
double collision_rate_from_gap(double gap, double s, const RateParams & p);
/// Gap between footprints at grid index k (zero when overlapping).
double footprint_gap(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k);
double collision_rate(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k,
                      const RateParams & p);

double curve_rate_from_lateral(double a_y, const RateParams & p);
double curve_rate(const AgentPrediction & ego, std::size_t k, const RateParams & p);

struct Damages
{
  double collision{0.0};
  double curve{0.0};
};

/// Reduced-mass collision damage and kinetic curve damage at grid index k.
Damages damages(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k,
                double damage_offset);
double collision_damage(double m_ego, double m_other, const Vec2 & v_ego, const Vec2 & v_other,
                        double damage_offset);
double curve_damage(double m_ego, double speed, double damage_offset);

/// exp(-cumulative trapezoid of rate); S[0] = 1.
std::vector<double> survival(std::span<const double> rate, double step);

/// Composite Simpson quadrature of uniformly sampled f (3/8 rule closes odd
/// interval counts, trapezoid for a single interval).
double integrate(std::span<const double> f, double step);

// Per-other conditioning supplied by the priority layer.
struct OtherInteraction
{
  const AgentPrediction * prediction{nullptr};
  std::vector<double> awareness;  // empty means no discount
  InteractionZone zone;           // bounds_1 on the ego path, bounds_2 on the other's
};

/// A crash is kinematically excluded when the paths share no interaction zone,
/// or when either footprint has fully left its part of the zone.
bool crash_possible(const OtherInteraction & other, double l_ego, double l_other,
                    double half_length_ego, double half_length_other);

/// Factor in [0, 1] on the collision rate: 1 while a crash is possible, falling
/// linearly to 0 over the last `taper` metres before either footprint has left
/// the zone.
double crash_weight(const OtherInteraction & other, double l_ego, double l_other,
                    double half_length_ego, double half_length_other, double taper);

struct ScenePrediction
{
  double step{0.05};
  std::vector<double> total_rate;
  std::vector<double> curve_rate;
  std::vector<double> curve_damage;
  std::vector<double> survival;
  std::vector<std::vector<double>> collision_rate;    // per other, awareness applied
  std::vector<std::vector<double>> collision_damage;  // per other

  std::size_t size() const { return total_rate.size(); }
};

ScenePrediction predict_scene(const AgentPrediction & ego, std::span<const OtherInteraction> others,
                              const RateParams & p);

/// Rate-weighted damage integrated against the stored survival curve.
double risk(const ScenePrediction & scene);
double utility(std::span<const double> v, std::span<const double> survival, double step,
               const CostWeights & w);
/// Always <= 0.
double comfort(std::span<const double> a, std::span<const double> r,
               std::span<const double> survival, double step, const CostWeights & w);
inline double fitness(double risk, double utility, double comfort)
{
  return risk - utility - comfort;
}

struct Costs
{
  double risk{0.0};
  double utility{0.0};
  double comfort{0.0};
  double fitness{0.0};
};

/// Full evaluation of one ego velocity profile against frozen predictions of
/// the others. Optionally exposes the intermediate scene.
Costs evaluate_profile(const SampledProfile & ego_profile, PathPtr ego_path,
                       const VehicleShape & ego_shape, double ego_l0,
                       std::span<const OtherInteraction> others, const RateParams & p,
                       const CostWeights & w, ScenePrediction * scene_out = nullptr);

}  // namespace ropt

#endif  // ROPT__RISK_COST_HPP_
