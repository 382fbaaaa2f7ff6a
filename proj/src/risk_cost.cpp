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

#include "ropt/risk_cost.hpp"

#include <algorithm>
#include <cmath>

namespace ropt
{

AgentPrediction predict_along_path(PathPtr path, const VehicleShape & shape, double l_0,
                                   std::span<const double> v, double step)
{
  AgentPrediction out;
  out.path = std::move(path);
  out.shape = shape;
  out.step = step;
  const std::size_t n = v.size();
  out.v.assign(v.begin(), v.end());
  out.l.resize(n);
  out.position.resize(n);
  out.heading.resize(n);
  double l = l_0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      l += 0.5 * (v[k - 1] + v[k]) * step;
    }
    out.l[k] = l;
    out.position[k] = out.path->position(l);
    out.heading[k] = out.path->heading(l);
  }
  return out;
}

double sigma_total(double s, const RateParams & p) { return p.sigma_pos0 + p.sigma_pos_growth * s; }

double collision_rate_from_gap(double gap, double s, const RateParams & p)
{
  const double sigma = sigma_total(s, p);
  const double g = std::max(0.0, gap);
  return p.peak_rate * std::exp(-g * g / (2.0 * sigma * sigma));
}

double footprint_gap(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k)
{
  const Quad a = ego.footprint(k);
  const Quad b = other.footprint(k);
  return convex_distance(a, b);
}

double collision_rate(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k,
                      const RateParams & p)
{
  const double s = static_cast<double>(k) * ego.step;
  const double centre = norm(ego.position[k] - other.position[k]);
  const double lower_bound = centre - ego.shape.circumradius() - other.shape.circumradius();
  // Far apart the rate is below 1e-10 of its peak; the bound is good enough.
  if (lower_bound > 7.0 * sigma_total(s, p)) {
    return collision_rate_from_gap(lower_bound, s, p);
  }
  return collision_rate_from_gap(footprint_gap(ego, other, k), s, p);
}

double curve_rate_from_lateral(double a_y, const RateParams & p)
{
  const double x = (std::abs(a_y) - p.a_y_max) / p.sigma_ay;
  return p.peak_rate / (1.0 + std::exp(-x));
}

double curve_rate(const AgentPrediction & ego, std::size_t k, const RateParams & p)
{
  const double a_y = ego.v[k] * ego.v[k] * ego.path->curvature(ego.l[k]);
  return curve_rate_from_lateral(a_y, p);
}

double collision_damage(double m_ego, double m_other, const Vec2 & v_ego, const Vec2 & v_other,
                        double damage_offset)
{
  const Vec2 dv = v_other - v_ego;
  return damage_offset + m_ego * m_other / (2.0 * (m_ego + m_other)) * dot(dv, dv);
}

double curve_damage(double m_ego, double speed, double damage_offset)
{
  return damage_offset + 0.5 * m_ego * speed * speed;
}

Damages damages(const AgentPrediction & ego, const AgentPrediction & other, std::size_t k,
                double damage_offset)
{
  return {collision_damage(ego.shape.mass, other.shape.mass, ego.velocity(k), other.velocity(k),
                           damage_offset),
          curve_damage(ego.shape.mass, ego.v[k], damage_offset)};
}

std::vector<double> survival(std::span<const double> rate, double step)
{
  std::vector<double> s(rate.size(), 1.0);
  double integral = 0.0;
  for (std::size_t k = 1; k < rate.size(); ++k) {
    integral += 0.5 * (rate[k - 1] + rate[k]) * step;
    s[k] = std::exp(-integral);
  }
  return s;
}

double integrate(std::span<const double> f, double step)
{
  const std::size_t n = f.size() == 0 ? 0 : f.size() - 1;  // intervals
  if (n == 0) {
    return 0.0;
  }
  if (n == 1) {
    return 0.5 * (f[0] + f[1]) * step;
  }
  auto simpson = [&](std::size_t first, std::size_t intervals) {
    double acc = f[first] + f[first + intervals];
    for (std::size_t i = 1; i < intervals; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * f[first + i];
    }
    return acc * step / 3.0;
  };
  if (n % 2 == 0) {
    return simpson(0, n);
  }
  // Odd interval count: Simpson on the first n - 3, 3/8 rule on the rest.
  const std::size_t m = n - 3;
  const double head = m > 0 ? simpson(0, m) : 0.0;
  const double tail = 3.0 * step / 8.0 * (f[m] + 3.0 * f[m + 1] + 3.0 * f[m + 2] + f[m + 3]);
  return head + tail;
}

bool crash_possible(const OtherInteraction & other, double l_ego, double l_other,
                    double half_length_ego, double half_length_other)
{
  if (!other.zone.exists) {
    return false;
  }
  const bool ego_left = l_ego - half_length_ego > other.zone.bounds_1.end;
  const bool other_left = l_other - half_length_other > other.zone.bounds_2.end;
  return !(ego_left || other_left);
}

double crash_weight(const OtherInteraction & other, double l_ego, double l_other,
                    double half_length_ego, double half_length_other, double taper)
{
  if (!other.zone.exists) {
    return 0.0;
  }
  const double margin = std::min(other.zone.bounds_1.end + half_length_ego - l_ego,
                                 other.zone.bounds_2.end + half_length_other - l_other);
  if (margin < 0.0) {
    return 0.0;
  }
  return taper > 0.0 ? std::min(1.0, margin / taper) : 1.0;
}

ScenePrediction predict_scene(const AgentPrediction & ego, std::span<const OtherInteraction> others,
                              const RateParams & p)
{
  const std::size_t n = ego.size();
  ScenePrediction scene;
  scene.step = ego.step;
  scene.total_rate.assign(n, p.escape_rate);
  scene.curve_rate.resize(n);
  scene.curve_damage.resize(n);
  scene.collision_rate.assign(others.size(), std::vector<double>(n, 0.0));
  scene.collision_damage.assign(others.size(), std::vector<double>(n, 0.0));

  for (std::size_t k = 0; k < n; ++k) {
    scene.curve_rate[k] = curve_rate(ego, k, p);
    scene.curve_damage[k] = curve_damage(ego.shape.mass, ego.v[k], p.damage_offset);
    scene.total_rate[k] += scene.curve_rate[k];
  }
  for (std::size_t j = 0; j < others.size(); ++j) {
    const OtherInteraction & o = others[j];
    const AgentPrediction & other = *o.prediction;
    const std::size_t m = std::min(n, other.size());
    for (std::size_t k = 0; k < m; ++k) {
      double weight = crash_weight(o, ego.l[k], other.l[k], 0.5 * ego.shape.length,
                                   0.5 * other.shape.length, p.exclusion_taper);
      if (p.rest_speed > 0.0) {
        weight *= std::min(1.0, (std::abs(ego.v[k]) + std::abs(other.v[k])) / p.rest_speed);
      }
      if (weight <= 0.0) {
        continue;
      }
      double rate = weight * collision_rate(ego, other, k, p);
      if (!o.awareness.empty()) {
        rate *= o.awareness[std::min(k, o.awareness.size() - 1)];
      }
      scene.collision_rate[j][k] = rate;
      scene.collision_damage[j][k] =
        collision_damage(ego.shape.mass, other.shape.mass, ego.velocity(k), other.velocity(k),
                         p.damage_offset);
      scene.total_rate[k] += rate;
    }
  }
  scene.survival = survival(scene.total_rate, scene.step);
  return scene;
}

double risk(const ScenePrediction & scene)
{
  const std::size_t n = scene.size();
  std::vector<double> integrand(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = scene.curve_rate[k] * scene.curve_damage[k];
    for (std::size_t j = 0; j < scene.collision_rate.size(); ++j) {
      acc += scene.collision_rate[j][k] * scene.collision_damage[j][k];
    }
    integrand[k] = acc * scene.survival[k];
  }
  return integrate(integrand, scene.step);
}

double utility(std::span<const double> v, std::span<const double> survival, double step,
               const CostWeights & w)
{
  const double sign = w.deviation_as_penalty ? -1.0 : 1.0;
  const std::size_t n = std::min(v.size(), survival.size());
  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    integrand[k] =
      (w.b_t * std::abs(v[k]) + sign * w.b_d * std::abs(v[k] - w.v_desired)) * survival[k];
  }
  return integrate(integrand, step);
}

double comfort(std::span<const double> a, std::span<const double> r,
               std::span<const double> survival, double step, const CostWeights & w)
{
  const std::size_t n = std::min({a.size(), r.size(), survival.size()});
  std::vector<double> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    integrand[k] = -(w.b_c * std::abs(a[k]) + w.b_j * std::abs(r[k])) * survival[k];
  }
  return integrate(integrand, step);
}

Costs evaluate_profile(const SampledProfile & ego_profile, PathPtr ego_path,
                       const VehicleShape & ego_shape, double ego_l0,
                       std::span<const OtherInteraction> others, const RateParams & p,
                       const CostWeights & w, ScenePrediction * scene_out)
{
  const AgentPrediction ego =
    predict_along_path(std::move(ego_path), ego_shape, ego_l0, ego_profile.v, ego_profile.step);
  ScenePrediction scene = predict_scene(ego, others, p);
  Costs c;
  c.risk = risk(scene);
  c.utility = utility(ego_profile.v, scene.survival, scene.step, w);
  c.comfort = comfort(ego_profile.a, ego_profile.r, scene.survival, scene.step, w);
  c.fitness = fitness(c.risk, c.utility, c.comfort);
  if (scene_out != nullptr) {
    *scene_out = std::move(scene);
  }
  return c;
}

}  // namespace ropt
