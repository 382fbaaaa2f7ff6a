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

#include "ropt/priority.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ropt
{

std::string_view to_string(RelationKind kind)
{
  switch (kind) {
    case RelationKind::kNone:
      return "none";
    case RelationKind::kLongitudinalFront:
      return "front";
    case RelationKind::kLongitudinalBack:
      return "back";
    case RelationKind::kLateralRight:
      return "right";
    case RelationKind::kLateralLeft:
      return "left";
  }
  return "none";
}

RuleConvention parse_convention(std::string_view name)
{
  if (name == "right_before_left") {
    return RuleConvention::kRightBeforeLeft;
  }
  if (name == "left_before_right") {
    return RuleConvention::kLeftBeforeRight;
  }
  throw InvalidInput("unknown rule convention: " + std::string(name));
}

std::string_view to_string(RuleConvention c)
{
  return c == RuleConvention::kRightBeforeLeft ? "right_before_left" : "left_before_right";
}

bool shares_lane(const Path & ego_path, const Path & other_path, const InteractionZone & zone,
                 double angular_tolerance)
{
  if (&ego_path == &other_path) {
    return true;
  }
  if (!zone.exists) {
    return false;
  }
  constexpr double kEndSlack = 1.0;
  if (zone.bounds_1.end < ego_path.length() - kEndSlack ||
      zone.bounds_2.end < other_path.length() - kEndSlack) {
    return false;
  }
  const double diff = wrap_pi(ego_path.heading(zone.bounds_1.end) -
                              other_path.heading(zone.bounds_2.end));
  return std::abs(diff) < angular_tolerance;
}

PriorityRelation classify(const AgentOnPath & ego, const AgentOnPath & other,
                          const InteractionZone & zone, const ClassifyOptions & options)
{
  PriorityRelation rel;
  rel.zone = zone;
  if (!zone.exists || ego.path == nullptr || other.path == nullptr) {
    return rel;
  }
  const bool ego_inside = zone.bounds_1.contains(ego.l);
  const bool other_inside = zone.bounds_2.contains(other.l);

  const Vec2 t1 = ego.path->tangent(zone.bounds_1.start);
  const Vec2 t2 = other.path->tangent(zone.bounds_2.start);
  const double diff = std::abs(wrap_pi(ego.path->heading(zone.bounds_1.start) -
                                       other.path->heading(zone.bounds_2.start)));
  const bool degenerate =
    diff < options.angular_tolerance || diff > kPi - options.angular_tolerance;
  const bool shared = shares_lane(*ego.path, *other.path, zone, options.angular_tolerance);

  if ((ego_inside && other_inside) || (shared && (ego_inside || other_inside)) || degenerate) {
    const double ego_progress = ego.l - zone.bounds_1.start;
    const double other_progress = other.l - zone.bounds_2.start;
    if (other_progress > ego_progress) {
      rel.kind = RelationKind::kLongitudinalFront;
      rel.superior = true;
    } else {
      rel.kind = RelationKind::kLongitudinalBack;
      rel.superior = false;
    }
    return rel;
  }

  // Positive when the other crosses from the ego's right-hand side.
  const bool right = cross(t1, t2) > 0.0;
  rel.kind = right ? RelationKind::kLateralRight : RelationKind::kLateralLeft;
  rel.superior = options.convention == RuleConvention::kRightBeforeLeft ? right : !right;
  return rel;
}

double awareness(double s, const PriorityRelation & relation, const AwarenessParams & p)
{
  if (relation.superior || relation.kind == RelationKind::kNone) {
    return 1.0;
  }
  const bool lateral = is_lateral(relation.kind);
  const double k = lateral ? p.k_lat : p.k_lon;
  const double mid = lateral ? p.s_lat : p.s_lon;
  return 1.0 / (1.0 + std::exp(k * (s - mid)));
}

std::vector<double> awareness_curve(const PriorityRelation & relation, const AwarenessParams & p,
                                    double horizon, double step)
{
  const auto n = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = awareness(static_cast<double>(k) * step, relation, p);
  }
  return out;
}

double pattern_velocity(double v_0, const PriorityRelation & relation, const PatternParams & p,
                        double v_max, double s)
{
  if (!is_lateral(relation.kind)) {
    return v_0;
  }
  if (s < p.s_0) {
    return v_0;
  }
  if (relation.superior) {
    const double a_a = v_max > 0.0 ? p.a_max * std::max(0.0, 1.0 - v_0 / v_max) : 0.0;
    return v_0 + a_a * (std::min(s, p.s_a) - p.s_0);
  }
  return v_0 + p.a_d * (std::min(s, p.s_d) - p.s_0);
}

std::vector<double> predict_other(double v_0, const PriorityRelation & relation,
                                  const PatternParams & p, double v_max,
                                  std::span<const double> curve_velocity, double horizon,
                                  double step)
{
  const auto n = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double value = pattern_velocity(v_0, relation, p, v_max, static_cast<double>(k) * step);
    value = std::max(value, 0.0);
    const double v_c = curve_velocity.empty()
                         ? v_max
                         : curve_velocity[std::min(k, curve_velocity.size() - 1)];
    v[k] = std::min({value, v_c, v_max});
  }
  return v;
}

std::vector<double> predict_other_on_path(double v_0, const PriorityRelation & relation,
                                          const PatternParams & p, double v_max,
                                          const Path & path, double l_0, double a_y_max,
                                          double horizon, double step)
{
  const auto n = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
  std::vector<double> v(n);
  double l = l_0;
  for (std::size_t k = 0; k < n; ++k) {
    double value = pattern_velocity(v_0, relation, p, v_max, static_cast<double>(k) * step);
    value = std::max(value, 0.0);
    const double v_c = max_curve_velocity(path, l, a_y_max, v_max);
    v[k] = std::min({value, v_c, v_max});
    l += v[k] * step;
  }
  return v;
}

}  // namespace ropt
