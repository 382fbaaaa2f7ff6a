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

#ifndef ROPT__PRIORITY_HPP_
#define ROPT__PRIORITY_HPP_

#include <string_view>
#include <vector>

#include "ropt/geometry.hpp"

namespace ropt
{

enum class RelationKind {
  kNone,
  kLongitudinalFront,
  kLongitudinalBack,
  kLateralRight,
  kLateralLeft,
};

std::string_view to_string(RelationKind kind);

constexpr bool is_longitudinal(RelationKind k)
{
  return k == RelationKind::kLongitudinalFront || k == RelationKind::kLongitudinalBack;
}
constexpr bool is_lateral(RelationKind k)
{
  return k == RelationKind::kLateralRight || k == RelationKind::kLateralLeft;
}

enum class RuleConvention { kRightBeforeLeft, kLeftBeforeRight };

/// Parses "right_before_left" / "left_before_right".
RuleConvention parse_convention(std::string_view name);
std::string_view to_string(RuleConvention c);

// Relation of the other agent as seen from the ego. `superior` means the other
// holds the right of way.
struct PriorityRelation
{
  RelationKind kind{RelationKind::kNone};
  bool superior{false};
  InteractionZone zone;
};

struct AgentOnPath
{
  const Path * path{nullptr};
  double l{0.0};
};

struct ClassifyOptions
{
  RuleConvention convention{RuleConvention::kRightBeforeLeft};
  // Heading differences closer than this to 0 or pi count as longitudinal.
  double angular_tolerance{0.15};
};

/// True when both paths continue together to their ends past the zone (same
/// path, or a merge).
bool shares_lane(const Path & ego_path, const Path & other_path, const InteractionZone & zone,
                 double angular_tolerance);

PriorityRelation classify(const AgentOnPath & ego, const AgentOnPath & other,
                          const InteractionZone & zone, const ClassifyOptions & options = {});

struct AwarenessParams
{
  double k_lon{2.0};
  double s_lon{3.0};
  double k_lat{3.0};
  double s_lat{4.0};
};

/// Discount on the collision rate of an inferior other at prediction time s.
/// Decreases from ~1 to ~0 with value 1/2 at the midpoint; 1 for superior
/// others and unrelated agents.
double awareness(double s, const PriorityRelation & relation, const AwarenessParams & p);
std::vector<double> awareness_curve(const PriorityRelation & relation, const AwarenessParams & p,
                                    double horizon, double step);

struct PatternParams
{
  double s_0{1.0};
  double s_a{4.0};
  double a_max{2.0};
  double s_d{6.0};
  double a_d{-2.0};
};

/// Unclipped priority-conditioned velocity pattern of the other agent.
double pattern_velocity(double v_0, const PriorityRelation & relation, const PatternParams & p,
                        double v_max, double s);

/// Pattern sampled on [0, horizon], clipped to [0, min(v_c(s), v_max)] where
/// v_c(s) is `curve_velocity` sampled on the same grid.
std::vector<double> predict_other(double v_0, const PriorityRelation & relation,
                                  const PatternParams & p, double v_max,
                                  std::span<const double> curve_velocity, double horizon,
                                  double step);

/// As above, with the curve velocity taken along the other's own predicted
/// progress on its path.
std::vector<double> predict_other_on_path(double v_0, const PriorityRelation & relation,
                                          const PatternParams & p, double v_max,
                                          const Path & path, double l_0, double a_y_max,
                                          double horizon, double step);

}  // namespace ropt

#endif  // ROPT__PRIORITY_HPP_
