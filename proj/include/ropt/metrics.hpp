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

#ifndef ROPT__METRICS_HPP_
#define ROPT__METRICS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ropt/simulation.hpp"

namespace ropt
{

// Below this follower speed the headway is undefined.
inline constexpr double kHeadwayMinSpeed = 0.1;

struct HeadwaySample
{
  double value{0.0};
  // False when the "leader" is actually behind the follower (negative gap).
  bool ordered{true};
};

/// Bumper-to-bumper headway: (l_leader - l_follower - bumper_offset) / v.
std::optional<HeadwaySample> time_headway(double l_follower, double l_leader, double v_follower,
                                          double bumper_offset);

/// Headway at step k of a same-path record; the rear agent is the follower.
std::optional<HeadwaySample> time_headway(const RunRecord & record, std::size_t k);

struct StableHeadwayOptions
{
  double rate_tolerance{0.05};  // |d gap / dt| [m/s]
  double min_window{2.0};       // [s]
};

/// Mean headway over the last window of constant gap. +infinity when the gap
/// is still opening at the end or the follower stands still in that window;
/// empty when the gap never settles.
std::optional<double> stable_headway(const RunRecord & record,
                                     const StableHeadwayOptions & options = {});

struct PetResult
{
  std::optional<double> value;
  std::string reason;  // why the value is absent
  std::optional<double> t_ego_exit;
  std::optional<double> t_other_entry;
};

inline double post_encroachment_time(double t_ego_exit, double t_other_entry)
{
  return -(t_ego_exit - t_other_entry);
}

/// Ego leaves the zone when its center passes I_e1; the other encroaches when
/// its center passes I_s2.
PetResult post_encroachment_time(const RunRecord & record);

struct SweptAgent
{
  const Path * path{nullptr};
  double l{0.0};
  double v{0.0};
  VehicleShape shape;
};

struct Th2dOptions
{
  double cap{20.0};
  double tolerance{0.01};
  double sample_step{0.25};
};

/// True when both footprints, stretched by v*T/2 forwards and backwards along
/// their paths, intersect.
bool swept_overlap(const SweptAgent & a, const SweptAgent & b, double horizon,
                   double sample_step);

/// Smallest extrapolation time at which the swept shapes meet (bisection).
/// Empty when they stay apart up to the cap.
std::optional<double> th_2d(const SweptAgent & a, const SweptAgent & b,
                            const Th2dOptions & options = {});

/// Minimum of th_2d over the steps of a record where both agents are active;
/// zero for a run that ended in a collision.
std::optional<double> th_2d(const RunRecord & record, const Th2dOptions & options = {});

/// Centered rolling mean with the window truncated at the ends.
std::vector<double> rolling_mean(std::span<const double> series, std::size_t window);

/// Peak |ego jerk| after a centered rolling mean over `window_time`.
double max_filtered_jerk(const RunRecord & record, double window_time = 0.5);
double max_filtered_jerk(std::span<const double> jerk, double dt, double window_time = 0.5);

struct IndicatorSet
{
  std::optional<double> th_stable;
  PetResult pet;
  double v_low{0.0};
  double v_up{0.0};
  std::optional<double> th_2d;
  double r_max{0.0};
  bool collision{false};
};

struct IndicatorOptions
{
  bool headway{true};
  bool encroachment{true};
  bool two_d_headway{true};
  StableHeadwayOptions stable;
  Th2dOptions th2d;
  double jerk_window{0.5};
};

IndicatorSet compute_indicators(const RunRecord & record, const IndicatorOptions & options = {});

}  // namespace ropt

#endif  // ROPT__METRICS_HPP_
