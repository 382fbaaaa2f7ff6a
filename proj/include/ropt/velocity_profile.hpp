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

#ifndef ROPT__VELOCITY_PROFILE_HPP_
#define ROPT__VELOCITY_PROFILE_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ropt
{

inline constexpr std::size_t kSnakeSegments = 4;

// The "snake": four ramps of fixed duration with free end velocities, plus an
// initial lag during which the current acceleration is carried over.
//
// Knot k (k = 1..4) sits at time k * segment_length - offset relative to now;
// knot 0 is the current state (time 0, velocity v_0). Past the last knot the
// velocity is held at v_p[3].
struct SnakeParams
{
  std::array<double, kSnakeSegments> v_p{};
  double lag{0.0};
  double v_0{0.0};
  double a_0{0.0};
  double offset{0.0};
  double segment_length{2.5};

  static SnakeParams constant(double v, double segment_length = 2.5)
  {
    SnakeParams p;
    p.v_p = {v, v, v, v};
    p.v_0 = v;
    p.segment_length = segment_length;
    return p;
  }
};

// How the lag window [0, lag] is shaped.
enum class LagBlend {
  // v(s) = ramp(s) + (lag - s) * a_0, i.e. the printed blend taken as is.
  kLiteral,
  // v(s) = (1 - w) * (v_0 + a_0 s) + w * ramp(s), w = s / lag: the carried-over
  // acceleration line fades into the ramp, so v(0) = v_0 and v'(0) = a_0.
  kFaded,
};

struct ProfileConfig
{
  double horizon{10.0};        // s_h
  double grid_step{0.05};      // ds
  double smoothing_sigma{0.3}; // sigma_s
  LagBlend lag_blend{LagBlend::kFaded};
};

// Velocity with its numeric derivatives on a uniform time grid starting at 0.
struct SampledProfile
{
  double step{0.05};
  std::vector<double> v;
  std::vector<double> a;
  std::vector<double> r;

  std::size_t size() const { return v.size(); }
  double horizon() const { return step * static_cast<double>(v.empty() ? 0 : v.size() - 1); }
  /// Linear interpolation of a series at time s (clamped to the grid).
  double value_at(std::span<const double> series, double s) const;
  double v_at(double s) const { return value_at(v, s); }
  double a_at(double s) const { return value_at(a, s); }
  double r_at(double s) const { return value_at(r, s); }
};

/// Shortest admissible lag for the current acceleration: brake lag scaled by
/// a_0 / a_min when decelerating, engine lag scaled by a_0 / a_max otherwise.
double lag_minimum(double a_0, double a_min, double a_max, double brake_lag = 0.4,
                   double engine_lag = 0.8);

/// The printed lag blend on the first ramp:
/// v(s) = v_0 + (lag - s) a_0 + (s / segment_length) (v_p1 - v_0).
double blend_lag(double v_0, double a_0, double lag, double v_p1, double segment_length,
                 double s);

/// Raw (unsmoothed) knot interpolation of the snake at time s, ignoring lag.
double snake_ramp(const SnakeParams & params, double s);

/// Raw snake sampled on [0, horizon] with the lag window applied.
SampledProfile raw_snake(const SnakeParams & params, double horizon, double step,
                         LagBlend blend = LagBlend::kFaded);

/// Applies the lag window of `blend` to an arbitrary raw velocity curve in place.
void apply_lag(std::span<double> v, double step, double v_0, double a_0, double lag,
               LagBlend blend);

/// Central-difference a and r from v (one-sided at the ends).
void recompute_derivatives(SampledProfile & profile);

/// Gaussian convolution of v (kernel truncated at 4 sigma and renormalised,
/// edge samples replicated), followed by recomputed derivatives. With
/// `left_slope` the samples before s = 0 continue the first sample with that
/// slope instead, i.e. the recent past of a vehicle accelerating at it.
SampledProfile smooth(const SampledProfile & profile, double sigma,
                      std::optional<double> left_slope = std::nullopt);

/// Warm start for the next planning cycle: shifts the knots by dt and resets
/// the current velocity. Once the first knot has passed, the knots roll over.
SnakeParams shift_for_next_cycle(const SnakeParams & params, double dt, double v_0_new);

/// raw_snake followed by smooth, as used for planning.
SampledProfile snake_profile(const SnakeParams & params, const ProfileConfig & cfg);

/// Any raw velocity curve lagged and smoothed the same way as snake profiles.
SampledProfile shape_profile(std::vector<double> raw_v, double v_0, double a_0, double lag,
                             const ProfileConfig & cfg);

}  // namespace ropt

#endif  // ROPT__VELOCITY_PROFILE_HPP_
