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

#include "ropt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ropt
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Linear interpolation of the first time `value(k)` exceeds `threshold`.
template <typename F>
std::optional<double> first_crossing(const RunRecord & record, F value, double threshold)
{
  const auto & steps = record.steps;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double v = value(steps[k]);
    if (v <= threshold) {
      continue;
    }
    if (k == 0) {
      return steps[0].t;
    }
    const double prev = value(steps[k - 1]);
    const double w = (threshold - prev) / (v - prev);
    return steps[k - 1].t + w * (steps[k].t - steps[k - 1].t);
  }
  return std::nullopt;
}

}  // namespace

std::optional<HeadwaySample> time_headway(double l_follower, double l_leader, double v_follower,
                                          double bumper_offset)
{
  if (v_follower < kHeadwayMinSpeed) {
    return std::nullopt;
  }
  HeadwaySample out;
  out.ordered = l_leader >= l_follower;
  out.value = (l_leader - l_follower - bumper_offset) / v_follower;
  return out;
}

std::optional<HeadwaySample> time_headway(const RunRecord & record, std::size_t k)
{
  const auto & s = record.steps.at(k);
  const double offset = 0.5 * (record.shapes[0].length + record.shapes[1].length);
  const AgentSample & ego = s.agents[0];
  const AgentSample & other = s.agents[1];
  if (ego.l <= other.l) {
    return time_headway(ego.l, other.l, ego.v, offset);
  }
  return time_headway(other.l, ego.l, other.v, offset);
}

std::optional<double> stable_headway(const RunRecord & record,
                                     const StableHeadwayOptions & options)
{
  const auto & steps = record.steps;
  // Only the part of the run where both agents are still on the road.
  std::size_t n = 0;
  while (n < steps.size() && steps[n].active[0] && steps[n].active[1]) {
    ++n;
  }
  if (n < 3) {
    return std::nullopt;
  }
  const double dt = record.dt;
  std::vector<double> gap(n);
  for (std::size_t k = 0; k < n; ++k) {
    gap[k] = std::abs(steps[k].agents[1].l - steps[k].agents[0].l);
  }
  std::vector<double> rate(n);
  rate[0] = (gap[1] - gap[0]) / dt;
  rate[n - 1] = (gap[n - 1] - gap[n - 2]) / dt;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    rate[k] = (gap[k + 1] - gap[k - 1]) / (2.0 * dt);
  }

  const auto window = static_cast<std::size_t>(std::llround(options.min_window / dt));
  // Gap still opening at the end: the headway grows without bound.
  if (n > window) {
    const double opening = (gap[n - 1] - gap[n - 1 - window]) / (static_cast<double>(window) * dt);
    if (opening > options.rate_tolerance && rate[n - 1] > 0.0) {
      return kInf;
    }
  }

  // Latest run of stable samples lasting at least the window.
  std::size_t end = n;
  while (end > 0) {
    std::size_t last = end;
    while (last > 0 && std::abs(rate[last - 1]) >= options.rate_tolerance) {
      --last;
    }
    if (last == 0) {
      break;
    }
    std::size_t first = last;
    while (first > 0 && std::abs(rate[first - 1]) < options.rate_tolerance) {
      --first;
    }
    if (last - first > window) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t k = first; k < last; ++k) {
        if (const auto th = time_headway(record, k)) {
          sum += th->value;
          ++count;
        }
      }
      return count == 0 ? kInf : sum / static_cast<double>(count);
    }
    end = first;
  }
  return std::nullopt;
}

PetResult post_encroachment_time(const RunRecord & record)
{
  PetResult out;
  if (!record.zone.exists) {
    out.reason = "no interaction zone";
    return out;
  }
  out.t_ego_exit = first_crossing(
    record, [](const StepRecord & s) { return s.agents[0].l; }, record.zone.bounds_1.end);
  out.t_other_entry = first_crossing(
    record, [](const StepRecord & s) { return s.agents[1].l; }, record.zone.bounds_2.start);
  if (!out.t_other_entry) {
    out.reason = "no encroachment";
  } else if (!out.t_ego_exit) {
    out.reason = "ego never left the zone";
  } else {
    out.value = post_encroachment_time(*out.t_ego_exit, *out.t_other_entry);
  }
  return out;
}

bool swept_overlap(const SweptAgent & a, const SweptAgent & b, double horizon, double sample_step)
{
  auto range = [horizon](const SweptAgent & s) {
    const double reach = 0.5 * s.shape.length + 0.5 * s.v * horizon;
    return std::pair{std::max(0.0, s.l - reach), std::min(s.path->length(), s.l + reach)};
  };
  const auto [a0, a1] = range(a);
  const auto [b0, b1] = range(b);
  return corridors_overlap(*a.path, a.shape.width, a0, a1, *b.path, b.shape.width, b0, b1,
                           sample_step);
}

namespace
{

// Smallest T in [0, hi] with overlap, given overlap at hi.
double bisect_overlap(const SweptAgent & a, const SweptAgent & b, double hi,
                      const Th2dOptions & options)
{
  if (swept_overlap(a, b, 0.0, options.sample_step)) {
    return 0.0;
  }
  double lo = 0.0;
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (swept_overlap(a, b, mid, options.sample_step)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

std::optional<double> th_2d(const SweptAgent & a, const SweptAgent & b,
                            const Th2dOptions & options)
{
  if (!swept_overlap(a, b, options.cap, options.sample_step)) {
    return std::nullopt;
  }
  return bisect_overlap(a, b, options.cap, options);
}

std::optional<double> th_2d(const RunRecord & record, const Th2dOptions & options)
{
  if (record.termination == Termination::kCollision) {
    return 0.0;
  }
  std::optional<double> best;
  for (const auto & s : record.steps) {
    if (!s.active[0] || !s.active[1]) {
      continue;
    }
    const SweptAgent a{record.paths[0].get(), s.agents[0].l, s.agents[0].v, record.shapes[0]};
    const SweptAgent b{record.paths[1].get(), s.agents[1].l, s.agents[1].v, record.shapes[1]};
    // Overlap is monotone in T, so only steps that beat the best so far matter.
    const double bound = best.value_or(options.cap);
    if (!swept_overlap(a, b, bound, options.sample_step)) {
      continue;
    }
    best = bisect_overlap(a, b, bound, options);
    if (*best == 0.0) {
      break;
    }
  }
  return best;
}

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window)
{
  const std::size_t n = series.size();
  std::vector<double> out(n);
  const std::size_t half = window / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n - 1, k + (window - 1 - half));
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      sum += series[j];
    }
    out[k] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double max_filtered_jerk(std::span<const double> jerk, double dt, double window_time)
{
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window_time / dt)));
  double peak = 0.0;
  for (const double r : rolling_mean(jerk, window)) {
    peak = std::max(peak, std::abs(r));
  }
  return peak;
}

double max_filtered_jerk(const RunRecord & record, double window_time)
{
  std::vector<double> jerk;
  jerk.reserve(record.steps.size());
  for (const auto & s : record.steps) {
    jerk.push_back(s.agents[0].r);
  }
  return max_filtered_jerk(jerk, record.dt, window_time);
}

IndicatorSet compute_indicators(const RunRecord & record, const IndicatorOptions & options)
{
  IndicatorSet out;
  out.collision = record.termination == Termination::kCollision;
  if (!record.steps.empty()) {
    out.v_low = kInf;
    out.v_up = -kInf;
    for (const auto & s : record.steps) {
      out.v_low = std::min(out.v_low, s.agents[0].v);
      out.v_up = std::max(out.v_up, s.agents[0].v);
    }
  }
  const bool same_path = record.paths[0] == record.paths[1];
  if (options.headway && same_path) {
    out.th_stable = stable_headway(record, options.stable);
  }
  if (options.encroachment && !same_path) {
    out.pet = post_encroachment_time(record);
  } else {
    out.pet.reason = "not a crossing";
  }
  if (options.two_d_headway) {
    out.th_2d = th_2d(record, options.th2d);
  }
  out.r_max = max_filtered_jerk(record, options.jerk_window);
  return out;
}

}  // namespace ropt
