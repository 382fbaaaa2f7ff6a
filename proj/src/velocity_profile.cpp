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

#include "ropt/velocity_profile.hpp"

#include <algorithm>
#include <cmath>

namespace ropt
{

double SampledProfile::value_at(std::span<const double> series, double s) const
{
  if (series.empty()) {
    return 0.0;
  }
  const double u = std::max(0.0, s) / step;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= series.size()) {
    return series.back();
  }
  const double t = u - static_cast<double>(i);
  return series[i] + (series[i + 1] - series[i]) * t;
}

double lag_minimum(double a_0, double a_min, double a_max, double brake_lag, double engine_lag)
{
  if (a_0 >= 0.0) {
    return a_0 / a_max * engine_lag;
  }
  return std::abs(a_0 / a_min) * brake_lag;
}

double blend_lag(double v_0, double a_0, double lag, double v_p1, double segment_length, double s)
{
  return v_0 + (lag - s) * a_0 + s / segment_length * (v_p1 - v_0);
}

double snake_ramp(const SnakeParams & p, double s)
{
  double t_prev = 0.0;
  double v_prev = p.v_0;
  for (std::size_t k = 0; k < kSnakeSegments; ++k) {
    const double t_knot = static_cast<double>(k + 1) * p.segment_length - p.offset;
    if (s <= t_knot) {
      const double span = t_knot - t_prev;
      if (span <= 1e-12) {
        return p.v_p[k];
      }
      return v_prev + (p.v_p[k] - v_prev) * (s - t_prev) / span;
    }
    if (t_knot > t_prev) {
      t_prev = t_knot;
      v_prev = p.v_p[k];
    }
  }
  return p.v_p[kSnakeSegments - 1];
}

void apply_lag(std::span<double> v, double step, double v_0, double a_0, double lag, LagBlend blend)
{
  if (!(lag > 0.0)) {
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double s = static_cast<double>(i) * step;
    if (s > lag) {
      break;
    }
    if (blend == LagBlend::kLiteral) {
      v[i] += (lag - s) * a_0;
    } else {
      const double w = s / lag;
      v[i] = (1.0 - w) * (v_0 + a_0 * s) + w * v[i];
    }
  }
}

SampledProfile raw_snake(const SnakeParams & params, double horizon, double step, LagBlend blend)
{
  SampledProfile out;
  out.step = step;
  const auto n = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.v[i] = snake_ramp(params, static_cast<double>(i) * step);
  }
  apply_lag(out.v, step, params.v_0, params.a_0, std::max(0.0, params.lag), blend);
  recompute_derivatives(out);
  return out;
}

void recompute_derivatives(SampledProfile & profile)
{
  auto differentiate = [h = profile.step](const std::vector<double> & f, std::vector<double> & df) {
    const std::size_t n = f.size();
    df.assign(n, 0.0);
    if (n < 2) {
      return;
    }
    df[0] = (f[1] - f[0]) / h;
    df[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
  };
  differentiate(profile.v, profile.a);
  differentiate(profile.a, profile.r);
}

SampledProfile smooth(const SampledProfile & profile, double sigma, std::optional<double> left_slope)
{
  SampledProfile out;
  out.step = profile.step;
  const std::size_t n = profile.v.size();
  if (n == 0 || !(sigma > 0.0)) {
    out.v = profile.v;
    recompute_derivatives(out);
    return out;
  }
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(4.0 * sigma / profile.step));
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double s = static_cast<double>(k) * profile.step;
    const double w = std::exp(-0.5 * s * s / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + half)] = w;
    total += w;
  }
  for (auto & w : kernel) {
    w /= total;
  }

  const auto last = static_cast<std::ptrdiff_t>(n) - 1;
  out.v.assign(n, 0.0);
  for (std::ptrdiff_t i = 0; i <= last; ++i) {
    double acc = 0.0;
    if (i - half >= 0 && i + half <= last) {
      const double * src = profile.v.data() + (i - half);
      for (std::size_t k = 0; k < kernel.size(); ++k) {
        acc += kernel[k] * src[k];
      }
    } else {
      for (std::ptrdiff_t k = -half; k <= half; ++k) {
        const std::ptrdiff_t j = i + k;
        double value = profile.v[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, last))];
        if (j < 0 && left_slope) {
          value += *left_slope * static_cast<double>(j) * profile.step;
        }
        acc += kernel[static_cast<std::size_t>(k + half)] * value;
      }
    }
    out.v[static_cast<std::size_t>(i)] = acc;
  }
  recompute_derivatives(out);
  return out;
}

SnakeParams shift_for_next_cycle(const SnakeParams & params, double dt, double v_0_new)
{
  SnakeParams next = params;
  next.offset += dt;
  next.v_0 = v_0_new;
  while (next.offset >= next.segment_length - 1e-9) {
    for (std::size_t k = 0; k + 1 < kSnakeSegments; ++k) {
      next.v_p[k] = next.v_p[k + 1];
    }
    next.offset -= next.segment_length;
  }
  next.offset = std::max(0.0, next.offset);
  return next;
}

SampledProfile snake_profile(const SnakeParams & params, const ProfileConfig & cfg)
{
  return smooth(raw_snake(params, cfg.horizon, cfg.grid_step, cfg.lag_blend), cfg.smoothing_sigma,
                params.a_0);
}

SampledProfile shape_profile(std::vector<double> raw_v, double v_0, double a_0, double lag,
                             const ProfileConfig & cfg)
{
  SampledProfile raw;
  raw.step = cfg.grid_step;
  raw.v = std::move(raw_v);
  apply_lag(raw.v, raw.step, v_0, a_0, lag, cfg.lag_blend);
  return smooth(raw, cfg.smoothing_sigma, a_0);
}

}  // namespace ropt
