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

#include "ropt/geometry.hpp"

#include <algorithm>
#include <limits>

namespace ropt
{

double wrap_two_pi(double angle)
{
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) {
    a += kTwoPi;
  }
  return a >= kTwoPi ? 0.0 : a;
}

double wrap_pi(double angle)
{
  double a = wrap_two_pi(angle);
  return a > kPi ? a - kTwoPi : a;
}

Path::Path(std::span<const Vec2> waypoints, double resample_step)
{
  if (!(resample_step > 0.0)) {
    throw InvalidInput("path resample step must be positive");
  }
  std::vector<Vec2> pts;
  pts.reserve(waypoints.size());
  for (const auto & p : waypoints) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInput("path waypoint is not finite");
    }
    if (pts.empty() || norm(p - pts.back()) > 1e-9) {
      pts.push_back(p);
    }
  }
  if (pts.size() < 2) {
    throw InvalidInput("path needs at least two distinct waypoints");
  }

  std::vector<double> cumulative(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + norm(pts[i] - pts[i - 1]);
  }
  length_ = cumulative.back();
  const auto n_segments =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length_ / resample_step - 1e-9)));
  step_ = length_ / static_cast<double>(n_segments);

  points_.reserve(n_segments + 1);
  std::size_t seg = 0;
  for (std::size_t i = 0; i <= n_segments; ++i) {
    const double l = std::min(length_, static_cast<double>(i) * step_);
    while (seg + 2 < pts.size() && cumulative[seg + 1] < l) {
      ++seg;
    }
    const double seg_len = cumulative[seg + 1] - cumulative[seg];
    const double t = std::clamp((l - cumulative[seg]) / seg_len, 0.0, 1.0);
    points_.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
  }

  const std::size_t n = points_.size();
  headings_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 & a = points_[i == 0 ? 0 : i - 1];
    const Vec2 & b = points_[i + 1 == n ? n - 1 : i + 1];
    headings_[i] = std::atan2(b.y - a.y, b.x - a.x);
  }
  for (std::size_t i = 1; i < n; ++i) {
    headings_[i] = headings_[i - 1] + wrap_pi(headings_[i] - headings_[i - 1]);
  }

  curvatures_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      curvatures_[i] = (headings_[1] - headings_[0]) / step_;
    } else if (i + 1 == n) {
      curvatures_[i] = (headings_[i] - headings_[i - 1]) / step_;
    } else {
      curvatures_[i] = (headings_[i + 1] - headings_[i - 1]) / (2.0 * step_);
    }
  }
}

std::pair<std::size_t, double> Path::locate(double l) const
{
  const double u = std::clamp(l, 0.0, length_) / step_;
  auto idx = static_cast<std::size_t>(u);
  if (idx + 1 >= points_.size()) {
    idx = points_.size() - 2;
  }
  return {idx, std::clamp(u - static_cast<double>(idx), 0.0, 1.0)};
}

Vec2 Path::position(double l) const
{
  const auto [i, t] = locate(l);
  return points_[i] + (points_[i + 1] - points_[i]) * t;
}

double Path::unwrapped_heading(double l) const
{
  const auto [i, t] = locate(l);
  return headings_[i] + (headings_[i + 1] - headings_[i]) * t;
}

double Path::heading(double l) const { return wrap_two_pi(unwrapped_heading(l)); }

double Path::curvature(double l) const
{
  const auto [i, t] = locate(l);
  return curvatures_[i] + (curvatures_[i + 1] - curvatures_[i]) * t;
}

double Path::project(const Vec2 & p, std::size_t first_segment, std::size_t last_segment) const
{
  const std::size_t n_seg = points_.size() - 1;
  last_segment = std::min(last_segment, n_seg - 1);
  first_segment = std::min(first_segment, last_segment);
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_l = 0.0;
  for (std::size_t i = first_segment; i <= last_segment; ++i) {
    const Vec2 a = points_[i];
    const Vec2 ab = points_[i + 1] - a;
    const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    const Vec2 d = a + ab * t - p;
    const double d2 = dot(d, d);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_l = (static_cast<double>(i) + t) * step_;
    }
  }
  return std::min(best_l, length_);
}

PathPtr make_path(std::span<const Vec2> waypoints, double resample_step)
{
  return std::make_shared<const Path>(waypoints, resample_step);
}

double max_curve_velocity(const Path & path, double l, double a_y_max, double cap)
{
  const double kappa = std::abs(path.curvature(l));
  if (kappa < 1e-12) {
    return cap;
  }
  return std::sqrt(a_y_max / kappa);
}

// ---------------------------------------------------------------------------

Aabb bounds(std::span<const Vec2> polygon)
{
  Aabb b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto & p : polygon) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

double signed_area(std::span<const Vec2> polygon)
{
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    a += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * a;
}

namespace
{

std::vector<Vec2> counter_clockwise(std::span<const Vec2> polygon)
{
  std::vector<Vec2> out(polygon.begin(), polygon.end());
  if (signed_area(out) < 0.0) {
    std::reverse(out.begin(), out.end());
  }
  return out;
}

double point_segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b)
{
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(a + ab * t - p);
}

// True when some edge normal of `a` separates a from b.
bool has_separating_axis(std::span<const Vec2> a, std::span<const Vec2> b)
{
  const double orientation = signed_area(a) >= 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 & p = a[i];
    const Vec2 edge = a[(i + 1) % a.size()] - p;
    // Outward normal for a counter-clockwise polygon.
    const Vec2 outward = Vec2{edge.y, -edge.x} * orientation;
    bool all_outside = true;
    for (const auto & q : b) {
      if (dot(q - p, outward) < 1e-12) {
        all_outside = false;
        break;
      }
    }
    if (all_outside) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip)
{
  std::vector<Vec2> output = counter_clockwise(subject);
  const std::vector<Vec2> window = counter_clockwise(clip);
  std::vector<Vec2> input;
  for (std::size_t i = 0; i < window.size() && !output.empty(); ++i) {
    const Vec2 & a = window[i];
    const Vec2 & b = window[(i + 1) % window.size()];
    const Vec2 edge = b - a;
    input.swap(output);
    output.clear();
    for (std::size_t j = 0; j < input.size(); ++j) {
      const Vec2 & cur = input[j];
      const Vec2 & prev = input[(j + input.size() - 1) % input.size()];
      const double side_cur = cross(edge, cur - a);
      const double side_prev = cross(edge, prev - a);
      if (side_cur >= 0.0) {
        if (side_prev < 0.0) {
          const double t = side_prev / (side_prev - side_cur);
          output.push_back(prev + (cur - prev) * t);
        }
        output.push_back(cur);
      } else if (side_prev >= 0.0) {
        const double t = side_prev / (side_prev - side_cur);
        output.push_back(prev + (cur - prev) * t);
      }
    }
  }
  if (output.size() < 3 || std::abs(signed_area(output)) < 1e-10) {
    return {};
  }
  return output;
}

bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b)
{
  return !has_separating_axis(a, b) && !has_separating_axis(b, a);
}

double convex_distance(std::span<const Vec2> a, std::span<const Vec2> b)
{
  if (convex_overlap(a, b)) {
    return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec2 & p = b[i];
    const Vec2 & q = b[(i + 1) % b.size()];
    for (const auto & v : a) {
      best = std::min(best, point_segment_distance(v, p, q));
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 & p = a[i];
    const Vec2 & q = a[(i + 1) % a.size()];
    for (const auto & v : b) {
      best = std::min(best, point_segment_distance(v, p, q));
    }
  }
  return best;
}

Quad oriented_box(const Vec2 & center, double heading, double length, double width)
{
  const Vec2 f = unit_from_angle(heading) * (0.5 * length);
  const Vec2 s = left_normal(unit_from_angle(heading)) * (0.5 * width);
  return {center - f - s, center + f - s, center + f + s, center - f + s};
}

// ---------------------------------------------------------------------------

Corridor::Corridor(PathPtr p, double w, double start, double end)
: path(std::move(p)), width(w), l_start(start), l_end(end)
{
  if (!path) {
    throw InvalidInput("corridor needs a path");
  }
  if (!(width > 0.0)) {
    throw InvalidInput("corridor width must be positive");
  }
  l_start = std::clamp(l_start, 0.0, path->length());
  l_end = std::clamp(l_end, 0.0, path->length());
  if (l_start > l_end) {
    throw InvalidInput("corridor start lies beyond its end");
  }
}

Corridor::Corridor(PathPtr p, double w) : Corridor(p, w, 0.0, p ? p->length() : 0.0) {}

namespace
{

// Arc-length stations bounding each corridor quad.
std::vector<double> corridor_stations(double l_start, double l_end, double step)
{
  const double span = std::max(0.0, l_end - l_start);
  const auto n =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / step - 1e-9)));
  std::vector<double> stations(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    stations[i] = l_start + span * static_cast<double>(i) / static_cast<double>(n);
  }
  return stations;
}

std::vector<Quad> quads_at(const Path & path, double width, std::span<const double> stations)
{
  std::vector<Quad> quads;
  quads.reserve(stations.size());
  Vec2 prev_left{};
  Vec2 prev_right{};
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const Vec2 p = path.position(stations[i]);
    const Vec2 n = left_normal(path.tangent(stations[i])) * (0.5 * width);
    const Vec2 left = p + n;
    const Vec2 right = p - n;
    if (i > 0) {
      quads.push_back({prev_right, right, left, prev_left});
    }
    prev_left = left;
    prev_right = right;
  }
  return quads;
}

}  // namespace

std::vector<Quad> corridor_quads(const Path & path, double width, double l_start, double l_end,
                                 double step)
{
  const auto stations = corridor_stations(l_start, l_end, step);
  return quads_at(path, width, stations);
}

InteractionZone interaction_zone(const Corridor & c1, const Corridor & c2)
{
  const Path & p1 = *c1.path;
  const Path & p2 = *c2.path;
  const auto st1 = corridor_stations(c1.l_start, c1.l_end, p1.step());
  const auto st2 = corridor_stations(c2.l_start, c2.l_end, p2.step());
  const auto q1 = quads_at(p1, c1.width, st1);
  const auto q2 = quads_at(p2, c2.width, st2);
  std::vector<Aabb> b2(q2.size());
  for (std::size_t j = 0; j < q2.size(); ++j) {
    b2[j] = bounds(q2[j]);
  }

  auto segment_window = [](const Path & path, double a, double b) {
    const double lo = std::max(0.0, a - path.step()) / path.step();
    const double hi = std::min(path.length(), b + path.step()) / path.step();
    return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(lo),
                                               static_cast<std::size_t>(hi)};
  };

  InteractionZone zone;
  double lo1 = std::numeric_limits<double>::infinity();
  double hi1 = -lo1;
  double lo2 = lo1;
  double hi2 = -lo1;
  for (std::size_t i = 0; i < q1.size(); ++i) {
    const Aabb bi = bounds(q1[i]);
    const auto [f1, l1] = segment_window(p1, st1[i], st1[i + 1]);
    for (std::size_t j = 0; j < q2.size(); ++j) {
      if (!bi.overlaps(b2[j])) {
        continue;
      }
      const auto overlap = clip_convex(q1[i], q2[j]);
      if (overlap.empty()) {
        continue;
      }
      const auto [f2, l2] = segment_window(p2, st2[j], st2[j + 1]);
      zone.exists = true;
      for (const auto & v : overlap) {
        const double a = std::clamp(p1.project(v, f1, l1), c1.l_start, c1.l_end);
        const double b = std::clamp(p2.project(v, f2, l2), c2.l_start, c2.l_end);
        lo1 = std::min(lo1, a);
        hi1 = std::max(hi1, a);
        lo2 = std::min(lo2, b);
        hi2 = std::max(hi2, b);
      }
    }
  }
  if (zone.exists) {
    zone.bounds_1 = {lo1, hi1};
    zone.bounds_2 = {lo2, hi2};
  }
  return zone;
}

bool corridors_overlap(const Path & p1, double w1, double s1, double e1, const Path & p2,
                       double w2, double s2, double e2, double step)
{
  const auto q1 = corridor_quads(p1, w1, s1, e1, step);
  const auto q2 = corridor_quads(p2, w2, s2, e2, step);
  constexpr std::size_t kChunk = 8;
  auto chunk_bounds = [](const std::vector<Quad> & quads) {
    std::vector<Aabb> out;
    for (std::size_t c = 0; c < quads.size(); c += kChunk) {
      Aabb b = bounds(quads[c]);
      for (std::size_t k = c + 1; k < std::min(quads.size(), c + kChunk); ++k) {
        const Aabb q = bounds(quads[k]);
        b = {std::min(b.min_x, q.min_x), std::min(b.min_y, q.min_y), std::max(b.max_x, q.max_x),
             std::max(b.max_y, q.max_y)};
      }
      out.push_back(b);
    }
    return out;
  };
  const auto c1 = chunk_bounds(q1);
  const auto c2 = chunk_bounds(q2);
  for (std::size_t a = 0; a < c1.size(); ++a) {
    for (std::size_t b = 0; b < c2.size(); ++b) {
      if (!c1[a].overlaps(c2[b])) {
        continue;
      }
      for (std::size_t i = a * kChunk; i < std::min(q1.size(), (a + 1) * kChunk); ++i) {
        for (std::size_t j = b * kChunk; j < std::min(q2.size(), (b + 1) * kChunk); ++j) {
          if (convex_overlap(q1[i], q2[j])) {
            return true;
          }
        }
      }
    }
  }
  return false;
}

}  // namespace ropt
