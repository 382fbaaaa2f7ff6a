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

#ifndef ROPT__GEOMETRY_HPP_
#define ROPT__GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace ropt
{

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 & a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }
/// Left-hand normal of a direction.
constexpr Vec2 left_normal(const Vec2 & d) { return {-d.y, d.x}; }

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);
/// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Planar curve resampled at a uniform arc-length step. Heading and curvature
// are estimated by finite differences on the resampled points (central in the
// interior, one-sided at the ends). All queries clamp l into [0, length()].
class Path
{
public:
  Path(std::span<const Vec2> waypoints, double resample_step = 0.5);

  double length() const { return length_; }
  double step() const { return step_; }
  std::size_t size() const { return points_.size(); }

  std::span<const Vec2> points() const { return points_; }
  double arc_length_at(std::size_t i) const { return static_cast<double>(i) * step_; }
  double heading_at(std::size_t i) const { return wrap_two_pi(headings_[i]); }
  double curvature_at(std::size_t i) const { return curvatures_[i]; }

  Vec2 position(double l) const;
  /// Heading in [0, 2*pi).
  double heading(double l) const;
  Vec2 tangent(double l) const { return unit_from_angle(unwrapped_heading(l)); }
  double curvature(double l) const;

  /// Arc length of the point on the polyline nearest to p, searched over
  /// segments [first_segment, last_segment] (clamped to the path).
  double project(const Vec2 & p, std::size_t first_segment = 0,
                 std::size_t last_segment = static_cast<std::size_t>(-1)) const;

private:
  double unwrapped_heading(double l) const;
  // Segment index and fraction for an arc length.
  std::pair<std::size_t, double> locate(double l) const;

  std::vector<Vec2> points_;
  std::vector<double> headings_;  // unwrapped
  std::vector<double> curvatures_;
  double step_{0.5};
  double length_{0.0};
};

using PathPtr = std::shared_ptr<const Path>;

PathPtr make_path(std::span<const Vec2> waypoints, double resample_step = 0.5);

/// sqrt(a_y_max / |kappa(l)|), or cap when the path is straight at l.
double max_curve_velocity(const Path & path, double l, double a_y_max, double cap);

// ---------------------------------------------------------------------------
// Convex polygons

using Quad = std::array<Vec2, 4>;

struct Aabb
{
  double min_x, min_y, max_x, max_y;
  bool overlaps(const Aabb & o) const
  {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
};

Aabb bounds(std::span<const Vec2> polygon);
double signed_area(std::span<const Vec2> polygon);

/// Intersection of two convex polygons (Sutherland-Hodgman). Both inputs may
/// have either orientation. Returns an empty vector when they are disjoint.
std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Separating-axis overlap test for convex polygons (touching counts as apart).
bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b);

/// Euclidean distance between two convex polygons; zero when they overlap.
double convex_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Corners of a length x width rectangle centred at `center` along `heading`.
Quad oriented_box(const Vec2 & center, double heading, double length, double width);

// ---------------------------------------------------------------------------
// Corridors and interaction zones

struct Corridor
{
  PathPtr path;
  double width{3.0};
  double l_start{0.0};
  double l_end{0.0};

  Corridor(PathPtr p, double w, double start, double end);
  /// Corridor over the whole path.
  Corridor(PathPtr p, double w);
};

struct Interval
{
  double start{0.0};
  double end{0.0};
  bool contains(double l) const { return l >= start && l <= end; }
  double length() const { return end - start; }
};

struct InteractionZone
{
  Interval bounds_1;
  Interval bounds_2;
  bool exists{false};
};

/// Sequence of quads covering a corridor. Quads are built between samples
/// spaced at most `step` apart; ends are capped flat.
std::vector<Quad> corridor_quads(const Path & path, double width, double l_start, double l_end,
                                 double step);

/// Overlap of two corridor polygons, projected back onto each path.
InteractionZone interaction_zone(const Corridor & c1, const Corridor & c2);

/// True when the two corridors' polygons overlap anywhere.
bool corridors_overlap(const Path & p1, double w1, double s1, double e1, const Path & p2,
                       double w2, double s2, double e2, double step);

}  // namespace ropt

#endif  // ROPT__GEOMETRY_HPP_
