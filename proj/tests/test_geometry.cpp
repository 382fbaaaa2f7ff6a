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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "ropt/geometry.hpp"
#include "test_util.hpp"

using namespace ropt;

namespace
{

std::vector<Vec2> arc(Vec2 center, double radius, double from, double to, int n)
{
  std::vector<Vec2> out;
  for (int i = 0; i <= n; ++i) {
    const double t = from + (to - from) * i / n;
    out.push_back(center + unit_from_angle(t) * radius);
  }
  return out;
}

}  // namespace

TEST_CASE("straight path")
{
  const std::vector<Vec2> pts{{0, 0}, {100, 0}};
  const Path p(pts);
  CHECK(p.length() == doctest::Approx(100.0));
  for (double l = 0.0; l <= 100.0; l += 3.3) {
    CHECK(p.heading(l) == doctest::Approx(0.0));
    CHECK(p.curvature(l) == doctest::Approx(0.0));
  }
  CHECK(p.position(42.0).x == doctest::Approx(42.0));
  CHECK(p.position(-5.0).x == doctest::Approx(0.0));
  CHECK(p.position(500.0).x == doctest::Approx(100.0));
  CHECK(p.project({37.2, 5.0}) == doctest::Approx(37.2));
}

TEST_CASE("circle curvature")
{
  const auto pts = arc({0, 0}, 20.0, 0.0, kPi, 400);
  const Path p(pts, 0.25);
  for (double l = 2.0; l < p.length() - 2.0; l += 1.7) {
    CHECK(p.curvature(l) == doctest::Approx(0.05).epsilon(0.01));
  }
}

TEST_CASE("quarter turn heading")
{
  // northbound, then turning right into the east leg
  std::vector<Vec2> pts{{0, -30}};
  for (const auto & q : arc({15, 0}, 15.0, kPi, kPi / 2.0, 60)) {
    pts.push_back(q);
  }
  pts.push_back({45, 15});
  const Path p(pts, 0.25);
  CHECK(p.heading(0.0) == doctest::Approx(kPi / 2.0));
  CHECK(p.heading(p.length()) == doctest::Approx(0.0).epsilon(1e-6));
  double prev = kPi / 2.0 + 1e-9;
  for (double l = 0.0; l <= p.length(); l += 0.5) {
    double h = p.heading(l);
    if (h > kPi) {
      h -= kTwoPi;
    }
    CHECK(h <= prev + 1e-9);
    prev = h;
  }
}

TEST_CASE("curve velocity")
{
  const std::vector<Vec2> line{{0, 0}, {50, 0}};
  const Path straight(line);
  CHECK(max_curve_velocity(straight, 10.0, 2.0, 17.0) == 17.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double radius = test::uniform(8.0, 60.0);
    const Path p(arc({0, 0}, radius, 0.0, 1.5, 200), 0.2);
    const double l = 0.5 * p.length();
    const double v = max_curve_velocity(p, l, 2.0, 100.0);
    CHECK(v * v * std::abs(p.curvature(l)) == doctest::Approx(2.0).epsilon(1e-9));
  }
  // kappa = 0.05, a_y = 2
  const Path r20(arc({0, 0}, 20.0, 0.0, 2.0, 400), 0.1);
  CHECK(max_curve_velocity(r20, 20.0, 2.0, 100.0) == doctest::Approx(std::sqrt(40.0)).epsilon(0.01));
}

TEST_CASE("convex polygons")
{
  const Quad a = oriented_box({0, 0}, 0.0, 4.0, 2.0);
  const Quad b = oriented_box({6, 0}, 0.0, 4.0, 2.0);
  CHECK_FALSE(convex_overlap(a, b));
  CHECK(convex_distance(a, b) == doctest::Approx(2.0));
  const Quad near = oriented_box({3.01, 0}, kPi / 2.0, 4.0, 2.0);
  CHECK_FALSE(convex_overlap(a, near));
  CHECK(convex_distance(a, near) == doctest::Approx(0.01));
  const Quad c = oriented_box({2.5, 0}, kPi / 2.0, 4.0, 2.0);
  CHECK(convex_overlap(a, c));
  CHECK(convex_distance(a, c) == 0.0);
  const auto inter = clip_convex(a, c);
  CHECK(std::abs(signed_area(inter)) == doctest::Approx(1.0));
  const Quad d = oriented_box({10, 10}, 0.3, 4.0, 2.0);
  CHECK(clip_convex(a, d).empty());
  CHECK(std::abs(signed_area(a)) == doctest::Approx(8.0));
}

TEST_CASE("interaction zones")
{
  const std::vector<Vec2> ns{{0, -50}, {0, 50}};
  const std::vector<Vec2> ew{{-50, 0}, {50, 0}};
  const auto p1 = make_path(ns);
  const auto p2 = make_path(ew);
  const auto z = interaction_zone(Corridor(p1, 3.0), Corridor(p2, 3.0));
  REQUIRE(z.exists);
  CHECK(z.bounds_1.start == doctest::Approx(48.5).epsilon(0.01));
  CHECK(z.bounds_1.end == doctest::Approx(51.5).epsilon(0.01));
  CHECK(z.bounds_2.start == doctest::Approx(48.5).epsilon(0.01));
  CHECK(z.bounds_2.end == doctest::Approx(51.5).epsilon(0.01));

  const std::vector<Vec2> far{{30, -50}, {30, 50}};
  CHECK_FALSE(interaction_zone(Corridor(p1, 3.0), Corridor(make_path(far), 3.0)).exists);

  const auto same = interaction_zone(Corridor(p1, 3.0, 10.0, 80.0), Corridor(p1, 3.0, 10.0, 80.0));
  REQUIRE(same.exists);
  CHECK(same.bounds_1.start == doctest::Approx(10.0).epsilon(0.01));
  CHECK(same.bounds_1.end == doctest::Approx(80.0).epsilon(0.01));
  CHECK(same.bounds_2.start == doctest::Approx(10.0).epsilon(0.01));
  CHECK(same.bounds_2.end == doctest::Approx(80.0).epsilon(0.01));
}

TEST_CASE("invalid input")
{
  const std::vector<Vec2> one{{0, 0}};
  CHECK_THROWS_AS(Path{one}, InvalidInput);
  CHECK(wrap_two_pi(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_pi(3.5 * kPi) == doctest::Approx(-0.5 * kPi));
}
