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

#include "ropt/risk_cost.hpp"
#include "test_util.hpp"

using namespace ropt;

TEST_CASE("collision rate")
{
  RateParams p;
  CHECK(collision_rate_from_gap(0.0, 3.0, p) == doctest::Approx(p.peak_rate));
  const double far = 10.0 * sigma_total(2.0, p);
  CHECK(collision_rate_from_gap(far, 2.0, p) < 1e-20 * p.peak_rate);
  for (int i = 0; i < 200; ++i) {
    const double s = test::uniform(0.0, 10.0);
    const double d1 = test::uniform(0.0, 20.0);
    const double d2 = d1 + test::uniform(1e-3, 5.0);
    CHECK(collision_rate_from_gap(d2, s, p) <= collision_rate_from_gap(d1, s, p));
  }
}

TEST_CASE("curve rate")
{
  RateParams p;
  CHECK(curve_rate_from_lateral(0.0, p) < 1e-4 * p.peak_rate);
  CHECK(curve_rate_from_lateral(p.a_y_max, p) == doctest::Approx(0.5 * p.peak_rate));
  const double kappa = 0.05;
  double prev = -1.0;
  for (double v = 0.0; v < 20.0; v += 0.37) {
    const double r = curve_rate_from_lateral(v * v * kappa, p);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("damages")
{
  const double d0 = 0.1;
  const double m = 1200.0;
  CHECK(collision_damage(m, m, {10, 0}, {0, 4}, d0) ==
        doctest::Approx(d0 + m * (100.0 + 16.0) / 4.0));
  CHECK(collision_damage(m, m, {3, 1}, {3, 1}, d0) == doctest::Approx(d0));
  CHECK(curve_damage(1500.0, 10.0, d0) == doctest::Approx(d0 + 75000.0));
}

TEST_CASE("survival")
{
  const double step = 0.05;
  const double c = 0.7;
  std::vector<double> rate(201, c);
  const auto s = survival(rate, step);
  CHECK(s[0] == 1.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(std::abs(s[k] - std::exp(-c * k * step)) < 1e-6);
  }
  const auto zero = survival(std::vector<double>(50, 0.0), step);
  for (double v : zero) {
    CHECK(v == 1.0);
  }

  // piecewise constant: product of segment exponentials
  std::vector<double> pw(201);
  for (std::size_t k = 0; k < pw.size(); ++k) {
    pw[k] = k <= 100 ? 0.4 : 1.3;
  }
  const auto spw = survival(pw, step);
  // the trapezoid straddling the jump sees the mean rate
  CHECK(std::abs(spw[100] - std::exp(-0.4 * 5.0)) < 1e-9);
  CHECK(std::abs(spw[200] - std::exp(-0.4 * 5.0) * std::exp(-1.3 * 4.95 - 0.85 * 0.05)) < 1e-9);

  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> r(201);
    for (auto & v : r) {
      v = test::uniform(0.0, 3.0);
    }
    const auto sv = survival(r, step);
    bool monotone = sv[0] == 1.0;
    for (std::size_t k = 1; k < sv.size(); ++k) {
      monotone = monotone && sv[k] <= sv[k - 1];
    }
    CHECK(monotone);
  }
}

TEST_CASE("integration rule")
{
  std::vector<double> f;
  for (int i = 0; i <= 7; ++i) {
    f.push_back(std::pow(i * 0.1, 3));
  }
  // exact for cubics, also with an odd interval count
  CHECK(integrate(f, 0.1) == doctest::Approx(std::pow(0.7, 4) / 4.0).epsilon(1e-12));
  f.pop_back();
  CHECK(integrate(f, 0.1) == doctest::Approx(std::pow(0.6, 4) / 4.0).epsilon(1e-12));
}

TEST_CASE("single constant rate risk")
{
  const double step = 0.05;
  const double c = 0.8;
  const double damage = 3.0e4;
  const std::size_t n = 201;
  ScenePrediction scene;
  scene.step = step;
  scene.total_rate.assign(n, c);
  scene.curve_rate.assign(n, 0.0);
  scene.curve_damage.assign(n, 0.0);
  scene.collision_rate.assign(1, std::vector<double>(n, c));
  scene.collision_damage.assign(1, std::vector<double>(n, damage));
  scene.survival = survival(scene.total_rate, step);
  const double expected = damage * (1.0 - std::exp(-c * 10.0));
  CHECK(std::abs(risk(scene) - expected) / expected < 1e-4);

  scene.collision_rate[0].assign(n, 0.0);
  CHECK(risk(scene) == 0.0);
}

namespace
{

struct CrossingScene
{
  PathPtr ego_path;
  PathPtr other_path;
  InteractionZone zone;
  double ego_l0;
  double other_l0;
  double v_ego;
  double v_other;
};

Costs evaluate(const CrossingScene & sc, double step, const RateParams & p, const CostWeights & w)
{
  const auto n = static_cast<std::size_t>(std::llround(10.0 / step)) + 1;
  SampledProfile prof;
  prof.step = step;
  prof.v.assign(n, sc.v_ego);
  recompute_derivatives(prof);
  const auto other =
    predict_along_path(sc.other_path, {}, sc.other_l0, std::vector<double>(n, sc.v_other), step);
  std::vector<OtherInteraction> others(1);
  others[0].prediction = &other;
  others[0].zone = sc.zone;
  return evaluate_profile(prof, sc.ego_path, {}, sc.ego_l0, others, p, w);
}

}  // namespace

TEST_CASE("risk converges under grid refinement")
{
  const std::vector<Vec2> a{{0, -200}, {0, 200}};
  const std::vector<Vec2> b{{200, 0}, {-200, 0}};
  CrossingScene sc;
  sc.ego_path = make_path(a);
  sc.other_path = make_path(b);
  sc.zone = interaction_zone(Corridor(sc.ego_path, 3.0), Corridor(sc.other_path, 3.0));
  REQUIRE(sc.zone.exists);
  const RateParams p;
  const CostWeights w;
  for (int trial = 0; trial < 20; ++trial) {
    sc.v_ego = test::uniform(3.0, 15.0);
    sc.v_other = test::uniform(3.0, 15.0);
    const double t_meet = test::uniform(1.0, 6.0);
    sc.ego_l0 = 200.0 - sc.v_ego * t_meet + test::uniform(-3.0, 3.0);
    sc.other_l0 = 200.0 - sc.v_other * t_meet + test::uniform(-3.0, 3.0);
    const double coarse = evaluate(sc, 0.05, p, w).risk;
    const double fine = evaluate(sc, 0.025, p, w).risk;
    REQUIRE(fine > 0.0);
    CHECK(std::abs(coarse - fine) / fine < 0.01);
  }
}

TEST_CASE("utility and comfort")
{
  const double step = 0.05;
  const std::size_t n = 201;
  const std::vector<double> one(n, 1.0);
  CostWeights w;
  CHECK(utility(std::vector<double>(n, w.v_desired), one, step, w) ==
        doctest::Approx(w.b_t * w.v_desired * 10.0));
  const double delta = 2.5;
  CHECK(utility(std::vector<double>(n, w.v_desired + delta), one, step, w) ==
        doctest::Approx((w.b_t * (w.v_desired + delta) - w.b_d * delta) * 10.0));
  CostWeights no_dev = w;
  no_dev.b_d = 0.0;
  CHECK(utility(std::vector<double>(n, 0.0), one, step, no_dev) == 0.0);

  const std::vector<double> zero(n, 0.0);
  CHECK(comfort(zero, zero, one, step, w) == 0.0);
  CostWeights no_jerk = w;
  no_jerk.b_j = 0.0;
  CHECK(comfort(one, zero, one, step, no_jerk) == doctest::Approx(-w.b_c * 10.0));

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(n), bigger(n), r(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = test::uniform(-3.0, 3.0);
      bigger[k] = a[k] + (a[k] < 0 ? -1.0 : 1.0) * test::uniform(0.0, 1.0);
      r[k] = test::uniform(-2.0, 2.0);
    }
    CHECK(comfort(bigger, r, one, step, w) <= comfort(a, r, one, step, w));
  }

  CHECK(fitness(0.0, 5.0, -1.0) == doctest::Approx(-4.0));
  CHECK(fitness(3.0, 5.0, -1.0) > fitness(0.0, 5.0, -1.0));
  CHECK(fitness(0.0, 0.0, 0.0) == 0.0);
}

TEST_CASE("crash exclusion")
{
  OtherInteraction o;
  CHECK_FALSE(crash_possible(o, 0.0, 0.0, 2.25, 2.25));
  o.zone.exists = true;
  o.zone.bounds_1 = {10.0, 13.0};
  o.zone.bounds_2 = {20.0, 23.0};
  CHECK(crash_possible(o, 5.0, 15.0, 2.25, 2.25));
  CHECK(crash_possible(o, 15.0, 15.0, 2.25, 2.25));
  CHECK_FALSE(crash_possible(o, 15.5, 15.0, 2.25, 2.25));
  CHECK_FALSE(crash_possible(o, 5.0, 25.5, 2.25, 2.25));

  CHECK(crash_weight(o, 5.0, 15.0, 2.25, 2.25, 2.0) == 1.0);
  CHECK(crash_weight(o, 14.25, 15.0, 2.25, 2.25, 2.0) == doctest::Approx(0.5));
  CHECK(crash_weight(o, 15.5, 15.0, 2.25, 2.25, 2.0) == 0.0);
  CHECK(crash_weight(o, 14.25, 15.0, 2.25, 2.25, 0.0) == 1.0);
}

TEST_CASE("standing vehicles do not collide")
{
  const std::vector<Vec2> a{{0, -50}, {0, 50}};
  const std::vector<Vec2> b{{50, 0}, {-50, 0}};
  const PathPtr ego_path = make_path(a);
  const PathPtr other_path = make_path(b);
  const std::size_t n = 21;
  const auto ego = predict_along_path(ego_path, {}, 47.0, std::vector<double>(n, 0.0), 0.5);
  const auto other = predict_along_path(other_path, {}, 50.0, std::vector<double>(n, 0.0), 0.5);
  std::vector<OtherInteraction> others(1);
  others[0].prediction = &other;
  others[0].zone.exists = true;
  others[0].zone.bounds_1 = {48.5, 51.5};
  others[0].zone.bounds_2 = {48.5, 51.5};

  RateParams p;
  const ScenePrediction still = predict_scene(ego, others, p);
  for (double r : still.collision_rate[0]) {
    CHECK(r == 0.0);
  }

  p.rest_speed = 0.0;
  const ScenePrediction cut = predict_scene(ego, others, p);
  CHECK(cut.collision_rate[0][0] > 0.1);
}
