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

#include "ropt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ropt/powell.hpp"

namespace ropt
{

double constraint_penalty(const SnakeParams & params, const OptimizerConfig & cfg)
{
  auto sq = [](double x) { return x * x; };
  double total = 0.0;
  double prev_v = params.v_0;
  double prev_t = 0.0;
  for (std::size_t k = 0; k < kSnakeSegments; ++k) {
    const double v = params.v_p[k];
    total += sq(std::max(0.0, v - cfg.v_max));
    total += sq(std::max(0.0, -v));
    const double t = static_cast<double>(k + 1) * params.segment_length - params.offset;
    const double duration = std::max(t - prev_t, 1e-3);
    const double accel = (v - prev_v) / duration;
    total += sq(std::max(0.0, accel - cfg.a_max));
    total += sq(std::max(0.0, cfg.a_min - accel));
    prev_v = v;
    prev_t = t;
  }
  const double lag_min =
    lag_minimum(params.a_0, cfg.a_min, cfg.a_max, cfg.brake_lag, cfg.engine_lag);
  total += sq(std::max(0.0, lag_min - params.lag));
  return cfg.penalty_weight * total;
}

double penalized_fitness(const SnakeParams & params, const PlanningScene & scene,
                         const OptimizerConfig & cfg)
{
  const SampledProfile profile = snake_profile(params, scene.profile);
  const Costs c = evaluate_profile(profile, scene.path, scene.shape, scene.l, scene.others,
                                   scene.rates, scene.weights);
  return c.fitness + constraint_penalty(params, cfg);
}

OptimizeResult optimize_objective(const SnakeParams & start,
                                  const std::function<double(const SnakeParams &)> & objective,
                                  const OptimizerConfig & cfg)
{
  auto unpack = [&start](std::span<const double> x) {
    SnakeParams p = start;
    for (std::size_t k = 0; k < kSnakeSegments; ++k) {
      p.v_p[k] = x[k];
    }
    p.lag = std::max(0.0, x[kSnakeSegments]);
    return p;
  };
  std::vector<double> x0(start.v_p.begin(), start.v_p.end());
  x0.push_back(std::max(0.0, start.lag));

  PowellOptions options;
  options.max_cycles = cfg.max_cycles;
  options.tolerance = cfg.convergence;
  options.initial_step = {cfg.v_bracket, cfg.v_bracket, cfg.v_bracket, cfg.v_bracket,
                          cfg.lag_bracket};
  const PowellResult r =
    powell_minimize([&](std::span<const double> x) { return objective(unpack(x)); },
                    std::move(x0), options);

  OptimizeResult out;
  out.params = unpack(r.x);
  out.fitness = r.value;
  out.cycles = r.cycles;
  out.evaluations = r.evaluations;
  out.ok = std::isfinite(r.value);
  if (!out.ok) {
    out.params = start;
  }
  return out;
}

OptimizeResult optimize(const SnakeParams & start, const PlanningScene & scene,
                        const OptimizerConfig & cfg)
{
  return optimize_objective(
    start, [&](const SnakeParams & p) { return penalized_fitness(p, scene, cfg); }, cfg);
}

FixedCurves build_fixed_candidates(double v_0, double a_min, double a_max, double v_max,
                                   double horizon, double step)
{
  const auto n = static_cast<std::size_t>(std::llround(horizon / step)) + 1;
  FixedCurves out;
  out.constant.assign(n, v_0);
  out.stop.resize(n);
  out.accelerate.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) * step;
    out.stop[k] = std::max(0.0, v_0 + a_min * s);
    out.accelerate[k] = v_0 >= v_max ? v_0 : std::min(v_max, v_0 + a_max * s);
  }
  return out;
}

std::string_view to_string(CandidateId id)
{
  switch (id) {
    case CandidateId::kOptimized:
      return "optimized";
    case CandidateId::kConstant:
      return "constant";
    case CandidateId::kStop:
      return "stop";
    case CandidateId::kAccelerate:
      return "accelerate";
  }
  return "optimized";
}

const Candidate * CandidateSet::find(CandidateId id) const
{
  for (const auto & c : candidates) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

std::optional<CandidateId> HysteresisState::pending() const
{
  std::optional<CandidateId> best;
  double longest = 0.0;
  for (std::size_t i = 0; i < kCandidateCount; ++i) {
    if (held[i] > longest) {
      longest = held[i];
      best = static_cast<CandidateId>(i);
    }
  }
  return best;
}

CandidateId select(const CandidateSet & set, HysteresisState & state,
                   const HysteresisConfig & cfg, double dt)
{
  const Candidate * active = set.find(state.active);
  if (active == nullptr) {
    // The active candidate is unavailable (optimiser failure): best remaining.
    const auto best = std::min_element(
      set.candidates.begin(), set.candidates.end(),
      [](const Candidate & a, const Candidate & b) { return a.score() < b.score(); });
    state.held.fill(0.0);
    if (best != set.candidates.end()) {
      state.active = best->id;
    }
    return state.active;
  }

  const double r_active = active->costs.risk;
  std::array<bool, kCandidateCount> qualifies{};
  for (const auto & c : set.candidates) {
    if (c.id == state.active) {
      continue;
    }
    const double r = c.costs.risk;
    const bool safer = r <= cfg.relative_factor * r_active && r <= r_active - cfg.absolute_margin;
    // Leaving a fallback for the optimised plan once it is no riskier.
    const bool resume = state.active != CandidateId::kOptimized &&
                        c.id == CandidateId::kOptimized && c.score() < active->score() &&
                        r <= r_active + cfg.resume_margin;
    qualifies[static_cast<std::size_t>(c.id)] = safer || resume;
  }

  std::optional<CandidateId> target;
  double target_score = std::numeric_limits<double>::infinity();
  for (const auto & c : set.candidates) {
    const auto i = static_cast<std::size_t>(c.id);
    if (!qualifies[i]) {
      state.held[i] = 0.0;
      continue;
    }
    state.held[i] += dt;
    if (state.held[i] >= cfg.hold_time - 1e-9 && c.score() < target_score) {
      target = c.id;
      target_score = c.score();
    }
  }
  state.held[static_cast<std::size_t>(state.active)] = 0.0;
  if (target) {
    state.active = *target;
    state.held.fill(0.0);
  }
  return state.active;
}

PlanResult Planner::plan(const PlanningScene & scene, double dt)
{
  const double lag_min =
    lag_minimum(scene.a, optimizer_.a_min, optimizer_.a_max, optimizer_.brake_lag,
                optimizer_.engine_lag);
  SnakeParams start;
  if (!params_) {
    start = SnakeParams::constant(scene.v);
  } else if (state_.active != CandidateId::kOptimized && !executed_.v.empty()) {
    // Restart the search in the basin of the fallback being executed.
    start = *params_;
    start.offset = 0.0;
    for (std::size_t k = 0; k < kSnakeSegments; ++k) {
      start.v_p[k] = executed_.v_at(static_cast<double>(k + 1) * start.segment_length + dt);
    }
  } else {
    start = shift_for_next_cycle(*params_, dt, scene.v);
  }
  start.v_0 = scene.v;
  start.a_0 = scene.a;
  start.lag = std::max(start.lag, lag_min);

  double start_fitness = penalized_fitness(start, scene, optimizer_);
  for (const double a : optimizer_.seed_accelerations) {
    SnakeParams seed = start;
    for (std::size_t k = 0; k < kSnakeSegments; ++k) {
      const double t = static_cast<double>(k + 1) * seed.segment_length - seed.offset;
      seed.v_p[k] = std::clamp(scene.v + a * t, 0.0, optimizer_.v_max);
    }
    const double f = penalized_fitness(seed, scene, optimizer_);
    if (f < start_fitness) {
      start = seed;
      start_fitness = f;
    }
  }

  const OptimizeResult opt = optimize(start, scene, optimizer_);

  PlanResult result;
  result.cycles = opt.cycles;
  CandidateSet & set = result.candidates;
  set.optimizer_failed = !opt.ok;
  auto add = [&](CandidateId id, SampledProfile profile, double penalty) {
    Candidate c;
    c.id = id;
    c.costs = evaluate_profile(profile, scene.path, scene.shape, scene.l, scene.others,
                               scene.rates, scene.weights);
    c.profile = std::move(profile);
    c.penalty = penalty;
    set.candidates.push_back(std::move(c));
  };
  if (opt.ok) {
    add(CandidateId::kOptimized, snake_profile(opt.params, scene.profile),
        constraint_penalty(opt.params, optimizer_));
  }
  FixedCurves fixed =
    build_fixed_candidates(scene.v, optimizer_.a_min, optimizer_.a_max, optimizer_.v_max,
                           scene.profile.horizon, scene.profile.grid_step);
  add(CandidateId::kConstant, shape_profile(std::move(fixed.constant), scene.v, scene.a, lag_min,
                                            scene.profile),
      0.0);
  add(CandidateId::kStop,
      shape_profile(std::move(fixed.stop), scene.v, scene.a, lag_min, scene.profile), 0.0);
  add(CandidateId::kAccelerate, shape_profile(std::move(fixed.accelerate), scene.v, scene.a,
                                              lag_min, scene.profile),
      0.0);

  result.chosen = select(set, state_, hysteresis_, dt);
  result.profile = set.find(result.chosen)->profile;
  executed_ = result.profile;
  params_ = opt.ok ? opt.params : start;
  result.params = *params_;
  return result;
}

}  // namespace ropt
