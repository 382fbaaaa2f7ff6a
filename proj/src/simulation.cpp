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

#include "ropt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ropt
{

double fixed_agent_velocity(const FixedManeuver & m, double t)
{
  if (t < m.t_onset) {
    return m.v_f;
  }
  const double active = std::min(t, m.t_onset + m.duration) - m.t_onset;
  return std::max(0.0, m.v_f + m.a_f * active);
}

void observe(const AgentState & self, std::span<const AgentState> others,
             std::span<const InteractionZone> zones, const PredictionConfig & cfg,
             double v_max, double a_y_max, const ProfileConfig & profile, bool discount,
             Observation & out)
{
  out.predictions.clear();
  out.interactions.clear();
  out.relations.clear();
  out.predictions.reserve(others.size());
  for (std::size_t j = 0; j < others.size(); ++j) {
    const AgentState & o = others[j];
    const PriorityRelation rel =
      classify({self.path.get(), self.l}, {o.path.get(), o.l}, zones[j], cfg.classify);
    const std::vector<double> v =
      predict_other_on_path(o.v, rel, cfg.pattern, v_max, *o.path, o.l, a_y_max,
                            profile.horizon, profile.grid_step);
    out.predictions.push_back(predict_along_path(o.path, o.shape, o.l, v, profile.grid_step));
    out.relations.push_back(rel);
  }
  for (std::size_t j = 0; j < others.size(); ++j) {
    OtherInteraction inter;
    inter.prediction = &out.predictions[j];
    if (discount) {
      inter.awareness =
        awareness_curve(out.relations[j], cfg.awareness, profile.horizon, profile.grid_step);
    }
    inter.zone = zones[j];
    out.interactions.push_back(std::move(inter));
  }
}

ReactiveChoice select_reactive_profile(const AgentState & self,
                                       std::span<const OtherInteraction> others,
                                       const ReactiveConfig & cfg)
{
  const int count = std::max(1, cfg.profile_count);
  const double lag = lag_minimum(self.a, cfg.a_min, cfg.a_max, cfg.brake_lag, cfg.engine_lag);
  const double step = cfg.profile.grid_step;
  const auto n = static_cast<std::size_t>(std::llround(cfg.profile.horizon / step)) + 1;
  const double ceiling = std::max(cfg.v_max, self.v);

  ReactiveChoice best;
  double best_fitness = std::numeric_limits<double>::infinity();
  best.fitness.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double accel =
      count == 1 ? 0.0 : cfg.a_min + (cfg.a_max - cfg.a_min) * i / static_cast<double>(count - 1);
    std::vector<double> raw(n);
    for (std::size_t k = 0; k < n; ++k) {
      raw[k] = std::clamp(self.v + accel * static_cast<double>(k) * step, 0.0, ceiling);
    }
    SampledProfile profile = shape_profile(std::move(raw), self.v, self.a, lag, cfg.profile);
    const Costs c = evaluate_profile(profile, self.path, self.shape, self.l, others, cfg.rates,
                                     cfg.weights);
    best.fitness.push_back(c.fitness);
    if (c.fitness < best_fitness) {
      best_fitness = c.fitness;
      best.profile = std::move(profile);
      best.index = static_cast<std::size_t>(i);
      best.acceleration = accel;
    }
  }
  return best;
}

ReactiveChoice reactive_agent_plan(const AgentState & self, const AgentState & ego,
                                   const InteractionZone & zone_self_first,
                                   const ReactiveConfig & cfg)
{
  const bool attentive =
    cfg.compliant || norm(self.position() - ego.position()) <= cfg.attention_distance;
  if (!attentive) {
    return select_reactive_profile(self, {}, cfg);
  }
  Observation obs;
  observe(self, std::span(&ego, 1), std::span(&zone_self_first, 1), cfg.prediction, cfg.v_max,
          cfg.rates.a_y_max, cfg.profile, cfg.compliant, obs);
  return select_reactive_profile(self, obs.interactions, cfg);
}

std::string_view to_string(Termination t)
{
  switch (t) {
    case Termination::kSettled:
      return "settled";
    case Termination::kTimeout:
      return "timeout";
    case Termination::kCollision:
      return "collision";
  }
  return "timeout";
}

double advance_distance(const SampledProfile & profile, double dt)
{
  if (profile.v.empty() || dt <= 0.0) {
    return 0.0;
  }
  const double h = profile.step;
  double distance = 0.0;
  double s = 0.0;
  std::size_t k = 0;
  while (k + 1 < profile.v.size() && s + h <= dt + 1e-12) {
    distance += 0.5 * h * (profile.v[k] + profile.v[k + 1]);
    s += h;
    ++k;
  }
  if (dt - s > 1e-12) {
    distance += 0.5 * (dt - s) * (profile.v_at(s) + profile.v_at(dt));
  }
  return distance;
}

namespace
{

AgentSample sample_of(const AgentState & a)
{
  const Vec2 p = a.position();
  return {a.l, p.x, p.y, a.heading(), a.v, a.a, a.r};
}

void follow_plan(AgentState & agent, const SampledProfile & plan, double dt)
{
  agent.l += advance_distance(plan, dt);
  agent.v = std::max(0.0, plan.v_at(dt));
  agent.a = plan.a_at(dt);
  agent.r = plan.r_at(dt);
}

void follow_maneuver(AgentState & agent, const FixedManeuver & m, double t, double dt)
{
  constexpr int kSubsteps = 10;
  const double h = dt / kSubsteps;
  double distance = 0.0;
  for (int i = 0; i < kSubsteps; ++i) {
    distance += 0.5 * h *
                (fixed_agent_velocity(m, t + i * h) + fixed_agent_velocity(m, t + (i + 1) * h));
  }
  const double v_new = fixed_agent_velocity(m, t + dt);
  const double a_new = (v_new - agent.v) / dt;
  agent.r = (a_new - agent.a) / dt;
  agent.a = a_new;
  agent.v = v_new;
  agent.l += distance;
}

// Clamps to the path end; true once the agent has run out of path.
bool clamp_to_end(AgentState & agent)
{
  const double end = agent.path->length();
  if (agent.l >= end) {
    agent.l = end;
    return true;
  }
  return false;
}

}  // namespace

RunRecord simulate(const Scenario & scenario, const StepObserver & observer)
{
  const SimConfig & sim = scenario.sim;
  const EgoConfig & cfg = scenario.ego_config;
  AgentState ego = scenario.ego;
  AgentState other = scenario.other;
  if (!ego.path || !other.path) {
    throw InvalidInput("simulate: both agents need a path");
  }

  RunRecord rec;
  rec.seed = scenario.seed;
  rec.dt = sim.dt;
  rec.paths = {ego.path, other.path};
  rec.shapes = {ego.shape, other.shape};
  rec.waypoints = scenario.waypoints;
  rec.control = scenario.control;
  rec.compliant = scenario.control == OtherControl::kFixed || scenario.reactive.compliant;
  rec.zone = interaction_zone(Corridor(ego.path, sim.corridor_width),
                              Corridor(other.path, sim.corridor_width));
  const InteractionZone zone = rec.zone;
  const InteractionZone zone_swapped{zone.bounds_2, zone.bounds_1, zone.exists};

  Planner planner(cfg.optimizer, cfg.hysteresis);
  const auto last_step = static_cast<long>(std::llround(sim.t_max / sim.dt));
  bool ego_done = false;
  bool other_done = false;
  double settled_for = 0.0;
  rec.steps.reserve(static_cast<std::size_t>(last_step) + 1);

  auto settled = [&](double t) {
    if (!zone.exists) {
      return true;
    }
    const bool ego_clear =
      ego_done || ego.l - 0.5 * ego.shape.length > zone.bounds_1.end;
    const bool other_clear =
      other_done || other.l - 0.5 * other.shape.length > zone.bounds_2.end ||
      (scenario.control == OtherControl::kFixed &&
       t >= scenario.maneuver.t_onset + scenario.maneuver.duration && other.v <= 0.0);
    return ego_clear && other_clear;
  };

  for (long n = 0;; ++n) {
    const double t = static_cast<double>(n) * sim.dt;

    Observation obs;
    const std::span<const AgentState> visible =
      other_done ? std::span<const AgentState>() : std::span(&other, 1);
    observe(ego, visible, std::span(&zone, visible.size()), cfg.prediction, cfg.optimizer.v_max,
            cfg.rates.a_y_max, cfg.profile, true, obs);

    StepRecord step;
    step.t = t;
    step.agents = {sample_of(ego), sample_of(other)};
    step.active = {!ego_done, !other_done};
    step.chosen = planner.hysteresis_state().active;
    if (!obs.relations.empty()) {
      step.relation = obs.relations.front().kind;
      step.other_superior = obs.relations.front().superior;
    }

    const bool collided =
      !ego_done && !other_done && convex_overlap(ego.footprint(), other.footprint());
    if (collided || n >= last_step) {
      rec.steps.push_back(step);
      rec.termination = collided ? Termination::kCollision : Termination::kTimeout;
      break;
    }
    if (!sim.fixed_duration) {
      settled_for = settled(t) ? settled_for + sim.dt : 0.0;
      if (settled_for >= sim.settle_time - 1e-9) {
        rec.steps.push_back(step);
        rec.termination = Termination::kSettled;
        break;
      }
    }

    PlanResult plan;
    if (!ego_done) {
      const PlanningScene scene{ego.path,       ego.shape, ego.l,       ego.v,      ego.a,
                                obs.interactions, cfg.rates, cfg.weights, cfg.profile};
      plan = planner.plan(scene, sim.dt);
      step.chosen = plan.chosen;
      if (plan.candidates.optimizer_failed) {
        ++rec.optimizer_failures;
      }
      if (observer) {
        observer(step, plan);
      }
    }
    ReactiveChoice reaction;
    if (scenario.control == OtherControl::kReactive && !other_done) {
      reaction = ego_done ? select_reactive_profile(other, {}, scenario.reactive)
                          : reactive_agent_plan(other, ego, zone_swapped, scenario.reactive);
    }
    rec.steps.push_back(step);

    if (!ego_done) {
      follow_plan(ego, plan.profile, sim.dt);
      ego_done = clamp_to_end(ego);
    }
    if (!other_done) {
      if (scenario.control == OtherControl::kFixed) {
        follow_maneuver(other, scenario.maneuver, t, sim.dt);
      } else {
        follow_plan(other, reaction.profile, sim.dt);
      }
      other_done = clamp_to_end(other);
    }
  }
  return rec;
}

}  // namespace ropt
