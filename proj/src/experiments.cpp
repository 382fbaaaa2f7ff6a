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

#include "ropt/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

using nlohmann::json;

namespace ropt
{

// Enum mappings throw on unknown names instead of silently picking a default.
void to_json(json & j, LagBlend b) { j = b == LagBlend::kFaded ? "faded" : "literal"; }
void from_json(const json & j, LagBlend & b)
{
  const auto s = j.get<std::string>();
  if (s == "faded") {
    b = LagBlend::kFaded;
  } else if (s == "literal") {
    b = LagBlend::kLiteral;
  } else {
    throw InvalidInput("unknown lag_blend: " + s);
  }
}
void to_json(json & j, RuleConvention c) { j = std::string(to_string(c)); }
void from_json(const json & j, RuleConvention & c) { c = parse_convention(j.get<std::string>()); }
void to_json(json & j, ExperimentMode m) { j = std::string(to_string(m)); }
void from_json(const json & j, ExperimentMode & m) { m = parse_mode(j.get<std::string>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PatternParams, s_0, s_a, a_max, s_d, a_d)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AwarenessParams, k_lon, s_lon, k_lat, s_lat)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClassifyOptions, convention, angular_tolerance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PredictionConfig, pattern, awareness, classify)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OptimizerConfig, max_cycles, penalty_weight,
                                                v_max, a_min, a_max, brake_lag, engine_lag,
                                                convergence, v_bracket, lag_bracket,
                                                seed_accelerations)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(HysteresisConfig, relative_factor,
                                                absolute_margin, hold_time, resume_margin)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RateParams, escape_rate, peak_rate, sigma_pos0,
                                                sigma_pos_growth, a_y_max, sigma_ay,
                                                damage_offset, exclusion_taper, rest_speed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CostWeights, b_t, b_d, b_c, b_j, v_desired,
                                                deviation_as_penalty)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ProfileConfig, horizon, grid_step,
                                                smoothing_sigma, lag_blend)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EgoConfig, optimizer, hysteresis, rates, weights,
                                                profile, prediction)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ReactiveConfig, profile_count, a_min, a_max,
                                                brake_lag, engine_lag, v_max, compliant,
                                                attention_distance, rates, weights, profile,
                                                prediction)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SimConfig, dt, t_max, settle_time,
                                                fixed_duration, corridor_width)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FollowingSetup, d_0, v_max, path_length,
                                                ego_start, duration)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(CrossingSetup, d_i, v_ego, v_max, approach, exit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RandomSetup, v_max, d_i, angle_jitter_deg,
                                                lane_width_min, lane_width_max, v_start_min,
                                                v_start_max, v_desired_other_min,
                                                v_desired_other_max, compliance_probability,
                                                edge_radius, exit_length, corridor_width,
                                                max_tries)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepGrid, v_min, v_max, v_step, a_min, a_max,
                                                a_step)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SingleRun, scenario, v_f2, a_f2)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StableHeadwayOptions, rate_tolerance, min_window)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Th2dOptions, cap, tolerance, sample_step)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(IndicatorOptions, headway, encroachment,
                                                two_d_headway, stable, th2d, jerk_window)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ExperimentConfig, mode, variant, ego, reactive,
                                                sim, following, crossing, random, grid, single,
                                                indicators, runs, seed, out_dir, jobs,
                                                failure_threshold)

std::string_view to_string(ExperimentMode m)
{
  switch (m) {
    case ExperimentMode::kSingle:
      return "single";
    case ExperimentMode::kSweepFollowing:
      return "sweep-following";
    case ExperimentMode::kSweepIntersection:
      return "sweep-intersection";
    case ExperimentMode::kBatch:
      return "randomized-batch";
  }
  return "single";
}

ExperimentMode parse_mode(std::string_view name)
{
  for (auto m : {ExperimentMode::kSingle, ExperimentMode::kSweepFollowing,
                 ExperimentMode::kSweepIntersection, ExperimentMode::kBatch}) {
    if (to_string(m) == name) {
      return m;
    }
  }
  throw InvalidInput("unknown mode: " + std::string(name));
}

namespace
{

std::vector<double> grid_axis(double lo, double hi, double step)
{
  if (!(step > 0.0) || hi < lo) {
    throw InvalidInput("grid: need step > 0 and max >= min");
  }
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

// Rejects keys in `patch` that the defaults do not have.
void check_keys(const json & patch, const json & reference, const std::string & where)
{
  if (!patch.is_object()) {
    return;
  }
  for (const auto & [key, value] : patch.items()) {
    if (!reference.contains(key)) {
      throw InvalidInput("unknown config key: " + where + key);
    }
    if (value.is_object()) {
      check_keys(value, reference.at(key), where + key + ".");
    }
  }
}

std::string fmt(double x)
{
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string fmt(const std::optional<double> & x) { return x ? fmt(*x) : ""; }

// Keeps commas and quotes out of free-text CSV fields.
std::string csv_text(std::string s)
{
  for (char & c : s) {
    if (c == ',' || c == '"' || c == '\n') {
      c = ';';
    }
  }
  return s;
}

template <typename Build>
SweepResult run_sweep(const ExperimentConfig & cfg, std::string variant, Build build,
                      const Progress & progress)
{
  SweepResult out;
  out.variant = std::move(variant);
  for (const double v : cfg.grid.speeds()) {
    for (const double a : cfg.grid.accelerations()) {
      SweepCell c;
      c.v_f2 = v;
      c.a_f2 = a;
      out.cells.push_back(c);
    }
  }
  parallel_for(
    out.cells.size(), cfg.jobs,
    [&](std::size_t i) {
      SweepCell & c = out.cells[i];
      try {
        const RunRecord rec = simulate(build(c.v_f2, c.a_f2));
        c.indicators = compute_indicators(rec, cfg.indicators);
        c.termination = rec.termination;
        c.optimizer_failures = rec.optimizer_failures;
      } catch (const std::exception & e) {
        c.error = e.what();
      }
    },
    progress);
  return out;
}

}  // namespace

std::vector<double> SweepGrid::speeds() const { return grid_axis(v_min, v_max, v_step); }
std::vector<double> SweepGrid::accelerations() const { return grid_axis(a_min, a_max, a_step); }

json config_to_json(const ExperimentConfig & cfg) { return cfg; }

ExperimentConfig config_from_json(const json & j, const ExperimentConfig & base)
{
  if (!j.is_object()) {
    throw InvalidInput("config must be a JSON object");
  }
  json merged = config_to_json(base);
  check_keys(j, merged, "");
  merged.merge_patch(j);
  try {
    return merged.get<ExperimentConfig>();
  } catch (const json::exception & e) {
    throw InvalidInput(std::string("bad config value: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string & path, const ExperimentConfig & base)
{
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open config " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error & e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return config_from_json(j, base);
}

std::uint64_t config_hash(const ExperimentConfig & cfg)
{
  json j = config_to_json(cfg);
  j.erase("out_dir");
  j.erase("jobs");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> & fn,
                  const Progress & progress)
{
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      fn(i);
      if (progress) {
        std::lock_guard lock(mutex);
        progress(++done, n);
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n < 2) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(threads, n); ++t) {
    pool.emplace_back(worker);
  }
  for (auto & t : pool) {
    t.join();
  }
}

SweepResult run_following_sweep(const ExperimentConfig & cfg, FollowingVariant variant,
                                const Progress & progress)
{
  return run_sweep(
    cfg, std::string(to_string(variant)),
    [&](double v, double a) {
      return following_scenario(variant, v, a, cfg.following, cfg.ego, cfg.sim);
    },
    progress);
}

SweepResult run_crossing_sweep(const ExperimentConfig & cfg, CrossingVariant variant,
                               const Progress & progress)
{
  return run_sweep(
    cfg, std::string(to_string(variant)),
    [&](double v, double a) {
      return crossing_scenario(variant, v, a, cfg.crossing, cfg.ego, cfg.sim);
    },
    progress);
}

std::vector<BatchRow> run_randomized_batch(const ExperimentConfig & cfg, const Progress & progress)
{
  if (cfg.runs < 0) {
    throw InvalidInput("runs must be non-negative");
  }
  std::vector<BatchRow> rows(static_cast<std::size_t>(cfg.runs));
  parallel_for(
    rows.size(), cfg.jobs,
    [&](std::size_t i) {
      BatchRow & row = rows[i];
      row.index = i;
      row.seed = run_seed(cfg.seed, i);
      try {
        row.spec = randomize_scenario(row.seed, cfg.random);
        const RunRecord rec = simulate(
          build_random_scenario(row.spec, cfg.random, cfg.ego, cfg.reactive, cfg.sim));
        row.indicators = compute_indicators(rec, cfg.indicators);
        row.termination = rec.termination;
        row.optimizer_failures = rec.optimizer_failures;
      } catch (const std::exception & e) {
        row.error = e.what();
      }
    },
    progress);
  return rows;
}

Scenario single_scenario(const ExperimentConfig & cfg)
{
  const SingleRun & s = cfg.single;
  if (s.scenario == "following") {
    const auto variant =
      cfg.variant.empty() ? FollowingVariant::kOtherInFront : parse_following_variant(cfg.variant);
    return following_scenario(variant, s.v_f2, s.a_f2, cfg.following, cfg.ego, cfg.sim);
  }
  if (s.scenario == "crossing") {
    const auto variant =
      cfg.variant.empty() ? CrossingVariant::kOtherFromRight : parse_crossing_variant(cfg.variant);
    return crossing_scenario(variant, s.v_f2, s.a_f2, cfg.crossing, cfg.ego, cfg.sim);
  }
  if (s.scenario == "random") {
    const RandomScenarioSpec spec = randomize_scenario(cfg.seed, cfg.random);
    return build_random_scenario(spec, cfg.random, cfg.ego, cfg.reactive, cfg.sim);
  }
  throw InvalidInput("unknown scenario: " + s.scenario);
}

void write_sweep_csv(std::ostream & os, const SweepResult & result, const ExperimentConfig & cfg)
{
  const std::string hash = hash_hex(config_hash(cfg));
  os << "variant,v_f2,a_f2,th_stable,pet,pet_note,v_low,v_up,r_max,th_2d,collision,termination,"
        "optimizer_failures,error,seed,config_hash\n";
  for (const auto & c : result.cells) {
    const IndicatorSet & ind = c.indicators;
    const bool failed = !c.error.empty();
    os << result.variant << ',' << fmt(c.v_f2) << ',' << fmt(c.a_f2) << ','
       << fmt(ind.th_stable) << ',' << fmt(ind.pet.value) << ','
       << csv_text(failed ? "" : ind.pet.reason) << ',' << (failed ? "" : fmt(ind.v_low)) << ','
       << (failed ? "" : fmt(ind.v_up)) << ',' << (failed ? "" : fmt(ind.r_max)) << ','
       << fmt(ind.th_2d) << ',' << (ind.collision ? 1 : 0) << ','
       << (failed ? "error" : to_string(c.termination)) << ',' << c.optimizer_failures << ','
       << csv_text(c.error) << ',' << cfg.seed << ',' << hash << '\n';
  }
}

void write_batch_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                     const ExperimentConfig & cfg)
{
  const std::string hash = hash_hex(config_hash(cfg));
  os << "index,seed,compliant,start_ego,goal_ego,start_other,goal_other,v_f1,v_f2,v_d2,th_2d,"
        "r_max,v_low,v_up,pet,collision,termination,optimizer_failures,error,config_hash\n";
  for (const auto & r : rows) {
    const IndicatorSet & ind = r.indicators;
    const bool failed = !r.error.empty();
    os << r.index << ',' << r.seed << ',' << (r.spec.compliant ? 1 : 0) << ','
       << r.spec.start_road[0] << ',' << r.spec.goal_road[0] << ',' << r.spec.start_road[1] << ','
       << r.spec.goal_road[1] << ',' << fmt(r.spec.v_f1) << ',' << fmt(r.spec.v_f2) << ','
       << fmt(r.spec.v_d2) << ',' << fmt(ind.th_2d) << ',' << (failed ? "" : fmt(ind.r_max))
       << ',' << (failed ? "" : fmt(ind.v_low)) << ',' << (failed ? "" : fmt(ind.v_up)) << ','
       << fmt(ind.pet.value) << ',' << (ind.collision ? 1 : 0) << ','
       << (failed ? "error" : to_string(r.termination)) << ',' << r.optimizer_failures << ','
       << csv_text(r.error) << ',' << hash << '\n';
  }
}

Histogram histogram(std::span<const std::optional<double>> values, double lo, double hi,
                    double width)
{
  Histogram h;
  h.edges = grid_axis(lo, hi, width);
  h.edges.push_back(std::numeric_limits<double>::infinity());
  h.counts.assign(h.edges.size() - 1, 0);
  for (const auto & v : values) {
    if (v && *v < lo) {
      ++h.counts.front();
      continue;
    }
    std::size_t bin = h.counts.size() - 1;
    if (v) {
      for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
        if (*v < h.edges[i + 1]) {
          bin = i;
          break;
        }
      }
    }
    ++h.counts[bin];
  }
  return h;
}

namespace
{

template <typename Value>
void write_class_histograms(std::ostream & os, const std::vector<BatchRow> & rows,
                            const ExperimentConfig & cfg, double hi, double width,
                            bool cumulative, Value value)
{
  const std::string hash = hash_hex(config_hash(cfg));
  os << "class,bin_lo,bin_hi,count," << (cumulative ? "cumulative" : "probability")
     << ",seed,config_hash\n";
  for (const char * cls : {"all", "compliant", "non_compliant"}) {
    std::vector<std::optional<double>> values;
    for (const auto & r : rows) {
      if (!r.error.empty()) {
        continue;
      }
      const bool keep = std::string_view(cls) == "all" ||
                        (std::string_view(cls) == "compliant") == r.spec.compliant;
      if (keep) {
        values.push_back(value(r));
      }
    }
    const Histogram h = histogram(values, 0.0, hi, width);
    const double total = static_cast<double>(values.size());
    std::size_t running = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      running += h.counts[i];
      const double share =
        total > 0 ? static_cast<double>(cumulative ? running : h.counts[i]) / total : 0.0;
      os << cls << ',' << fmt(h.edges[i]) << ',' << fmt(h.edges[i + 1]) << ',' << h.counts[i]
         << ',' << fmt(share) << ',' << cfg.seed << ',' << hash << '\n';
    }
  }
}

}  // namespace

void write_th2d_cdf_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                        const ExperimentConfig & cfg, double width)
{
  write_class_histograms(os, rows, cfg, cfg.indicators.th2d.cap, width, true,
                         [](const BatchRow & r) { return r.indicators.th_2d; });
}

void write_rmax_hist_csv(std::ostream & os, const std::vector<BatchRow> & rows,
                         const ExperimentConfig & cfg, double width, double hi)
{
  write_class_histograms(os, rows, cfg, hi, width, false, [](const BatchRow & r) {
    return std::optional<double>(r.indicators.r_max);
  });
}

namespace
{

json optional_json(const std::optional<double> & x)
{
  if (!x) {
    return nullptr;
  }
  if (std::isinf(*x)) {
    return *x > 0 ? "inf" : "-inf";
  }
  return *x;
}

json interval_json(const Interval & i) { return {{"start", i.start}, {"end", i.end}}; }

}  // namespace

json indicators_json(const IndicatorSet & ind)
{
  return {{"th_stable", optional_json(ind.th_stable)},
          {"pet", optional_json(ind.pet.value)},
          {"pet_note", ind.pet.reason},
          {"v_low", ind.v_low},
          {"v_up", ind.v_up},
          {"th_2d", optional_json(ind.th_2d)},
          {"r_max", ind.r_max},
          {"collision", ind.collision}};
}

json run_record_json(const RunRecord & record)
{
  json paths = json::array();
  for (std::size_t i = 0; i < 2; ++i) {
    json pts = json::array();
    for (const Vec2 & p : record.waypoints[i]) {
      pts.push_back({p.x, p.y});
    }
    const VehicleShape & s = record.shapes[i];
    paths.push_back({{"waypoints", pts},
                     {"length", record.paths[i] ? record.paths[i]->length() : 0.0},
                     {"shape", {{"length", s.length}, {"width", s.width}, {"mass", s.mass}}}});
  }
  json steps = json::array();
  for (const auto & s : record.steps) {
    json agents = json::array();
    for (const auto & a : s.agents) {
      agents.push_back({{"l", a.l},
                        {"x", a.x},
                        {"y", a.y},
                        {"heading", a.heading},
                        {"v", a.v},
                        {"a", a.a},
                        {"r", a.r}});
    }
    steps.push_back({{"t", s.t},
                     {"chosen", to_string(s.chosen)},
                     {"relation", to_string(s.relation)},
                     {"other_superior", s.other_superior},
                     {"active", {s.active[0], s.active[1]}},
                     {"agents", agents}});
  }
  return {{"seed", record.seed},
          {"dt", record.dt},
          {"agents", paths},
          {"zone",
           {{"exists", record.zone.exists},
            {"ego", interval_json(record.zone.bounds_1)},
            {"other", interval_json(record.zone.bounds_2)}}},
          {"control", record.control == OtherControl::kFixed ? "fixed" : "reactive"},
          {"compliant", record.compliant},
          {"termination", to_string(record.termination)},
          {"optimizer_failures", record.optimizer_failures},
          {"steps", steps}};
}

}  // namespace ropt
