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

#include "ropt/powell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ropt
{

namespace
{

struct LineSearch
{
  const Objective & f;
  int & evaluations;
  double max_jump;

  double eval(std::span<const double> x)
  {
    ++evaluations;
    return f(x);
  }

  // Moves x along d in place; returns the new value (never above f0).
  double run(std::vector<double> & x, double f0, const std::vector<double> & d)
  {
    const std::size_t n = x.size();
    std::vector<double> probe(n);
    auto at = [&](double t) {
      for (std::size_t i = 0; i < n; ++i) {
        probe[i] = x[i] + t * d[i];
      }
      return eval(probe);
    };
    const double f_minus = at(-1.0);
    const double f_plus = at(1.0);

    double best_t = 0.0;
    double best_f = f0;
    if (f_minus < best_f) {
      best_t = -1.0;
      best_f = f_minus;
    }
    if (f_plus < best_f) {
      best_t = 1.0;
      best_f = f_plus;
    }
    const double curvature = f_minus - 2.0 * f0 + f_plus;
    if (curvature > 0.0 && std::isfinite(curvature)) {
      double vertex = 0.5 * (f_minus - f_plus) / curvature;
      vertex = std::clamp(vertex, -max_jump, max_jump);
      if (vertex != -1.0 && vertex != 0.0 && vertex != 1.0) {
        const double f_vertex = at(vertex);
        if (f_vertex < best_f) {
          best_t = vertex;
          best_f = f_vertex;
        }
      }
    }
    if (best_t != 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += best_t * d[i];
      }
    }
    return best_f;
  }
};

}  // namespace

PowellResult powell_minimize(const Objective & f, std::vector<double> x0,
                             const PowellOptions & options)
{
  const std::size_t n = x0.size();
  if (options.initial_step.size() != n) {
    throw std::invalid_argument("powell: initial_step must match the dimension");
  }
  if (options.max_cycles < 1) {
    throw std::invalid_argument("powell: max_cycles must be at least 1");
  }

  PowellResult result;
  std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    directions[i][i] = options.initial_step[i];
  }
  LineSearch search{f, result.evaluations, options.max_jump};

  std::vector<double> x = std::move(x0);
  double fx = search.eval(x);
  if (!std::isfinite(fx)) {
    result.x = std::move(x);
    result.value = fx;
    return result;
  }

  for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
    const std::vector<double> x_start = x;
    const double f_start = fx;
    std::size_t biggest = 0;
    double biggest_drop = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fx;
      fx = search.run(x, fx, directions[i]);
      if (before - fx > biggest_drop) {
        biggest_drop = before - fx;
        biggest = i;
      }
    }
    result.cycles = cycle + 1;

    std::vector<double> displacement(n);
    std::vector<double> extrapolated(n);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      displacement[i] = x[i] - x_start[i];
      extrapolated[i] = x[i] + displacement[i];
      moved += std::abs(displacement[i]);
    }
    if (moved > 0.0 && biggest_drop > 0.0) {
      const double f_ext = search.eval(extrapolated);
      // Powell's test for whether the new direction is worth keeping.
      if (f_ext < f_start) {
        const double a = f_start - fx - biggest_drop;
        const double b = f_start - f_ext;
        const double t = 2.0 * (f_start - 2.0 * fx + f_ext) * a * a - biggest_drop * b * b;
        if (t < 0.0) {
          fx = search.run(x, fx, displacement);
          directions[biggest] = directions.back();
          directions.back() = displacement;
        }
      }
    }

    if (std::abs(f_start - fx) < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.x = std::move(x);
  result.value = fx;
  return result;
}

}  // namespace ropt
