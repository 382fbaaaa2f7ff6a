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

#ifndef ROPT__POWELL_HPP_
#define ROPT__POWELL_HPP_

#include <functional>
#include <span>
#include <vector>

namespace ropt
{

// Derivative-free direction-set minimisation (Powell 1964). Each line search
// probes -h, 0, +h along the current direction, fits a parabola through the
// three values and jumps to its vertex; the best probe is kept, so the
// objective never increases. After each cycle the direction of largest
// decrease is replaced by the net displacement of the cycle.
struct PowellOptions
{
  int max_cycles{20};
  // Stop once a full cycle improves the objective by less than this.
  double tolerance{1e-3};
  // Probe distance per coordinate; also the scale of the initial directions.
  std::vector<double> initial_step;
  // Vertex jumps are clamped to this many probe distances.
  double max_jump{4.0};
};

struct PowellResult
{
  std::vector<double> x;
  double value{0.0};
  int cycles{0};
  int evaluations{0};
  bool converged{false};
};

using Objective = std::function<double(std::span<const double>)>;

PowellResult powell_minimize(const Objective & f, std::vector<double> x0,
                             const PowellOptions & options);

}  // namespace ropt

#endif  // ROPT__POWELL_HPP_
