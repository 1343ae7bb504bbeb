// Copyright 2026 The lbes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LBES_SCENARIO_HPP_
#define LBES_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lbes/dynamics.hpp"
#include "lbes/liebracket.hpp"
#include "lbes/seekers.hpp"
#include "lbes/sim.hpp"

namespace lbes {

// Parse or schema error; line is 1-based, 0 when unknown.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& message, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

enum class DynamicsKind { kScalar, kSingleIntegrator, kUnicycle };

struct MapSpec {
  enum class Kind { kThreeAgent, kThreeAgentNoCross, kQuadratic, kScalarQuadratic };
  Kind kind = Kind::kThreeAgent;
  Vec q_diag;
  Vec xstar;
  double peak = 1.0;
};

struct ProbeSpec {
  std::vector<double> deltas{0.25, 0.5, 1.0};
  double epsilon = 0.5;
  double t_f = 40.0;
  double horizon = 60.0;
  int boundary_samples = 8;
};

struct ScenarioSpec {
  std::string name;
  DynamicsKind dynamics = DynamicsKind::kSingleIntegrator;
  double turn_rate = 1.0;       // unicycle Omega
  double scalar_alpha = 1.0;    // scalar loop amplitude
  MapSpec map;
  std::vector<AgentParams> agents;
  std::vector<double> omegas;
  Vec initial_state;
  double horizon = 10.0;
  StepPolicy step;
  NuOptions nu;
  double amplitude_exponent = 0.5;
  std::uint64_t seed = 1;
  ProbeSpec probe;
};

// Parses the JSON scenario schema documented in README.md. In strict mode
// unknown keys are errors; otherwise they are collected into warnings.
ScenarioSpec ParseScenario(std::string_view text, bool strict = true,
                           std::vector<std::string>* warnings = nullptr);

// Names of the scenarios compiled into the library.
std::vector<std::string> BuiltinScenarioNames();
std::optional<std::string> BuiltinScenarioText(std::string_view name);

// A path to a scenario file, or the name of a built-in scenario.
ScenarioSpec LoadScenario(const std::string& name_or_path, bool strict = true,
                          std::vector<std::string>* warnings = nullptr);

// Systems assembled from a spec. Cheap to copy.
class Scenario {
 public:
  explicit Scenario(ScenarioSpec spec);

  const ScenarioSpec& spec() const { return spec_; }
  int dim() const;
  const std::optional<PotentialGame>& game() const { return game_; }

  InputAffineSystem System(double omega) const;
  // Generic bracket construction with the spec's nu method.
  LieBracketSystem GenericLie() const;
  // Closed-form averaged field of the architecture.
  VectorField AnalyticLie() const;
  // [x*, f(x*)/h] for games, [peak] for the scalar loop.
  Vec Target() const;
  // Dithers of every channel of the built system.
  std::vector<DitherSignal> Dithers() const;

  SeekingProblem Problem(bool analytic_lie = true) const;

 private:
  ScenarioSpec spec_;
  std::optional<PotentialGame> game_;
  AgentMap scalar_map_;
};

}  // namespace lbes

#endif  // LBES_SCENARIO_HPP_
