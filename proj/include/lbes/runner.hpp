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
#ifndef LBES_RUNNER_HPP_
#define LBES_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lbes/scenario.hpp"

namespace lbes {

enum class Mode { kSimulate, kCompare, kSweep, kProbe, kVerify };

Mode ParseMode(const std::string& text);
const char* ModeName(Mode mode);

// Overrides left empty fall back to the scenario's values.
struct RunConfig {
  Mode mode = Mode::kSimulate;
  std::string scenario;
  std::string out_dir = ".";
  std::vector<double> omegas;
  std::optional<double> horizon;
  std::optional<int> samples_per_period;
  std::optional<std::uint64_t> seed;
  bool strict = true;
};

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Assumption and consistency checks on a loaded scenario.
std::vector<VerifyCheck> VerifyScenario(const Scenario& scenario);

// Runs one mode and writes its artifacts under out_dir. Returns the process
// exit status: 0 on success, the number of failed checks in verify mode, and
// 2 for configuration errors (reported on err).
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// "%.12g" formatting used by every CSV writer.
std::string FormatNumber(double v);

}  // namespace lbes

#endif  // LBES_RUNNER_HPP_
