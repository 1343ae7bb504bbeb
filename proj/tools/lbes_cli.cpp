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
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lbes/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Extremum seeking simulator with Lie bracket averaging"};
  lbes::RunConfig config;
  std::string mode = "simulate";
  double horizon = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;

  app.add_option("--scenario", config.scenario, "Scenario file or builtin name")
      ->required();
  app.add_option("--mode", mode, "simulate, compare, sweep, probe or verify")
      ->check(CLI::IsMember({"simulate", "compare", "sweep", "probe", "verify"}));
  app.add_option("--omega", config.omegas, "Dither frequency (repeatable)");
  auto* horizon_opt = app.add_option("--horizon", horizon, "Simulation horizon");
  app.add_option("--out", config.out_dir, "Output directory");
  auto* samples_opt =
      app.add_option("--samples-per-period", samples, "RK4 steps per fastest period");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampled checks and probes");
  app.add_flag("--strict,!--no-strict", config.strict,
               "Reject unknown scenario keys (default on)");
  CLI11_PARSE(app, argc, argv);

  config.mode = lbes::ParseMode(mode);
  if (*horizon_opt) config.horizon = horizon;
  if (*samples_opt) config.samples_per_period = samples;
  if (*seed_opt) config.seed = seed;
  return lbes::Run(config, std::cout, std::cerr);
}
