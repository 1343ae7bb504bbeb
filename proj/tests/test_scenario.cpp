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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lbes/runner.hpp"
#include "lbes/scenario.hpp"

using namespace lbes;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "name": "tiny",
  "dynamics": {"type": "scalar"},
  "map": {"scalar_quadratic": {"peak": 2}},
  "omega": [50],
  "initial_state": [0],
  "horizon": 1
})";

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lbes_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string WriteScenario(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("lbes_" + name + ".json");
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("bundled scenarios parse and build") {
  for (const auto& name : BuiltinScenarioNames()) {
    const Scenario sc(LoadScenario(name));
    CHECK(sc.spec().name == name);
    CHECK(sc.System(sc.spec().omegas.front()).dim() == sc.dim());
    CHECK(sc.Target().size() == sc.dim());
  }
  const Scenario si(LoadScenario("sec6_single_integrator"));
  CHECK(si.dim() == 9);
  CHECK(si.spec().agents.size() == 3);
  CHECK(si.spec().agents[2].a == Rational(3));
  CHECK(si.spec().agents[0].c == 0.3);
  CHECK(si.spec().initial_state[5] == 2.5);
  const Scenario un(LoadScenario("sec6_unicycle"));
  CHECK(un.spec().turn_rate == 1.0);
  CHECK(un.spec().agents[1].d == Rational(2));
}

TEST_CASE("shipped scenario files mirror the compiled ones") {
  for (const auto& name : BuiltinScenarioNames()) {
    const fs::path file = fs::path(LBES_SCENARIO_DIR) / (name + ".json");
    REQUIRE(fs::exists(file));
    CHECK(ReadFile(file) == *BuiltinScenarioText(name));
  }
}

TEST_CASE("minimal scenario and defaults") {
  const auto spec = ParseScenario(kMinimal);
  CHECK(spec.dynamics == DynamicsKind::kScalar);
  CHECK(spec.map.peak == 2.0);
  CHECK(spec.step.samples_per_period == 40);
  CHECK(spec.amplitude_exponent == 0.5);
  const Scenario sc(spec);
  CHECK(sc.Target()[0] == 2.0);
}

TEST_CASE("unknown keys fail with a line number") {
  std::string text = kMinimal;
  text.replace(text.find("\"horizon\""), 9, "\"horizn\"");
  try {
    ParseScenario(text);
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("horizn") != std::string::npos);
  }
  std::vector<std::string> warnings;
  text = kMinimal;
  text.insert(text.find("\"horizon\""), "\"comment\": \"x\",\n  ");
  CHECK_NOTHROW(ParseScenario(text, false, &warnings));
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(ParseScenario(text, true), ScenarioError);
}

TEST_CASE("malformed json reports the line") {
  const std::string text = "{\n  \"name\": \"x\",\n  \"horizon\": ,\n}";
  try {
    ParseScenario(text);
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("schema checks") {
  auto fails = [](std::string from, std::string to) {
    std::string text = kMinimal;
    text.replace(text.find(from), from.size(), to);
    CHECK_THROWS_AS(ParseScenario(text), ScenarioError);
  };
  fails("\"horizon\": 1", "\"horizon\": 0");
  fails("\"initial_state\": [0]", "\"initial_state\": [0, 1]");
  fails("\"omega\": [50]", "\"omega\": [-50]");
  fails("\"type\": \"scalar\"", "\"type\": \"bicycle\"");
  fails("{\"scalar_quadratic\": {\"peak\": 2}}", "{\"builtin\": \"three_agent\"}");
  fails("\"horizon\": 1", "\"horizon\": 1, \"amplitude_exponent\": 0.7");
  fails("\"horizon\": 1", "\"horizon\": 1, \"nu_method\": \"guess\"");
}

TEST_CASE("rational strings in agent blocks") {
  const std::string text = R"({
    "name": "two",
    "dynamics": {"type": "single_integrator"},
    "map": {"quadratic": {"Q": [1, 1, 1, 1], "xstar": [0, 0, 1, 1]}},
    "agents": [{"c": "3/10", "alpha": 1, "h": 1, "a": "1/2"},
               {"c": 0.3, "alpha": 1, "h": "0.5", "a": "1/3", "dithers": ["sine", "cosine"]}],
    "omega": [10],
    "initial_state": [0, 0, 0, 0, 0, 0],
    "horizon": 2
  })";
  const auto spec = ParseScenario(text);
  CHECK(spec.agents[0].c == doctest::Approx(0.3));
  CHECK(spec.agents[0].a == Rational(1, 2));
  CHECK(spec.agents[1].h == 0.5);
  const Scenario sc(spec);
  CHECK(sc.dim() == 6);
  // q = 6 and harmonics (3, 2) for ratios 1/2 and 1/3.
  const auto dithers = sc.Dithers();
  REQUIRE(dithers.size() == 4);
  CHECK(dithers[0].harmonic() == 3);
  CHECK(dithers[2].harmonic() == 2);
}

TEST_CASE("duplicate ratios are a scenario error") {
  const std::string text = R"({
    "name": "dup",
    "dynamics": {"type": "single_integrator"},
    "map": {"quadratic": {"Q": [1, 1, 1, 1], "xstar": [0, 0, 1, 1]}},
    "agents": [{"c": 0.3, "alpha": 1, "h": 1, "a": "1"},
               {"c": 0.3, "alpha": 1, "h": 1, "a": "1"}],
    "omega": [10],
    "initial_state": [0, 0, 0, 0, 0, 0],
    "horizon": 2
  })";
  CHECK_THROWS_AS(Scenario(ParseScenario(text)), InvalidArgument);
}

TEST_CASE("verify passes on every bundled scenario") {
  for (const auto& name : BuiltinScenarioNames()) {
    for (const auto& c : VerifyScenario(Scenario(LoadScenario(name)))) {
      CHECK_MESSAGE(c.passed, name << ": " << c.name);
    }
    RunConfig cfg;
    cfg.mode = Mode::kVerify;
    cfg.scenario = name;
    cfg.out_dir = TempDir("verify_" + name).string();
    std::ostringstream out, err;
    CHECK(Run(cfg, out, err) == 0);
  }
}

TEST_CASE("compare writes two csv pairs and a summary") {
  RunConfig cfg;
  cfg.mode = Mode::kCompare;
  cfg.scenario = "sec6_single_integrator";
  cfg.omegas = {10.0, 100.0};
  cfg.horizon = 20.0;
  const fs::path dir = TempDir("compare");
  cfg.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(Run(cfg, out, err) == 0);
  for (const char* f : {"oscillatory_omega10.csv", "lie_omega10.csv",
                        "oscillatory_omega100.csv", "lie_omega100.csv", "compare_summary.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const std::string csv = ReadFile(dir / "oscillatory_omega10.csv");
  CHECK(csv.rfind("t,x1,x2,x3,x4,x5,x6,x7,x8,x9\n", 0) == 0);

  std::istringstream summary(ReadFile(dir / "compare_summary.txt"));
  std::string line;
  std::vector<double> sup;
  while (std::getline(summary, line)) {
    if (line.rfind("10,", 0) == 0 || line.rfind("100,", 0) == 0) {
      sup.push_back(std::stod(line.substr(line.find(',') + 1)));
    }
  }
  REQUIRE(sup.size() == 2);
  CHECK(sup[1] < sup[0]);
}

TEST_CASE("identical runs write identical csv bytes") {
  RunConfig cfg;
  cfg.mode = Mode::kSimulate;
  cfg.scenario = "sec2_scalar";
  cfg.omegas = {100.0};
  cfg.horizon = 2.0;
  std::ostringstream out, err;
  const fs::path first = TempDir("det_a");
  const fs::path second = TempDir("det_b");
  cfg.out_dir = first.string();
  REQUIRE(Run(cfg, out, err) == 0);
  cfg.out_dir = second.string();
  REQUIRE(Run(cfg, out, err) == 0);
  for (const char* f : {"trajectory_omega100.csv", "trajectories_long.csv"}) {
    const auto a = ReadFile(first / f);
    CHECK(!a.empty());
    CHECK(a == ReadFile(second / f));
  }
}

TEST_CASE("zero horizon is rejected") {
  RunConfig cfg;
  cfg.mode = Mode::kSimulate;
  cfg.scenario = "sec2_scalar";
  cfg.horizon = 0.0;
  cfg.out_dir = TempDir("zero").string();
  std::ostringstream out, err;
  CHECK(Run(cfg, out, err) != 0);
  CHECK(err.str().find("horizon") != std::string::npos);
}

TEST_CASE("misspelled keys fail before any output") {
  std::string text = kMinimal;
  text.replace(text.find("\"omega\""), 7, "\"omgea\"");
  RunConfig cfg;
  cfg.mode = Mode::kSimulate;
  cfg.scenario = WriteScenario("typo", text);
  const fs::path dir = TempDir("typo");
  cfg.out_dir = dir.string();
  std::ostringstream out, err;
  CHECK(Run(cfg, out, err) == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(err.str().find("line 5") != std::string::npos);

  cfg.strict = false;
  CHECK(Run(cfg, out, err) == 2);  // still missing 'omega'
}

TEST_CASE("sweep and probe reports") {
  RunConfig cfg;
  cfg.scenario = "sec2_scalar";
  std::ostringstream out, err;
  cfg.mode = Mode::kSweep;
  const fs::path sweep = TempDir("sweep");
  cfg.out_dir = sweep.string();
  REQUIRE(Run(cfg, out, err) == 0);
  CHECK(ReadFile(sweep / "sweep.csv").rfind("omega,sup_error", 0) == 0);
  CHECK(ReadFile(sweep / "sweep_summary.txt").find("monotone_non_increasing yes") !=
        std::string::npos);

  cfg.mode = Mode::kProbe;
  cfg.omegas = {400.0};
  const fs::path probe = TempDir("probe");
  cfg.out_dir = probe.string();
  REQUIRE(Run(cfg, out, err) == 0);
  const auto report = ReadFile(probe / "probe_report.txt");
  CHECK(report.find("lie,") != std::string::npos);
  CHECK(report.find("oscillatory,") != std::string::npos);
}

TEST_CASE("unknown scenarios and modes") {
  CHECK_THROWS_AS(LoadScenario("no_such_scenario"), ScenarioError);
  CHECK_THROWS_AS(ParseMode("plot"), InvalidArgument);
  CHECK(ParseMode("verify") == Mode::kVerify);
}
