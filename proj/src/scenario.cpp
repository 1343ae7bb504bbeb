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
#include "lbes/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lbes {
namespace {

using nlohmann::json;

constexpr std::string_view kSec2Scalar = R"json({
  "name": "sec2_scalar",
  "dynamics": {"type": "scalar", "alpha": 1.0},
  "map": {"scalar_quadratic": {"peak": 1.0}},
  "omega": [100, 400, 1600],
  "initial_state": [0.0],
  "horizon": 10.0,
  "step": {"samples_per_period": 40, "max_dt": 0.01, "output_stride": 10},
  "nu_method": "closed_form",
  "amplitude_exponent": 0.5,
  "seed": 1,
  "probe": {"deltas": [0.5, 1.0], "epsilon": 0.2, "t_f": 8.0,
            "horizon": 10.0, "boundary_samples": 2}
}
)json";

constexpr std::string_view kSec6SingleIntegrator = R"json({
  "name": "sec6_single_integrator",
  "dynamics": {"type": "single_integrator"},
  "map": {"builtin": "three_agent"},
  "agents": [
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "1"},
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "2"},
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "3"}
  ],
  "omega": [10, 100],
  "initial_state": [2, -2, -2, 2, -1, 2.5, 0, 0, 0],
  "horizon": 60.0,
  "step": {"samples_per_period": 40, "max_dt": 0.01, "output_stride": 20},
  "nu_method": "closed_form",
  "amplitude_exponent": 0.5,
  "seed": 1,
  "probe": {"deltas": [0.25, 1.0], "epsilon": 0.5, "t_f": 40.0,
            "horizon": 60.0, "boundary_samples": 6}
}
)json";

constexpr std::string_view kSec6Unicycle = R"json({
  "name": "sec6_unicycle",
  "dynamics": {"type": "unicycle", "Omega": 1.0},
  "map": {"builtin": "three_agent"},
  "agents": [
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "1", "d": "1"},
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "2", "d": "2"},
    {"c": 0.3, "alpha": 1.0, "h": 1.0, "a": "3", "d": "3"}
  ],
  "omega": [10, 80],
  "initial_state": [2, -2, -2, 2, -1, 2.5, 0, 0, 0],
  "horizon": 60.0,
  "step": {"samples_per_period": 40, "max_dt": 0.01, "output_stride": 20},
  "nu_method": "closed_form",
  "amplitude_exponent": 0.5,
  "seed": 1,
  "probe": {"deltas": [0.25, 1.0], "epsilon": 0.5, "t_f": 40.0,
            "horizon": 60.0, "boundary_samples": 6}
}
)json";

int LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

// Best-effort line of the first occurrence of "key".
int LineOfKey(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 0 : LineOf(text, pos);
}

class Reader {
 public:
  Reader(std::string_view text, bool strict, std::vector<std::string>* warnings)
      : text_(text), strict_(strict), warnings_(warnings) {}

  [[noreturn]] void Fail(const std::string& message, const std::string& key) const {
    const int line = LineOfKey(text_, key);
    throw ScenarioError(message, line);
  }

  void CheckKeys(const json& obj, const std::string& where,
                 std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) Fail(where + " must be an object", where);
    for (const auto& [key, value] : obj.items()) {
      const bool known = std::find(allowed.begin(), allowed.end(), key) != allowed.end();
      if (known) continue;
      const std::string msg = "unknown key '" + key + "' in " + where;
      if (strict_) Fail(msg, key);
      if (warnings_) warnings_->push_back(msg);
    }
  }

  const json& Require(const json& obj, const std::string& key,
                      const std::string& where) const {
    if (!obj.contains(key)) Fail("missing key '" + key + "' in " + where, where);
    return obj.at(key);
  }

  // Number or a rational/decimal string.
  double Real(const json& v, const std::string& key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        return Rational::Parse(v.get<std::string>()).value();
      } catch (const std::exception& e) {
        Fail("key '" + key + "': " + e.what(), key);
      }
    }
    Fail("key '" + key + "' must be a number or a rational string", key);
  }

  Rational Ratio(const json& v, const std::string& key) const {
    try {
      if (v.is_string()) return Rational::Parse(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
      if (v.is_number()) {
        std::ostringstream os;
        os.precision(15);
        os << v.get<double>();
        return Rational::Parse(os.str());
      }
    } catch (const std::exception& e) {
      Fail("key '" + key + "': " + e.what(), key);
    }
    Fail("key '" + key + "' must be a rational like \"p/q\"", key);
  }

  std::vector<double> Reals(const json& v, const std::string& key) const {
    if (!v.is_array()) Fail("key '" + key + "' must be an array", key);
    std::vector<double> out;
    for (const auto& item : v) out.push_back(Real(item, key));
    return out;
  }

  int Int(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) Fail("key '" + key + "' must be an integer", key);
    return v.get<int>();
  }

  std::string String(const json& v, const std::string& key) const {
    if (!v.is_string()) Fail("key '" + key + "' must be a string", key);
    return v.get<std::string>();
  }

 private:
  std::string_view text_;
  bool strict_;
  std::vector<std::string>* warnings_;
};

Vec ToVec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ScenarioError::ScenarioError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

ScenarioSpec ParseScenario(std::string_view text, bool strict,
                           std::vector<std::string>* warnings) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what(),
                        LineOf(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const Reader rd(text, strict, warnings);
  rd.CheckKeys(root, "scenario",
               {"name", "dynamics", "map", "agents", "omega", "initial_state",
                "horizon", "step", "nu_method", "amplitude_exponent", "seed",
                "probe"});

  ScenarioSpec spec;
  spec.name = rd.String(rd.Require(root, "name", "scenario"), "name");

  const json& dyn = rd.Require(root, "dynamics", "scenario");
  rd.CheckKeys(dyn, "dynamics", {"type", "Omega", "alpha"});
  const std::string type = rd.String(rd.Require(dyn, "type", "dynamics"), "type");
  if (type == "scalar") {
    spec.dynamics = DynamicsKind::kScalar;
    if (dyn.contains("alpha")) spec.scalar_alpha = rd.Real(dyn["alpha"], "alpha");
  } else if (type == "single_integrator") {
    spec.dynamics = DynamicsKind::kSingleIntegrator;
  } else if (type == "unicycle") {
    spec.dynamics = DynamicsKind::kUnicycle;
    spec.turn_rate = rd.Real(rd.Require(dyn, "Omega", "dynamics"), "Omega");
  } else {
    rd.Fail("unknown dynamics type '" + type + "'", "type");
  }
  if (spec.dynamics != DynamicsKind::kUnicycle && dyn.contains("Omega")) {
    rd.Fail("'Omega' is only valid for unicycle dynamics", "Omega");
  }
  if (spec.dynamics != DynamicsKind::kScalar && dyn.contains("alpha")) {
    rd.Fail("dynamics 'alpha' is only valid for the scalar loop; set alpha per agent",
            "alpha");
  }

  const json& map = rd.Require(root, "map", "scenario");
  rd.CheckKeys(map, "map", {"builtin", "quadratic", "scalar_quadratic"});
  if (map.size() != 1) rd.Fail("map needs exactly one selection", "map");
  if (map.contains("builtin")) {
    const std::string b = rd.String(map["builtin"], "builtin");
    if (b == "three_agent") {
      spec.map.kind = MapSpec::Kind::kThreeAgent;
    } else if (b == "three_agent_no_cross") {
      spec.map.kind = MapSpec::Kind::kThreeAgentNoCross;
    } else if (b == "sec2_scalar") {
      spec.map.kind = MapSpec::Kind::kScalarQuadratic;
      spec.map.peak = 1.0;
    } else {
      rd.Fail("unknown builtin map '" + b + "'", "builtin");
    }
  } else if (map.contains("quadratic")) {
    const json& q = map["quadratic"];
    rd.CheckKeys(q, "quadratic", {"Q", "xstar"});
    spec.map.kind = MapSpec::Kind::kQuadratic;
    spec.map.q_diag = ToVec(rd.Reals(rd.Require(q, "Q", "quadratic"), "Q"));
    spec.map.xstar = ToVec(rd.Reals(rd.Require(q, "xstar", "quadratic"), "xstar"));
  } else {
    const json& q = map["scalar_quadratic"];
    rd.CheckKeys(q, "scalar_quadratic", {"peak"});
    spec.map.kind = MapSpec::Kind::kScalarQuadratic;
    if (q.contains("peak")) spec.map.peak = rd.Real(q["peak"], "peak");
  }
  const bool scalar_map = spec.map.kind == MapSpec::Kind::kScalarQuadratic;
  if (scalar_map != (spec.dynamics == DynamicsKind::kScalar)) {
    rd.Fail("scalar dynamics require a scalar map and vice versa", "map");
  }

  if (root.contains("agents")) {
    if (spec.dynamics == DynamicsKind::kScalar) {
      rd.Fail("the scalar loop takes no agent blocks", "agents");
    }
    const json& agents = root["agents"];
    if (!agents.is_array() || agents.empty()) {
      rd.Fail("'agents' must be a non-empty array", "agents");
    }
    for (const json& a : agents) {
      rd.CheckKeys(a, "agent", {"c", "alpha", "h", "a", "d", "dithers"});
      AgentParams p;
      p.c = rd.Real(rd.Require(a, "c", "agent"), "c");
      p.alpha = rd.Real(rd.Require(a, "alpha", "agent"), "alpha");
      p.h = rd.Real(rd.Require(a, "h", "agent"), "h");
      p.a = rd.Ratio(rd.Require(a, "a", "agent"), "a");
      if (a.contains("d")) p.d = rd.Ratio(a["d"], "d");
      if (a.contains("dithers")) {
        const json& d = a["dithers"];
        if (!d.is_array() || d.size() != 2) {
          rd.Fail("'dithers' must list two kinds", "dithers");
        }
        for (int k = 0; k < 2; ++k) {
          try {
            const auto sig = DitherSignal::Parse(rd.String(d[k], "dithers"));
            if (sig.harmonic() != 1) {
              rd.Fail("agent dithers take bare kinds; harmonics come from 'a'",
                      "dithers");
            }
            p.dithers[k] = sig.kind();
          } catch (const InvalidArgument& e) {
            rd.Fail(e.what(), "dithers");
          }
        }
      }
      spec.agents.push_back(p);
    }
  } else if (spec.dynamics != DynamicsKind::kScalar) {
    rd.Fail("missing key 'agents' in scenario", "scenario");
  }

  spec.omegas = rd.Reals(rd.Require(root, "omega", "scenario"), "omega");
  spec.initial_state =
      ToVec(rd.Reals(rd.Require(root, "initial_state", "scenario"), "initial_state"));
  spec.horizon = rd.Real(rd.Require(root, "horizon", "scenario"), "horizon");
  if (!(spec.horizon > 0.0)) rd.Fail("horizon must be > 0", "horizon");

  if (root.contains("step")) {
    const json& s = root["step"];
    rd.CheckKeys(s, "step", {"samples_per_period", "max_dt", "output_stride"});
    if (s.contains("samples_per_period")) {
      spec.step.samples_per_period = rd.Int(s["samples_per_period"], "samples_per_period");
    }
    if (s.contains("max_dt")) spec.step.max_dt = rd.Real(s["max_dt"], "max_dt");
    if (s.contains("output_stride")) {
      spec.step.output_stride = rd.Int(s["output_stride"], "output_stride");
    }
    if (spec.step.samples_per_period < 1 || !(spec.step.max_dt > 0.0) ||
        spec.step.output_stride < 1) {
      rd.Fail("step values must be positive", "step");
    }
  }
  if (root.contains("nu_method")) {
    try {
      spec.nu = NuOptions::Parse(rd.String(root["nu_method"], "nu_method"));
    } catch (const InvalidArgument& e) {
      rd.Fail(e.what(), "nu_method");
    }
  }
  if (root.contains("amplitude_exponent")) {
    spec.amplitude_exponent = rd.Real(root["amplitude_exponent"], "amplitude_exponent");
    if (spec.amplitude_exponent != 0.5 && spec.amplitude_exponent != 1.0) {
      rd.Fail("amplitude_exponent must be 0.5 or 1.0", "amplitude_exponent");
    }
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) rd.Fail("seed must be a non-negative integer", "seed");
    spec.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("probe")) {
    const json& p = root["probe"];
    rd.CheckKeys(p, "probe", {"deltas", "epsilon", "t_f", "horizon", "boundary_samples"});
    if (p.contains("deltas")) spec.probe.deltas = rd.Reals(p["deltas"], "deltas");
    if (p.contains("epsilon")) spec.probe.epsilon = rd.Real(p["epsilon"], "epsilon");
    if (p.contains("t_f")) spec.probe.t_f = rd.Real(p["t_f"], "t_f");
    if (p.contains("horizon")) spec.probe.horizon = rd.Real(p["horizon"], "horizon");
    if (p.contains("boundary_samples")) {
      spec.probe.boundary_samples = rd.Int(p["boundary_samples"], "boundary_samples");
    }
  }

  // Structural consistency.
  const int expected_dim = spec.dynamics == DynamicsKind::kScalar
                               ? 1
                               : 3 * static_cast<int>(spec.agents.size());
  if (spec.initial_state.size() != expected_dim) {
    rd.Fail("initial_state has length " + std::to_string(spec.initial_state.size()) +
                ", expected " + std::to_string(expected_dim),
            "initial_state");
  }
  if (spec.map.kind == MapSpec::Kind::kQuadratic &&
      spec.map.xstar.size() != 2 * static_cast<int>(spec.agents.size())) {
    rd.Fail("quadratic xstar must have 2 entries per agent", "xstar");
  }
  if ((spec.map.kind == MapSpec::Kind::kThreeAgent ||
       spec.map.kind == MapSpec::Kind::kThreeAgentNoCross) &&
      spec.agents.size() != 3) {
    rd.Fail("the three_agent map needs exactly three agents", "agents");
  }
  for (double w : spec.omegas) {
    if (!(w > 0.0)) rd.Fail("omega values must be > 0", "omega");
  }
  if (spec.omegas.empty()) rd.Fail("omega list is empty", "omega");
  return spec;
}

std::vector<std::string> BuiltinScenarioNames() {
  return {"sec2_scalar", "sec6_single_integrator", "sec6_unicycle"};
}

std::optional<std::string> BuiltinScenarioText(std::string_view name) {
  if (name == "sec2_scalar") return std::string(kSec2Scalar);
  if (name == "sec6_single_integrator") return std::string(kSec6SingleIntegrator);
  if (name == "sec6_unicycle") return std::string(kSec6Unicycle);
  return std::nullopt;
}

ScenarioSpec LoadScenario(const std::string& name_or_path, bool strict,
                          std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(name_or_path)) {
    std::ifstream in(name_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return ParseScenario(buf.str(), strict, warnings);
  }
  if (auto text = BuiltinScenarioText(name_or_path)) {
    return ParseScenario(*text, strict, warnings);
  }
  throw ScenarioError("no scenario file or builtin named '" + name_or_path + "'");
}

Scenario::Scenario(ScenarioSpec spec) : spec_(std::move(spec)) {
  switch (spec_.map.kind) {
    case MapSpec::Kind::kThreeAgent: game_ = ThreeAgentGame(false); break;
    case MapSpec::Kind::kThreeAgentNoCross: game_ = ThreeAgentGame(true); break;
    case MapSpec::Kind::kQuadratic:
      game_ = QuadraticGame(spec_.map.q_diag, spec_.map.xstar);
      break;
    case MapSpec::Kind::kScalarQuadratic:
      scalar_map_ = ScalarQuadraticMap(spec_.map.peak);
      break;
  }
  if (game_) {
    ValidateAgentParams(*game_, spec_.agents,
                        spec_.dynamics == DynamicsKind::kUnicycle);
  }
}

int Scenario::dim() const {
  return spec_.dynamics == DynamicsKind::kScalar
             ? 1
             : 3 * static_cast<int>(spec_.agents.size());
}

InputAffineSystem Scenario::System(double omega) const {
  switch (spec_.dynamics) {
    case DynamicsKind::kScalar:
      return BuildScalarScheme(scalar_map_, spec_.scalar_alpha, omega,
                               spec_.amplitude_exponent);
    case DynamicsKind::kSingleIntegrator:
      return BuildSingleIntegrator(*game_, spec_.agents, omega,
                                   spec_.amplitude_exponent);
    case DynamicsKind::kUnicycle:
      return BuildUnicycle(*game_, spec_.agents, spec_.turn_rate, omega,
                           spec_.amplitude_exponent);
  }
  throw InvalidArgument("unknown dynamics");
}

LieBracketSystem Scenario::GenericLie() const {
  InputAffineSystem sys = System(1.0);
  return BuildLieBracketSystem(sys, spec_.nu);
}

VectorField Scenario::AnalyticLie() const {
  switch (spec_.dynamics) {
    case DynamicsKind::kScalar:
      return AnalyticLieScalar(scalar_map_, spec_.scalar_alpha);
    case DynamicsKind::kSingleIntegrator:
      return AnalyticLieSingleIntegrator(*game_, spec_.agents);
    case DynamicsKind::kUnicycle:
      return AnalyticLieUnicycle(*game_, spec_.agents, spec_.turn_rate);
  }
  throw InvalidArgument("unknown dynamics");
}

Vec Scenario::Target() const {
  if (spec_.dynamics == DynamicsKind::kScalar) {
    Vec t(1);
    t[0] = spec_.map.peak;
    return t;
  }
  return TargetState(*game_, spec_.agents);
}

std::vector<DitherSignal> Scenario::Dithers() const {
  std::vector<DitherSignal> out;
  for (const auto& ch : System(1.0).channels()) out.push_back(ch.dither);
  return out;
}

SeekingProblem Scenario::Problem(bool analytic_lie) const {
  SeekingProblem problem;
  problem.name = spec_.name;
  const Scenario self = *this;
  problem.oscillatory = [self](double omega) {
    return AssembleRhs(self.System(omega));
  };
  const bool sinusoidal = std::all_of(
      spec_.agents.begin(), spec_.agents.end(), [](const AgentParams& p) {
        return p.dithers[0] == DitherKind::kSine && p.dithers[1] == DitherKind::kCosine;
      });
  if (spec_.amplitude_exponent == 0.5) {
    problem.lie = analytic_lie && sinusoidal ? AnalyticLie() : GenericLie().field;
  }
  const Vec target = Target();
  problem.distance_to_target = [target](const Vec& x) {
    return (x - target).norm();
  };
  return problem;
}

}  // namespace lbes
