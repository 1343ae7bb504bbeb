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

#include <cmath>
#include <numbers>
#include <random>

#include "lbes/seekers.hpp"
#include "lbes/sim.hpp"

using namespace lbes;
using std::numbers::pi;

namespace {

Vec V(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const Vec kX0 = V({2, -2, -2, 2, -1, 2.5, 0, 0, 0});

std::vector<AgentParams> ThreeAgents(double c = 0.3) {
  std::vector<AgentParams> p(3);
  for (int i = 0; i < 3; ++i) {
    p[i].a = Rational(i + 1);
    p[i].c = c;
  }
  return p;
}

SeekingProblem SingleIntegratorProblem(double c = 0.3) {
  const auto game = ThreeAgentGame();
  const auto params = ThreeAgents(c);
  const Vec target = TargetState(game, params);
  return {"single_integrator",
          [game, params](double w) { return AssembleRhs(BuildSingleIntegrator(game, params, w)); },
          AnalyticLieSingleIntegrator(game, params),
          [target](const Vec& x) { return (x - target).norm(); }};
}

SeekingProblem ScalarProblem() {
  const auto f = ScalarQuadraticMap(1.0);
  return {"scalar", [f](double w) { return AssembleRhs(BuildScalarScheme(f, 1.0, w)); },
          AnalyticLieScalar(f, 1.0), [](const Vec& x) { return std::abs(x[0] - 1.0); }};
}

StepPolicy Policy(double max_dt = 1e-2, int stride = 1) {
  StepPolicy p;
  p.max_dt = max_dt;
  p.output_stride = stride;
  return p;
}

}  // namespace

TEST_CASE("zero field gives a constant trajectory") {
  const Vec x0 = V({1, -2, 3});
  const auto traj = Integrate(VectorField::Zero(3), x0, 0.0, 2.0, Policy());
  for (const Vec& x : traj.states) CHECK((x - x0).norm() == 0.0);
}

TEST_CASE("linear decay matches the exponential") {
  const auto field = VectorField::Linear(-Mat::Identity(1, 1));
  const auto traj = Integrate(field, V({1.0}), 0.0, 1.0, Policy(1e-3));
  CHECK(traj.t_end() == doctest::Approx(1.0));
  CHECK(std::abs(traj.states.back()[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("rk4 global error is fourth order") {
  const auto field = VectorField::Linear(-Mat::Identity(1, 1));
  auto err = [&](double dt) {
    return std::abs(Integrate(field, V({1.0}), 0.0, 1.0, Policy(dt)).states.back()[0] -
                    std::exp(-1.0));
  };
  const double ratio = err(0.1) / err(0.025);
  CHECK(ratio > 256.0 / 2);
  CHECK(ratio < 256.0 * 2);
}

TEST_CASE("step policy resolves the fastest period") {
  StepPolicy p;
  CHECK(ResolveStep(p, 0.0) == p.max_dt);
  CHECK(ResolveStep(p, 300.0) == doctest::Approx(2 * pi / (300.0 * 40)));
}

TEST_CASE("output stride and uniform spacing") {
  const auto field = VectorField::Linear(-Mat::Identity(2, 2));
  const auto traj = Integrate(field, V({1, 1}), 0.5, 1.0, Policy(1e-3, 10));
  CHECK(traj.steps % 10 == 0);
  CHECK(traj.states.size() == static_cast<std::size_t>(traj.steps / 10 + 1));
  CHECK(traj.dt == doctest::Approx(1e-2));
  CHECK(traj.time(0) == 0.5);
  CHECK(traj.t_end() == doctest::Approx(1.5));
}

TEST_CASE("divergence truncates the run") {
  const VectorField blowup(1, [](double, const Vec& x) { return V({x[0] * x[0]}); });
  const auto traj = Integrate(blowup, V({1.0}), 0.0, 3.0, Policy(1e-2));
  CHECK(traj.diverged);
  // Blow-up happens at t = 1; a few steps of overshoot are expected.
  CHECK(traj.t_end() < 1.05);
  for (const Vec& x : traj.states) CHECK(AllFinite(x));
}

TEST_CASE("non-positive horizons are rejected") {
  CHECK_THROWS_AS(Integrate(VectorField::Zero(1), V({0.0}), 0.0, 0.0, Policy()), InvalidArgument);
  CHECK_THROWS_AS(Integrate(VectorField::Zero(1), V({0.0}), 0.0, -1.0, Policy()), InvalidArgument);
}

TEST_CASE("scalar loop approaches the maximizer") {
  const auto p = ScalarProblem();
  const auto traj = Integrate(p.oscillatory(100.0), V({0.0}), 0.0, 10.0, Policy());
  // The averaged flow z' = 1 - z from 0 gives z(10) = 1 - exp(-10).
  CHECK(std::abs(traj.states.back()[0] - (1 - std::exp(-10.0))) < 0.2);
}

TEST_CASE("sup distance") {
  const auto field = VectorField::Linear(-Mat::Identity(2, 2));
  const auto a = Integrate(field, V({1, 0}), 0.0, 1.0, Policy());
  CHECK(SupDistance(a, a) == 0.0);
  const Vec v = V({0.3, -0.4});
  const auto c1 = Integrate(VectorField::Zero(2), V({1, 1}), 0.0, 1.0, Policy());
  const auto c2 = Integrate(VectorField::Zero(2), V({1, 1}) + v, 0.0, 1.0, Policy());
  CHECK(SupDistance(c1, c2) == doctest::Approx(v.norm()));
  CHECK(SupDistance(c1, c2, Interval{0.2, 0.4}) == doctest::Approx(v.norm()));
  CHECK_THROWS_AS(SupDistance(c1, c2, Interval{5.0, 6.0}), InvalidArgument);
  const auto late = Integrate(VectorField::Zero(2), V({1, 1}), 0.5, 1.0, Policy());
  CHECK_THROWS_AS(SupDistance(c1, late), InvalidArgument);
}

TEST_CASE("paired run against the averaged system") {
  const auto p = SingleIntegratorProblem();
  const auto r10 = IntegratePair(p.oscillatory(10.0), p.lie, kX0, 0.0, 10.0, Policy());
  const auto r100 = IntegratePair(p.oscillatory(100.0), p.lie, kX0, 0.0, 10.0, Policy());
  CHECK(r100.sup_error > 0.0);
  CHECK(r100.sup_error < r10.sup_error);
  // The stored-sample distance never exceeds the per-step measure.
  CHECK(SupDistance(r100.x, r100.z) <= r100.sup_error + 1e-12);
}

TEST_CASE("sweep on the three-agent scheme") {
  const std::vector<double> omegas{10.0, 100.0};
  const auto rep = OmegaSweep(SingleIntegratorProblem(), omegas, kX0, 20.0, Policy());
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.records[1].sup_error < rep.records[0].sup_error);
  CHECK(rep.monotone_non_increasing);
  CHECK_FALSE(rep.records[0].diverged);
}

TEST_CASE("sweep of the averaged system against itself") {
  auto p = ScalarProblem();
  const VectorField lie = p.lie;
  p.oscillatory = [lie](double) { return lie; };
  const std::vector<double> omegas{10.0, 100.0, 1000.0};
  const auto rep = OmegaSweep(p, omegas, V({0.0}), 5.0, Policy());
  for (const auto& r : rep.records) CHECK(r.sup_error == 0.0);
  CHECK(rep.monotone_non_increasing);
}

TEST_CASE("scalar sweep decays like one over the square root") {
  const std::vector<double> omegas{100.0, 400.0, 1600.0};
  const auto rep = OmegaSweep(ScalarProblem(), omegas, V({0.0}), 10.0, Policy());
  CHECK(rep.monotone_non_increasing);
  for (std::size_t k = 1; k < omegas.size(); ++k) {
    const double ratio = rep.records[k - 1].sup_error / rep.records[k].sup_error;
    CHECK(ratio > 2.0 / 3.0);
    CHECK(ratio < 2.0 * 3.0);
  }
  CHECK(rep.decay_slope == doctest::Approx(-0.5).epsilon(0.4));
}

TEST_CASE("sweep preconditions") {
  const std::vector<double> down{100.0, 10.0};
  CHECK_THROWS_AS(OmegaSweep(ScalarProblem(), down, V({0.0}), 1.0, Policy()), InvalidArgument);
  const std::vector<double> one{100.0};
  CHECK_THROWS_AS(OmegaSweep(ScalarProblem(), one, V({0.0}), 1.0, Policy()), InvalidArgument);
}

TEST_CASE("sweeps are deterministic") {
  const std::vector<double> omegas{50.0, 200.0};
  const auto a = OmegaSweep(ScalarProblem(), omegas, V({0.0}), 3.0, Policy());
  const auto b = OmegaSweep(ScalarProblem(), omegas, V({0.0}), 3.0, Policy());
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    CHECK(a.records[k].sup_error == b.records[k].sup_error);
    CHECK(a.records[k].final_distance_to_target == b.records[k].final_distance_to_target);
  }
}

TEST_CASE("log-log slope fit") {
  const std::vector<double> x{1, 10, 100, 1000};
  const std::vector<double> y{3, 0.3, 0.03, 0.003};
  CHECK(FitLogLogSlope(x, y) == doctest::Approx(-1.0));
  const std::vector<double> z{1, 0, 1, 2};
  CHECK(std::isnan(FitLogLogSlope(x, z)));
}

TEST_CASE("lyapunov function grows along the averaged flow") {
  const auto game = ThreeAgentGame();
  const auto p = SingleIntegratorProblem();
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1);
  for (int s = 0; s < 20; ++s) {
    Vec dir(9);
    for (int i = 0; i < 9; ++i) dir[i] = g(rng);
    const Vec x0 = kX0 + dir.normalized() * std::pow(u(rng), 1.0 / 9.0);
    double prev = -1e300;
    bool monotone = true;
    Integrate(p.lie, x0, 0.0, 30.0, Policy(), [&](double, const Vec& z) {
      const double f = game.potential(z.head(6));
      if (f < prev - 1e-10) monotone = false;
      prev = f;
    });
    CHECK(monotone);
  }
}

TEST_CASE("filter states settle near the map values") {
  const auto game = ThreeAgentGame();
  const auto params = ThreeAgents();
  const auto p = SingleIntegratorProblem();
  const auto traj = Integrate(p.lie, kX0, 0.0, 60.0, Policy(1e-2, 100));
  const Vec z = traj.states.back();
  const Vec eq = FilterEquilibrium(game, params, z.head(6));
  CHECK((z.tail(3) - eq).lpNorm<Eigen::Infinity>() < 1e-3);
  CHECK((z.head(6) - game.known_maximizer.value()).norm() < 1e-2);
}

TEST_CASE("shell directions") {
  const auto a = ShellDirections(9, 16, 1);
  const auto b = ShellDirections(9, 16, 1);
  const auto c = ShellDirections(9, 16, 2);
  REQUIRE(a.size() == 16);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].norm() == doctest::Approx(1.0));
    CHECK((a[k] - b[k]).norm() == 0.0);
  }
  CHECK((a[0] - c[0]).norm() > 0.0);
}

TEST_CASE("probe of the averaged system") {
  const auto p = ScalarProblem();
  ProbeConfig cfg;
  cfg.target = V({1.0});
  cfg.deltas = {0.5, 1.0};
  cfg.epsilon = 0.1;
  cfg.horizon = 10.0;
  cfg.boundary_samples = 2;
  cfg.use_lie = true;
  double last = 1e9;
  for (double tf : {1.0, 3.0, 6.0}) {
    cfg.t_f = tf;
    const auto rep = StabilityProbe(p, cfg);
    double worst = 0.0;
    for (const auto& cell : rep.cells) {
      CHECK(cell.containment <= cell.delta + 1e-12);
      worst = std::max(worst, cell.attraction);
    }
    CHECK(worst < last);
    last = worst;
  }
  CHECK(last < cfg.epsilon);
}

TEST_CASE("probe contains small perturbations at high frequency") {
  ProbeConfig cfg;
  cfg.target = TargetState(ThreeAgentGame(), ThreeAgents());
  cfg.deltas = {0.05};
  cfg.epsilon = 0.5;
  cfg.omegas = {400.0};
  cfg.t_f = 5.0;
  cfg.horizon = 10.0;
  cfg.boundary_samples = 2;
  const auto rep = StabilityProbe(SingleIntegratorProblem(), cfg);
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].stable);
  CHECK(rep.cells[0].diverged == 0);
}

TEST_CASE("probe flags missing feedback") {
  ProbeConfig cfg;
  cfg.target = TargetState(ThreeAgentGame(), ThreeAgents(0.0));
  cfg.deltas = {1.0};
  cfg.epsilon = 0.5;
  cfg.omegas = {50.0};
  cfg.t_f = 10.0;
  cfg.horizon = 20.0;
  cfg.boundary_samples = 4;
  const auto rep = StabilityProbe(SingleIntegratorProblem(0.0), cfg);
  REQUIRE(rep.cells.size() == 1);
  CHECK_FALSE(rep.cells[0].attractive);
}

TEST_CASE("averaging residual of a sine") {
  const std::vector<double> omegas{100.0, 1000.0, 10000.0};
  const auto rep = AveragingDecayCheck(DitherSignal::Sine(1), 0.0, 1.0, omegas);
  for (const auto& r : rep.records) {
    CHECK(r.endpoint_error == doctest::Approx(std::abs(1 - std::cos(r.omega)) / r.omega).epsilon(1e-6));
    CHECK(r.sup_error <= 2.0 / r.omega * (1 + 1e-9));
  }
  CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("averaging residual of a square wave") {
  const std::vector<double> omegas{100.0, 1000.0, 10000.0};
  const auto rep = AveragingDecayCheck(DitherSignal::Square(1), 0.0, 1.0, omegas);
  CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("whole periods leave no averaging residual") {
  const std::vector<double> omegas{2 * pi * 10, 2 * pi * 100};
  const auto rep = AveragingDecayCheck(DitherSignal::Sine(1), 0.0, 1.0, omegas);
  for (const auto& r : rep.records) CHECK(std::abs(r.endpoint_error) < 1e-8);
}

TEST_CASE("paired averaging residual uses the bracket coefficient") {
  const std::vector<double> omegas{100.0, 1000.0, 10000.0};
  const auto rep = AveragingDecayCheck(DitherSignal::Cosine(1), 0.0, 1.0, omegas,
                                       DitherSignal::Sine(1));
  CHECK(rep.nu == doctest::Approx(0.5));
  CHECK(rep.paired_slope == doctest::Approx(-1.0).epsilon(0.2));
}
