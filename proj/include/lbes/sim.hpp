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
#ifndef LBES_SIM_HPP_
#define LBES_SIM_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbes/dynamics.hpp"
#include "lbes/signals.hpp"

namespace lbes {

// Fixed-step policy. The step is min(max_dt, 2 pi / (rate * K)) where rate is
// the field's fastest angular rate and K = samples_per_period, then shrunk so
// the horizon is an exact multiple of output_stride steps.
struct StepPolicy {
  int samples_per_period = 40;
  double max_dt = 1e-2;
  int output_stride = 1;
};

double ResolveStep(const StepPolicy& policy, double rate);

// States sampled at t0 + k * dt (dt is the output spacing, i.e. the
// integration step times the output stride).
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<Vec> states;
  std::int64_t steps = 0;
  bool diverged = false;

  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  double t_end() const { return states.empty() ? t0 : time(states.size() - 1); }
  // Linear interpolation; t is clamped to the stored span.
  Vec At(double t) const;
};

using StepObserver = std::function<void(double t, const Vec& x)>;

// Classical RK4. A non-finite state stops the run and sets diverged; the
// offending state is not stored. The observer, if any, sees every accepted
// step including the initial state.
Trajectory Integrate(const VectorField& field, const Vec& x0, double t0,
                     double horizon, const StepPolicy& policy,
                     const StepObserver& observer = nullptr);

struct Interval {
  double lo;
  double hi;
};

// Max Euclidean distance over a's grid points inside the interval (default:
// a's whole span), with b linearly interpolated onto a's times. Throws if the
// trajectories start at different times or the interval misses a's span.
double SupDistance(const Trajectory& a, const Trajectory& b,
                   std::optional<Interval> interval = std::nullopt);

// An oscillatory system and its averaged counterpart run in lockstep on the
// oscillatory system's step. sup_error is measured at every integration
// step, not only at stored samples.
struct PairedRun {
  Trajectory x;
  Trajectory z;
  double sup_error = 0.0;
  bool diverged = false;
};

PairedRun IntegratePair(const VectorField& oscillatory, const VectorField& lie,
                        const Vec& x0, double t0, double horizon,
                        const StepPolicy& policy);

// What the sweep and probe operate on: a family of oscillatory fields indexed
// by omega, the omega-free Lie field, and a distance to the target set.
struct SeekingProblem {
  std::string name;
  std::function<VectorField(double omega)> oscillatory;
  VectorField lie;
  std::function<double(const Vec&)> distance_to_target;
};

struct SweepRecord {
  double omega = 0.0;
  double sup_error = 0.0;
  double final_distance_to_target = 0.0;
  double lie_final_distance_to_target = 0.0;
  std::int64_t steps = 0;
  double wall_time_s = 0.0;
  bool diverged = false;
};

struct SweepReport {
  std::vector<SweepRecord> records;
  // sup_error non-increasing in omega, allowing one inversion smaller than
  // 1e-3 absolute.
  bool monotone_non_increasing = false;
  int inversions = 0;
  // Least-squares slope of log sup_error against log omega (NaN if any
  // error is zero or a cell diverged).
  double decay_slope = 0.0;
};

// Omega values must be strictly increasing with at least two entries. Cells
// run concurrently; divergence is recorded, not fatal.
SweepReport OmegaSweep(const SeekingProblem& problem,
                       std::span<const double> omegas, const Vec& x0,
                       double horizon, const StepPolicy& policy,
                       double t0 = 0.0);

// Least-squares slope of log y against log x. Needs >= 2 points, all > 0.
double FitLogLogSlope(std::span<const double> x, std::span<const double> y);

struct ProbeConfig {
  Vec target;                   // the target set is this single point
  std::vector<double> deltas;   // shell radii of initial conditions
  double epsilon = 0.1;
  std::vector<double> omegas;   // ignored when use_lie is set
  double t_f = 10.0;            // attraction is judged on [t0 + t_f, horizon]
  double horizon = 20.0;
  int boundary_samples = 16;
  std::uint64_t seed = 1;
  StepPolicy policy;
  bool use_lie = false;         // probe the Lie field itself
};

struct ProbeCell {
  double delta = 0.0;
  double omega = 0.0;  // 0 for the Lie field
  double containment = 0.0;  // max over samples of sup_t dist(x(t), S)
  double attraction = 0.0;   // max over samples of sup_{t >= t_f} dist
  bool stable = false;       // containment <= epsilon
  bool attractive = false;   // attraction <= epsilon
  int diverged = 0;
};

// Verdicts read "consistent with / not falsified at the tested omega": a
// finite sweep cannot establish the for-all-omega quantifiers.
struct ProbeReport {
  double epsilon = 0.0;
  std::vector<ProbeCell> cells;
};

ProbeReport StabilityProbe(const SeekingProblem& problem,
                           const ProbeConfig& config);

// Deterministic unit directions in R^dim from a Cranley-Patterson rotated
// Halton sequence pushed through the inverse normal CDF.
std::vector<Vec> ShellDirections(int dim, int count, std::uint64_t seed);

struct DecayRecord {
  double omega = 0.0;
  // sup over s in [t0, t] of |int_t0^s (u(r, omega r) - mean) dr|
  double sup_error = 0.0;
  // the same integral evaluated at s = t
  double endpoint_error = 0.0;
  // sup over s of |int_t0^s (u_o(r, omega r) * omega int_t0^r u(q, omega q) dq
  //   - nu) dr|, with u_o the partner signal
  double paired_sup_error = 0.0;
};

struct DecayReport {
  std::vector<DecayRecord> records;
  double slope = 0.0;
  double paired_slope = 0.0;
  double nu = 0.0;
};

// Averaging residuals measured by cumulative cell-wise Simpson in the phase
// variable, with nodes_per_period cells per dither period plus a cell edge at
// every breakpoint of either signal. The partner (outer signal of the paired
// residual) defaults to u itself. u must be time-invariant.
DecayReport AveragingDecayCheck(const DitherSignal& u, double t0, double t,
                                std::span<const double> omegas,
                                const std::optional<DitherSignal>& partner =
                                    std::nullopt,
                                int nodes_per_period = 256);

}  // namespace lbes

#endif  // LBES_SIM_HPP_
