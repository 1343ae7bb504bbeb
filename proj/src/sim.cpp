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
#include "lbes/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "lbes/liebracket.hpp"
#include "quadrature.hpp"

namespace lbes {
namespace {

struct StepPlan {
  std::int64_t steps;
  double dt;
  int stride;
};

StepPlan PlanSteps(const StepPolicy& policy, double rate, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("integration horizon must be positive");
  }
  if (policy.output_stride < 1) throw InvalidArgument("output stride must be >= 1");
  const double target = ResolveStep(policy, rate);
  const int stride = policy.output_stride;
  auto steps = static_cast<std::int64_t>(std::ceil(horizon / target - 1e-9));
  steps = std::max<std::int64_t>(steps, 1);
  steps = (steps + stride - 1) / stride * stride;
  return {steps, horizon / static_cast<double>(steps), stride};
}

void Rk4Step(const VectorField& f, double t, double dt, Vec& x) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vec k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vec k4 = f(t + dt, x + dt * k3);
  x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Runs fn(0..count-1) on up to hardware_concurrency threads; results keep
// index order.
template <typename Fn>
auto ParallelMap(std::size_t count, Fn fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(count);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) results[k] = fn(k);
    return results;
  }
  std::vector<std::future<void>> futures;
  for (std::size_t w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < count; k += workers) results[k] = fn(k);
    }));
  }
  for (auto& f : futures) f.get();
  return results;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::vector<int> FirstPrimes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double RadicalInverse(std::uint64_t k, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

double ResolveStep(const StepPolicy& policy, double rate) {
  if (!(policy.max_dt > 0.0)) throw InvalidArgument("max_dt must be > 0");
  if (policy.samples_per_period < 1) {
    throw InvalidArgument("samples_per_period must be >= 1");
  }
  if (rate <= 0.0) return policy.max_dt;
  return std::min(policy.max_dt, kTwoPi / (rate * policy.samples_per_period));
}

Vec Trajectory::At(double t) const {
  if (states.empty()) throw InvalidArgument("empty trajectory");
  if (states.size() == 1 || dt <= 0.0) return states.front();
  const double s = std::clamp((t - t0) / dt, 0.0,
                              static_cast<double>(states.size() - 1));
  const auto k = static_cast<std::size_t>(std::floor(s));
  if (k + 1 >= states.size()) return states.back();
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * states[k] + w * states[k + 1];
}

Trajectory Integrate(const VectorField& field, const Vec& x0, double t0,
                     double horizon, const StepPolicy& policy,
                     const StepObserver& observer) {
  const StepPlan plan = PlanSteps(policy, field.rate(), horizon);
  Trajectory traj;
  traj.t0 = t0;
  traj.dt = plan.dt * plan.stride;
  traj.states.reserve(static_cast<std::size_t>(plan.steps / plan.stride) + 1);
  Vec x = x0;
  if (!x.allFinite()) throw InvalidArgument("non-finite initial state");
  traj.states.push_back(x);
  if (observer) observer(t0, x);
  for (std::int64_t k = 0; k < plan.steps; ++k) {
    const double t = t0 + static_cast<double>(k) * plan.dt;
    Rk4Step(field, t, plan.dt, x);
    if (!x.allFinite()) {
      traj.diverged = true;
      break;
    }
    ++traj.steps;
    if (observer) observer(t0 + static_cast<double>(k + 1) * plan.dt, x);
    if ((k + 1) % plan.stride == 0) traj.states.push_back(x);
  }
  return traj;
}

double SupDistance(const Trajectory& a, const Trajectory& b,
                   std::optional<Interval> interval) {
  if (a.states.empty() || b.states.empty()) {
    throw InvalidArgument("sup_distance of an empty trajectory");
  }
  if (std::abs(a.t0 - b.t0) > 1e-12 * std::max(1.0, std::abs(a.t0))) {
    throw InvalidArgument("sup_distance needs trajectories with the same t0");
  }
  const Interval span = interval.value_or(Interval{a.t0, a.t_end()});
  if (span.hi < span.lo || span.hi < a.t0 || span.lo > a.t_end()) {
    throw InvalidArgument("sup_distance interval is disjoint from the trajectory");
  }
  const bool same_grid = std::abs(a.dt - b.dt) <= 1e-15 * std::max(1.0, a.dt);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    const double t = a.time(k);
    if (t < span.lo - 1e-12 || t > span.hi + 1e-12) continue;
    const Vec other =
        same_grid && k < b.states.size() ? b.states[k] : b.At(t);
    worst = std::max(worst, (a.states[k] - other).norm());
  }
  return worst;
}

PairedRun IntegratePair(const VectorField& oscillatory, const VectorField& lie,
                        const Vec& x0, double t0, double horizon,
                        const StepPolicy& policy) {
  if (oscillatory.dim() != lie.dim()) {
    throw InvalidArgument("paired fields have different dimensions");
  }
  const StepPlan plan =
      PlanSteps(policy, std::max(oscillatory.rate(), lie.rate()), horizon);
  PairedRun run;
  for (Trajectory* tr : {&run.x, &run.z}) {
    tr->t0 = t0;
    tr->dt = plan.dt * plan.stride;
    tr->states.reserve(static_cast<std::size_t>(plan.steps / plan.stride) + 1);
    tr->states.push_back(x0);
  }
  Vec x = x0;
  Vec z = x0;
  for (std::int64_t k = 0; k < plan.steps; ++k) {
    const double t = t0 + static_cast<double>(k) * plan.dt;
    Rk4Step(oscillatory, t, plan.dt, x);
    Rk4Step(lie, t, plan.dt, z);
    if (!x.allFinite() || !z.allFinite()) {
      run.diverged = true;
      run.x.diverged = !x.allFinite();
      run.z.diverged = !z.allFinite();
      break;
    }
    ++run.x.steps;
    ++run.z.steps;
    run.sup_error = std::max(run.sup_error, (x - z).norm());
    if ((k + 1) % plan.stride == 0) {
      run.x.states.push_back(x);
      run.z.states.push_back(z);
    }
  }
  if (run.diverged) run.sup_error = std::numeric_limits<double>::infinity();
  return run;
}

double FitLogLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("slope fit needs >= 2 paired points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0) || !std::isfinite(y[k])) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("slope fit needs distinct x values");
  return (n * sxy - sx * sy) / denom;
}

SweepReport OmegaSweep(const SeekingProblem& problem,
                       std::span<const double> omegas, const Vec& x0,
                       double horizon, const StepPolicy& policy, double t0) {
  if (omegas.size() < 2) throw InvalidArgument("omega sweep needs >= 2 values");
  for (std::size_t k = 1; k < omegas.size(); ++k) {
    if (!(omegas[k] > omegas[k - 1])) {
      throw InvalidArgument("omega values must be strictly increasing");
    }
  }
  if (!(omegas.front() > 0.0)) throw InvalidArgument("omega must be > 0");

  SweepReport report;
  report.records = ParallelMap(omegas.size(), [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.omega = omegas[k];
    const VectorField field = problem.oscillatory(omegas[k]);
    const PairedRun run =
        IntegratePair(field, problem.lie, x0, t0, horizon, policy);
    rec.sup_error = run.sup_error;
    rec.diverged = run.diverged;
    rec.steps = run.x.steps;
    if (problem.distance_to_target) {
      rec.final_distance_to_target =
          run.x.diverged ? std::numeric_limits<double>::infinity()
                         : problem.distance_to_target(run.x.states.back());
      rec.lie_final_distance_to_target =
          problem.distance_to_target(run.z.states.back());
    }
    rec.wall_time_s = Seconds(start);
    return rec;
  });

  std::vector<double> xs;
  std::vector<double> ys;
  bool any_bad = false;
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const auto& r = report.records[k];
    xs.push_back(r.omega);
    ys.push_back(r.sup_error);
    any_bad = any_bad || r.diverged;
  }
  bool monotone = !any_bad;
  int small_inversions = 0;
  for (std::size_t k = 1; k < ys.size(); ++k) {
    const double increase = ys[k] - ys[k - 1];
    if (increase > 0.0) {
      ++report.inversions;
      if (increase < 1e-3) {
        ++small_inversions;
      } else {
        monotone = false;
      }
    }
  }
  report.monotone_non_increasing = monotone && small_inversions <= 1;
  report.decay_slope =
      any_bad ? std::numeric_limits<double>::quiet_NaN() : FitLogLogSlope(xs, ys);
  return report;
}

std::vector<Vec> ShellDirections(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw InvalidArgument("bad shell sampling request");
  const auto primes = FirstPrimes(dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = unit(rng);
  std::vector<Vec> dirs;
  for (std::uint64_t k = 1; static_cast<int>(dirs.size()) < count; ++k) {
    Vec v(dim);
    for (int d = 0; d < dim; ++d) {
      double u = RadicalInverse(k, primes[d]) + shift[d];
      u -= std::floor(u);
      u = std::clamp(u, 1e-12, 1.0 - 1e-12);
      v[d] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
    const double norm = v.norm();
    if (norm < 1e-9) continue;
    dirs.push_back(v / norm);
  }
  return dirs;
}

ProbeReport StabilityProbe(const SeekingProblem& problem,
                           const ProbeConfig& config) {
  if (!(config.epsilon > 0.0)) throw InvalidArgument("probe epsilon must be > 0");
  if (config.target.size() == 0) throw InvalidArgument("probe target is empty");
  if (config.deltas.empty()) throw InvalidArgument("probe needs delta values");
  if (!config.use_lie && config.omegas.empty()) {
    throw InvalidArgument("probe needs omega values");
  }
  if (!(config.horizon >= config.t_f) || !(config.t_f >= 0.0)) {
    throw InvalidArgument("probe needs 0 <= t_f <= horizon");
  }
  const int dim = static_cast<int>(config.target.size());
  const auto dirs = ShellDirections(dim, config.boundary_samples, config.seed);
  const std::vector<double> omegas =
      config.use_lie ? std::vector<double>{0.0} : config.omegas;

  struct Job {
    double delta;
    double omega;
  };
  std::vector<Job> jobs;
  for (double delta : config.deltas) {
    for (double omega : omegas) jobs.push_back({delta, omega});
  }

  ProbeReport report;
  report.epsilon = config.epsilon;
  report.cells = ParallelMap(jobs.size(), [&](std::size_t j) {
    const Job job = jobs[j];
    const VectorField field =
        config.use_lie ? problem.lie : problem.oscillatory(job.omega);
    ProbeCell cell;
    cell.delta = job.delta;
    cell.omega = job.omega;
    for (const Vec& dir : dirs) {
      const Vec x0 = config.target + job.delta * dir;
      double containment = 0.0;
      double attraction = 0.0;
      const double t_f = config.t_f;
      auto observe = [&](double t, const Vec& x) {
        const double d = (x - config.target).norm();
        containment = std::max(containment, d);
        if (t >= t_f - 1e-12) attraction = std::max(attraction, d);
      };
      StepPolicy policy = config.policy;
      policy.output_stride = 1;
      const Trajectory traj =
          Integrate(field, x0, 0.0, config.horizon, policy, observe);
      if (traj.diverged) {
        ++cell.diverged;
        containment = attraction = std::numeric_limits<double>::infinity();
      }
      cell.containment = std::max(cell.containment, containment);
      cell.attraction = std::max(cell.attraction, attraction);
    }
    cell.stable = cell.containment <= config.epsilon;
    cell.attractive = cell.attraction <= config.epsilon;
    return cell;
  });
  return report;
}

DecayReport AveragingDecayCheck(const DitherSignal& u, double t0, double t,
                                std::span<const double> omegas,
                                const std::optional<DitherSignal>& partner,
                                int nodes_per_period) {
  if (!(t > t0)) throw InvalidArgument("decay check needs t > t0");
  if (nodes_per_period < 4) throw InvalidArgument("need >= 4 nodes per period");
  if (!u.time_invariant()) {
    throw InvalidArgument("decay check supports time-invariant signals only");
  }
  for (std::size_t k = 1; k < omegas.size(); ++k) {
    if (!(omegas[k] > omegas[k - 1])) {
      throw InvalidArgument("omega values must be strictly increasing");
    }
  }
  const DitherSignal outer = partner.value_or(u);
  const double period = u.period();
  const double mean = IntegrateSignal(u, 0.0, 0.0, period) / period;

  DecayReport report;
  report.nu = NuQuadrature(outer, u, 0.0, 4096).value;

  // Running integral of u over [0, theta]; built-ins have zero mean so the
  // phase can be reduced to one period first.
  auto running = [&](double theta) {
    if (u.is_builtin() && !u.is_sinusoid()) {
      theta -= std::floor(theta / period) * period;
      return PartialIntegral(u, 0.0, theta, 64);
    }
    return PartialIntegral(u, 0.0, theta);
  };

  // Work in the phase variable theta = omega s, where
  // int_t0^s g(omega r) dr = (1 / omega) int_{omega t0}^{omega s} g. Cell
  // edges include every breakpoint of both signals, and integrands are
  // evaluated just inside each cell, so Simpson is exact on the polynomial
  // pieces of the built-in kinds.
  for (double omega : omegas) {
    if (!(omega > 0.0)) throw InvalidArgument("omega must be > 0");
    const double th0 = omega * t0;
    const double th1 = omega * t;
    const double step = period / nodes_per_period;
    double cells_real = (th1 - th0) / step;
    const double rounded = std::round(cells_real);
    if (std::abs(cells_real - rounded) <= 1e-9 * std::max(1.0, rounded)) {
      cells_real = rounded;
    }
    const auto uniform =
        std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(cells_real)));
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(uniform) + 1);
    for (std::int64_t k = 0; k < uniform; ++k) {
      edges.push_back(th0 + static_cast<double>(k) * step);
    }
    edges.push_back(th1);
    for (const DitherSignal* sig : {&u, &outer}) {
      for (double b : sig->Breakpoints(th0, th1)) edges.push_back(b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) { return b - a < 1e-9 * step; }),
                edges.end());
    if (edges.back() < th1) edges.back() = th1;

    const double base = running(th0);
    auto single = [&](double th) { return u(t0, th) - mean; };
    auto paired = [&](double th) {
      return outer(t0, th) * (running(th) - base) - report.nu;
    };

    DecayRecord rec;
    rec.omega = omega;
    double acc = 0.0;
    double acc_paired = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double a = edges[k];
      const double b = edges[k + 1];
      const double eta = 1e-8 * (b - a);
      auto inside = [&](const auto& g) {
        return [&, a, b, eta](double th) { return g(std::clamp(th, a + eta, b - eta)); };
      };
      acc += detail::SimpsonCell(inside(single), a, b) / omega;
      acc_paired += detail::SimpsonCell(inside(paired), a, b) / omega;
      rec.sup_error = std::max(rec.sup_error, std::abs(acc));
      rec.paired_sup_error = std::max(rec.paired_sup_error, std::abs(acc_paired));
    }
    rec.endpoint_error = std::abs(acc);
    report.records.push_back(rec);
  }
  if (report.records.size() >= 2) {
    std::vector<double> xs, ys, yp;
    for (const auto& r : report.records) {
      xs.push_back(r.omega);
      ys.push_back(r.sup_error);
      yp.push_back(r.paired_sup_error);
    }
    report.slope = FitLogLogSlope(xs, ys);
    report.paired_slope = FitLogLogSlope(xs, yp);
  }
  return report;
}

}  // namespace lbes
