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
#include "lbes/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace lbes {
namespace {

namespace fs = std::filesystem;

std::string OmegaTag(double omega) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", omega);
  return buf;
}

void WriteTrajectoryCsv(const fs::path& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "t";
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    os << FormatNumber(traj.time(k));
    for (int i = 0; i < n; ++i) os << ',' << FormatNumber(traj.states[k][i]);
    os << '\n';
  }
}

// Long format: one row per (series, t, component).
class LongCsv {
 public:
  explicit LongCsv(const fs::path& path) : os_(path) {
    if (!os_) throw std::runtime_error("cannot write " + path.string());
    os_ << "series,omega,t,component,value\n";
  }
  void Add(const std::string& series, double omega, const Trajectory& traj) {
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
        os_ << series << ',' << FormatNumber(omega) << ','
            << FormatNumber(traj.time(k)) << ",x" << (i + 1) << ','
            << FormatNumber(traj.states[k][i]) << '\n';
      }
    }
  }

 private:
  std::ofstream os_;
};

std::vector<Vec> SamplePoints(const Vec& center, int count, double radius,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    Vec p = center;
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += u(rng);
    pts.push_back(p);
  }
  return pts;
}

int RunSimulate(const Scenario& sc, const std::vector<double>& omegas,
                double horizon, const fs::path& dir, std::ostream& out) {
  const auto& spec = sc.spec();
  LongCsv long_csv(dir / "trajectories_long.csv");
  for (double w : omegas) {
    const VectorField rhs = AssembleRhs(sc.System(w));
    const Trajectory traj = Integrate(rhs, spec.initial_state, 0.0, horizon, spec.step);
    const fs::path file = dir / ("trajectory_omega" + OmegaTag(w) + ".csv");
    WriteTrajectoryCsv(file, traj);
    long_csv.Add("oscillatory", w, traj);
    out << "omega=" << OmegaTag(w) << " steps=" << traj.steps
        << (traj.diverged ? " DIVERGED" : "") << " -> " << file.string() << '\n';
  }
  return 0;
}

int RunCompare(const Scenario& sc, const std::vector<double>& omegas,
               double horizon, const fs::path& dir, std::ostream& out) {
  const auto& spec = sc.spec();
  const SeekingProblem problem = sc.Problem();
  if (!problem.lie.valid()) {
    throw Unsupported("compare needs a Lie bracket system (amplitude exponent 0.5)");
  }
  LongCsv long_csv(dir / "compare_long.csv");
  std::ostringstream summary;
  summary << "scenario " << spec.name << "\nhorizon " << FormatNumber(horizon)
          << "\nomega,sup_error,final_distance_oscillatory,final_distance_lie,steps\n";
  for (double w : omegas) {
    const PairedRun run = IntegratePair(problem.oscillatory(w), problem.lie,
                                        spec.initial_state, 0.0, horizon, spec.step);
    WriteTrajectoryCsv(dir / ("oscillatory_omega" + OmegaTag(w) + ".csv"), run.x);
    WriteTrajectoryCsv(dir / ("lie_omega" + OmegaTag(w) + ".csv"), run.z);
    long_csv.Add("oscillatory", w, run.x);
    long_csv.Add("lie", w, run.z);
    summary << FormatNumber(w) << ','
            << (run.diverged ? std::string("diverged") : FormatNumber(run.sup_error))
            << ',' << FormatNumber(problem.distance_to_target(run.x.states.back()))
            << ',' << FormatNumber(problem.distance_to_target(run.z.states.back()))
            << ',' << run.x.steps << '\n';
  }
  std::ofstream(dir / "compare_summary.txt") << summary.str();
  out << summary.str();
  return 0;
}

int RunSweep(const Scenario& sc, const std::vector<double>& omegas, double horizon,
             const fs::path& dir, std::ostream& out) {
  const auto& spec = sc.spec();
  const SeekingProblem problem = sc.Problem();
  if (!problem.lie.valid()) {
    throw Unsupported("sweep needs a Lie bracket system (amplitude exponent 0.5)");
  }
  const SweepReport rep =
      OmegaSweep(problem, omegas, spec.initial_state, horizon, spec.step);
  std::ofstream csv(dir / "sweep.csv");
  csv << "omega,sup_error,final_distance_to_target,"
         "lie_final_distance_to_target,steps,diverged\n";
  for (const auto& r : rep.records) {
    csv << FormatNumber(r.omega) << ',' << FormatNumber(r.sup_error) << ','
        << FormatNumber(r.final_distance_to_target) << ','
        << FormatNumber(r.lie_final_distance_to_target) << ',' << r.steps << ','
        << (r.diverged ? 1 : 0) << '\n';
  }
  std::ostringstream s;
  s << "scenario " << spec.name << "\nmonotone_non_increasing "
    << (rep.monotone_non_increasing ? "yes" : "no") << "\ninversions "
    << rep.inversions << "\ndecay_slope " << FormatNumber(rep.decay_slope) << '\n';
  for (const auto& r : rep.records) {
    s << "omega " << FormatNumber(r.omega) << " wall_time_s "
      << FormatNumber(r.wall_time_s) << '\n';
  }
  std::ofstream(dir / "sweep_summary.txt") << s.str();
  out << s.str();
  return 0;
}

int RunProbe(const Scenario& sc, const std::vector<double>& omegas,
             std::uint64_t seed, const fs::path& dir, std::ostream& out) {
  const auto& spec = sc.spec();
  const SeekingProblem problem = sc.Problem();
  ProbeConfig cfg;
  cfg.target = sc.Target();
  cfg.deltas = spec.probe.deltas;
  cfg.epsilon = spec.probe.epsilon;
  cfg.omegas = omegas;
  cfg.t_f = spec.probe.t_f;
  cfg.horizon = spec.probe.horizon;
  cfg.boundary_samples = spec.probe.boundary_samples;
  cfg.seed = seed;
  cfg.policy = spec.step;

  std::vector<ProbeCell> cells;
  if (problem.lie.valid()) {
    ProbeConfig lie_cfg = cfg;
    lie_cfg.use_lie = true;
    const ProbeReport lie = StabilityProbe(problem, lie_cfg);
    cells.insert(cells.end(), lie.cells.begin(), lie.cells.end());
  }
  const ProbeReport osc = StabilityProbe(problem, cfg);
  cells.insert(cells.end(), osc.cells.begin(), osc.cells.end());

  std::ostringstream s;
  s << "scenario " << spec.name << "\nepsilon " << FormatNumber(cfg.epsilon)
    << "\nt_f " << FormatNumber(cfg.t_f) << "\nhorizon " << FormatNumber(cfg.horizon)
    << "\nsamples_per_shell " << cfg.boundary_samples
    << "\n# verdicts are 'consistent' or 'falsified' at the tested omega only\n"
    << "system,delta,omega,containment,attraction,stability,attractivity,diverged\n";
  for (const auto& c : cells) {
    s << (c.omega == 0.0 ? "lie" : "oscillatory") << ',' << FormatNumber(c.delta)
      << ',' << FormatNumber(c.omega) << ',' << FormatNumber(c.containment) << ','
      << FormatNumber(c.attraction) << ',' << (c.stable ? "consistent" : "falsified")
      << ',' << (c.attractive ? "consistent" : "falsified") << ',' << c.diverged
      << '\n';
  }
  std::ofstream(dir / "probe_report.txt") << s.str();
  out << s.str();
  return 0;
}

int RunVerify(const Scenario& sc, const fs::path& dir, std::ostream& out) {
  const auto checks = VerifyScenario(sc);
  std::ostringstream s;
  int failures = 0;
  s << "scenario " << sc.spec().name << '\n';
  for (const auto& c : checks) {
    if (!c.passed) ++failures;
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s %-44s measured=%-12.4g tol=%.1g\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.tolerance);
    s << line;
  }
  s << (failures == 0 ? "all checks passed" : std::to_string(failures) + " failed")
    << '\n';
  std::ofstream(dir / "verify_report.txt") << s.str();
  out << s.str();
  return failures;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Mode ParseMode(const std::string& text) {
  if (text == "simulate") return Mode::kSimulate;
  if (text == "compare") return Mode::kCompare;
  if (text == "sweep") return Mode::kSweep;
  if (text == "probe") return Mode::kProbe;
  if (text == "verify") return Mode::kVerify;
  throw InvalidArgument("unknown mode '" + text + "'");
}

const char* ModeName(Mode mode) {
  switch (mode) {
    case Mode::kSimulate: return "simulate";
    case Mode::kCompare: return "compare";
    case Mode::kSweep: return "sweep";
    case Mode::kProbe: return "probe";
    case Mode::kVerify: return "verify";
  }
  return "?";
}

std::vector<VerifyCheck> VerifyScenario(const Scenario& sc) {
  std::vector<VerifyCheck> checks;
  auto add = [&](std::string name, double measured, double tol) {
    checks.push_back({std::move(name), measured, tol,
                      std::isfinite(measured) && measured <= tol});
  };
  const auto& spec = sc.spec();

  constexpr double kSignalTol = 1e-6;
  for (const auto& d : sc.Dithers()) {
    const ValidationReport r = ValidateAssumptions(d, kSignalTol);
    add("dither " + d.name() + " periodic", r.periodicity_defect, kSignalTol);
    add("dither " + d.name() + " zero mean", r.mean_defect, kSignalTol);
    add("dither " + d.name() + " bounded",
        std::max(0.0, r.measured_sup - d.sup_bound()), kSignalTol);
    add("dither " + d.name() + " lipschitz in t",
        std::max(0.0, r.lipschitz_quotient - d.lipschitz_t()), kSignalTol);
  }

  if (sc.game()) {
    const auto compat = CheckPotentialCompatibility(*sc.game(), 1000, kSignalTol, spec.seed);
    add("potential compatibility (1000 points)", compat.max_discrepancy, kSignalTol);
    add("stationarity at maximizer", StationarityResidual(*sc.game()), 1e-8);
  }

  const std::vector<Vec> pts = SamplePoints(sc.Target(), 20, 2.0, spec.seed);
  const InputAffineSystem sys = sc.System(1.0);
  {
    double worst = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double t = 0.37 * static_cast<double>(k);
      for (const auto& ch : sys.channels()) {
        if (ch.field.has_jacobian()) {
          worst = std::max(worst, JacobianDiscrepancy(ch.field, t, pts[k]));
        }
      }
      if (sys.drift().has_jacobian()) {
        worst = std::max(worst, JacobianDiscrepancy(sys.drift(), t, pts[k]));
      }
    }
    add("analytic vs finite-difference jacobians", worst, 1e-5);
  }

  const auto& chans = sys.channels();
  double nu_worst = 0.0;
  int nu_pairs = 0;
  for (std::size_t i = 0; i < chans.size(); ++i) {
    for (std::size_t j = i + 1; j < chans.size(); ++j) {
      const auto& ui = chans[i].dither;
      const auto& uj = chans[j].dither;
      if (!ui.is_sinusoid() || !uj.is_sinusoid()) continue;
      const double closed = NuClosedForm(uj.kind(), uj.harmonic(), ui.kind(), ui.harmonic());
      const double quad = NuQuadrature(uj, ui, 0.0).value;
      nu_worst = std::max(nu_worst, std::abs(closed - quad));
      ++nu_pairs;
    }
  }
  if (nu_pairs > 0) add("nu quadrature vs closed form", nu_worst, 1e-8);

  if (spec.amplitude_exponent == 0.5) {
    const LieBracketSystem generic = sc.GenericLie();
    const VectorField analytic = sc.AnalyticLie();
    const std::vector<Vec> lie_pts = SamplePoints(sc.Target(), 100, 2.0, spec.seed + 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < lie_pts.size(); ++k) {
      const double t = 0.0629 * static_cast<double>(k);
      const Vec a = analytic(t, lie_pts[k]);
      const Vec g = generic.field(t, lie_pts[k]);
      worst = std::max(worst, (a - g).lpNorm<Eigen::Infinity>() /
                                  std::max(1.0, a.lpNorm<Eigen::Infinity>()));
    }
    add("generic vs closed-form lie field (100 points)", worst,
        generic.finite_difference_fallback ? 1e-5 : 1e-8);
  }
  return checks;
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> warnings;
    ScenarioSpec spec = LoadScenario(config.scenario, config.strict, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    if (config.horizon) {
      if (!(*config.horizon > 0.0)) throw InvalidArgument("horizon must be > 0");
      spec.horizon = *config.horizon;
    }
    if (config.samples_per_period) {
      if (*config.samples_per_period < 1) {
        throw InvalidArgument("samples per period must be >= 1");
      }
      spec.step.samples_per_period = *config.samples_per_period;
    }
    if (config.seed) spec.seed = *config.seed;
    std::vector<double> omegas = config.omegas.empty() ? spec.omegas : config.omegas;
    for (double w : omegas) {
      if (!(w > 0.0)) throw InvalidArgument("omega values must be > 0");
    }
    if (config.mode == Mode::kSweep) {
      std::sort(omegas.begin(), omegas.end());
      omegas.erase(std::unique(omegas.begin(), omegas.end()), omegas.end());
    }

    const Scenario sc(spec);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    switch (config.mode) {
      case Mode::kSimulate: return RunSimulate(sc, omegas, spec.horizon, dir, out);
      case Mode::kCompare: return RunCompare(sc, omegas, spec.horizon, dir, out);
      case Mode::kSweep: return RunSweep(sc, omegas, spec.horizon, dir, out);
      case Mode::kProbe: return RunProbe(sc, omegas, spec.seed, dir, out);
      case Mode::kVerify: return RunVerify(sc, dir, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace lbes
