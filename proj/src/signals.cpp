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
#include "lbes/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "quadrature.hpp"

namespace lbes {
namespace {

constexpr double kPi = std::numbers::pi;

// n * theta reduced to [0, 2 pi).
double Phase(int n, double theta) {
  double phi = std::fmod(n * theta, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return phi;
}

double SquareWave(double phi) {
  if (phi == 0.0 || phi == kPi) return 0.0;
  return phi < kPi ? 1.0 : -1.0;
}

double TriangleWave(double phi) {
  if (phi <= 0.5 * kPi) return 2.0 * phi / kPi;
  if (phi <= 1.5 * kPi) return 2.0 - 2.0 * phi / kPi;
  return 2.0 * phi / kPi - 4.0;
}

double SawtoothWave(double phi) {
  if (phi == 0.0) return 1.0;
  return phi / kPi - 1.0;
}

}  // namespace

std::string_view KindName(DitherKind kind) {
  switch (kind) {
    case DitherKind::kSine: return "sine";
    case DitherKind::kCosine: return "cosine";
    case DitherKind::kSquare: return "square";
    case DitherKind::kTriangle: return "triangle";
    case DitherKind::kSawtooth: return "sawtooth";
    case DitherKind::kCustom: return "custom";
  }
  return "unknown";
}

DitherSignal::DitherSignal(DitherKind kind, int n, double period,
                           double sup_bound, double lipschitz_t,
                           Evaluator custom, std::string name,
                           bool time_invariant)
    : kind_(kind),
      harmonic_(n),
      period_(period),
      sup_bound_(sup_bound),
      lipschitz_t_(lipschitz_t),
      custom_(std::move(custom)),
      custom_name_(std::move(name)),
      time_invariant_(time_invariant) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw InvalidArgument("dither period must be positive and finite");
  }
  if (harmonic_ < 1) {
    throw InvalidArgument("dither harmonic must be a positive integer");
  }
  if (sup_bound_ < 0.0 || lipschitz_t_ < 0.0) {
    throw InvalidArgument("dither bounds must be non-negative");
  }
}

DitherSignal DitherSignal::Builtin(DitherKind kind, int n) {
  if (kind == DitherKind::kCustom) {
    throw InvalidArgument("custom signals need an evaluator");
  }
  return DitherSignal(kind, n, kTwoPi, 1.0, 0.0, nullptr, {}, true);
}

DitherSignal DitherSignal::Sine(int n) { return Builtin(DitherKind::kSine, n); }
DitherSignal DitherSignal::Cosine(int n) {
  return Builtin(DitherKind::kCosine, n);
}
DitherSignal DitherSignal::Square(int n) {
  return Builtin(DitherKind::kSquare, n);
}
DitherSignal DitherSignal::Triangle(int n) {
  return Builtin(DitherKind::kTriangle, n);
}
DitherSignal DitherSignal::Sawtooth(int n) {
  return Builtin(DitherKind::kSawtooth, n);
}

DitherSignal DitherSignal::Custom(Evaluator evaluator, double period,
                                  double sup_bound, double lipschitz_t,
                                  std::string name, bool time_invariant) {
  if (!evaluator) throw InvalidArgument("custom signal without evaluator");
  return DitherSignal(DitherKind::kCustom, 1, period, sup_bound, lipschitz_t,
                      std::move(evaluator), std::move(name), time_invariant);
}

DitherSignal DitherSignal::Parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind_text = text.substr(0, colon);
  int n = 1;
  if (colon != std::string_view::npos) {
    const std::string_view n_text = text.substr(colon + 1);
    const auto [ptr, ec] =
        std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (ec != std::errc() || ptr != n_text.data() + n_text.size() || n < 1) {
      throw InvalidArgument("bad harmonic in dither '" + std::string(text) +
                            "'");
    }
  }
  for (DitherKind kind : {DitherKind::kSine, DitherKind::kCosine,
                          DitherKind::kSquare, DitherKind::kTriangle,
                          DitherKind::kSawtooth}) {
    if (kind_text == KindName(kind)) return Builtin(kind, n);
  }
  throw InvalidArgument("unknown dither kind '" + std::string(kind_text) +
                        "'");
}

double DitherSignal::operator()(double t, double theta) const {
  switch (kind_) {
    case DitherKind::kSine: return std::sin(harmonic_ * theta);
    case DitherKind::kCosine: return std::cos(harmonic_ * theta);
    case DitherKind::kSquare: return SquareWave(Phase(harmonic_, theta));
    case DitherKind::kTriangle: return TriangleWave(Phase(harmonic_, theta));
    case DitherKind::kSawtooth: return SawtoothWave(Phase(harmonic_, theta));
    case DitherKind::kCustom: return custom_(t, theta);
  }
  return 0.0;
}

std::string DitherSignal::name() const {
  if (kind_ == DitherKind::kCustom) return custom_name_;
  return std::string(KindName(kind_)) + ":" + std::to_string(harmonic_);
}

DitherSignal DitherSignal::WithClaims(double sup_bound,
                                      double lipschitz_t) const {
  DitherSignal copy = *this;
  if (sup_bound < 0.0 || lipschitz_t < 0.0) {
    throw InvalidArgument("dither bounds must be non-negative");
  }
  copy.sup_bound_ = sup_bound;
  copy.lipschitz_t_ = lipschitz_t;
  return copy;
}

std::vector<double> DitherSignal::Breakpoints(double a, double b) const {
  double offset = 0.0;
  double spacing = 0.0;
  switch (kind_) {
    case DitherKind::kSquare: spacing = kPi / harmonic_; break;
    case DitherKind::kTriangle:
      offset = 0.5 * kPi / harmonic_;
      spacing = kPi / harmonic_;
      break;
    case DitherKind::kSawtooth: spacing = kTwoPi / harmonic_; break;
    default: return {};
  }
  std::vector<double> points;
  const double first = std::floor((a - offset) / spacing) + 1.0;
  for (double k = first;; k += 1.0) {
    const double p = offset + k * spacing;
    if (p >= b) break;
    if (p > a) points.push_back(p);
  }
  return points;
}

double IntegrateSignal(const DitherSignal& signal, double t, double a,
                       double b, int nodes) {
  if (nodes < 2) throw InvalidArgument("quadrature needs nodes >= 2");
  if (b < a) return -IntegrateSignal(signal, t, b, a, nodes);
  if (b == a) return 0.0;
  const double span = b - a;
  std::vector<double> cuts{a};
  for (double p : signal.Breakpoints(a, b)) cuts.push_back(p);
  cuts.push_back(b);
  if (!signal.is_builtin() || signal.is_sinusoid()) {
    auto u = [&](double tau) { return signal(t, tau); };
    return detail::Simpson(u, a, b, nodes);
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    // Pieces are polynomial between breakpoints; evaluate just inside so
    // one-sided limits are used at jumps, including jumps at a or b.
    const double eta = 1e-10 * (hi - lo);
    const int pieces = std::max(2, static_cast<int>(nodes * (hi - lo) / span));
    auto u = [&](double tau) {
      return signal(t, std::clamp(tau, lo + eta, hi - eta));
    };
    total += detail::Simpson(u, lo, hi, pieces);
  }
  return total;
}

double PartialIntegral(const DitherSignal& signal, double t, double theta,
                       int nodes) {
  if (nodes < 2) throw InvalidArgument("partial_integral needs nodes >= 2");
  const int n = signal.harmonic();
  switch (signal.kind()) {
    case DitherKind::kSine: return (1.0 - std::cos(n * theta)) / n;
    case DitherKind::kCosine: return std::sin(n * theta) / n;
    default: return IntegrateSignal(signal, t, 0.0, theta, nodes);
  }
}

std::vector<double> DefaultTimeGrid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(static_cast<double>(k));
  return grid;
}

std::vector<double> DefaultPhaseGrid(double period, int points) {
  std::vector<double> grid;
  grid.reserve(points);
  for (int k = 0; k < points; ++k) {
    grid.push_back(period * (k + 0.3713) / points);
  }
  return grid;
}

ValidationReport ValidateAssumptions(const DitherSignal& signal,
                                     std::span<const double> t_samples,
                                     std::span<const double> theta_samples,
                                     double tol) {
  if (t_samples.empty() || theta_samples.empty()) {
    throw InvalidArgument("validation grids must be non-empty");
  }
  if (!(tol > 0.0)) throw InvalidArgument("validation tolerance must be > 0");
  const double period = signal.period();
  if (!(period > 0.0)) throw InvalidArgument("signal period must be > 0");

  ValidationReport report;
  std::vector<double> ts(t_samples.begin(), t_samples.end());
  std::sort(ts.begin(), ts.end());

  for (double t : ts) {
    for (double theta : theta_samples) {
      const double u = signal(t, theta);
      report.periodicity_defect = std::max(
          report.periodicity_defect, std::abs(signal(t, theta + period) - u));
      report.measured_sup = std::max(report.measured_sup, std::abs(u));
    }
    report.mean_defect = std::max(
        report.mean_defect,
        std::abs(IntegrateSignal(signal, t, 0.0, period, 4096)) / period);
  }
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double dt = ts[k + 1] - ts[k];
    if (dt <= 0.0) continue;
    for (double theta : theta_samples) {
      const double q =
          std::abs(signal(ts[k + 1], theta) - signal(ts[k], theta)) / dt;
      report.lipschitz_quotient = std::max(report.lipschitz_quotient, q);
    }
  }
  report.periodic = report.periodicity_defect <= tol;
  report.zero_mean = report.mean_defect <= tol;
  report.bounded = report.measured_sup <= signal.sup_bound() + tol;
  report.lipschitz_ok =
      report.lipschitz_quotient <= signal.lipschitz_t() + tol;
  return report;
}

ValidationReport ValidateAssumptions(const DitherSignal& signal, double tol) {
  const auto ts = DefaultTimeGrid();
  const auto thetas = DefaultPhaseGrid(signal.period());
  return ValidateAssumptions(signal, ts, thetas, tol);
}

}  // namespace lbes
