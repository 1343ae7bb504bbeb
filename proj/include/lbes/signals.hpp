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
#ifndef LBES_SIGNALS_HPP_
#define LBES_SIGNALS_HPP_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbes/types.hpp"

namespace lbes {

enum class DitherKind { kSine, kCosine, kSquare, kTriangle, kSawtooth, kCustom };

std::string_view KindName(DitherKind kind);

// A periodic, zero-mean, bounded perturbation u(t, theta). The first slot is
// slow time, the second the fast phase (omega * t at the call site).
//
// Built-in kinds use the canonical period 2*pi and carry their harmonic
// content in n:
//   sine(n)     sin(n theta)
//   cosine(n)   cos(n theta)
//   square(n)   sign(sin(n theta)), 0 at zero crossings
//   triangle(n) odd, peak +1 at theta = pi / (2n)
//   sawtooth(n) rises linearly from -1 to +1 over one harmonic period, jumps
//               back at theta = 2 pi k / n (value +1 at the jump)
// Signals are immutable after construction and safe to share across threads.
class DitherSignal {
 public:
  using Evaluator = std::function<double(double t, double theta)>;

  static DitherSignal Sine(int n = 1);
  static DitherSignal Cosine(int n = 1);
  static DitherSignal Square(int n = 1);
  static DitherSignal Triangle(int n = 1);
  static DitherSignal Sawtooth(int n = 1);
  static DitherSignal Builtin(DitherKind kind, int n);
  // The evaluator may depend on t. If time_invariant is false, nu
  // coefficients built from this signal are recomputed at every t.
  static DitherSignal Custom(Evaluator evaluator, double period,
                             double sup_bound, double lipschitz_t,
                             std::string name = "custom",
                             bool time_invariant = true);

  // Parses "kind:n" (e.g. "sine:2") or a bare "kind" meaning n = 1.
  static DitherSignal Parse(std::string_view text);

  double operator()(double t, double theta) const;
  double Eval(double t, double theta) const { return (*this)(t, theta); }

  DitherKind kind() const { return kind_; }
  int harmonic() const { return harmonic_; }
  double period() const { return period_; }
  double sup_bound() const { return sup_bound_; }
  double lipschitz_t() const { return lipschitz_t_; }
  bool time_invariant() const { return time_invariant_; }
  bool is_sinusoid() const {
    return kind_ == DitherKind::kSine || kind_ == DitherKind::kCosine;
  }
  bool is_builtin() const { return kind_ != DitherKind::kCustom; }
  // Largest angular rate in theta: 2 pi n / T.
  double angular_rate() const { return kTwoPi * harmonic_ / period_; }
  std::string name() const;

  // Same signal with different claimed bounds; used to test the validator.
  DitherSignal WithClaims(double sup_bound, double lipschitz_t) const;

  // Jump and kink locations of built-in piecewise kinds inside (a, b).
  std::vector<double> Breakpoints(double a, double b) const;

 private:
  DitherSignal(DitherKind kind, int n, double period, double sup_bound,
               double lipschitz_t, Evaluator custom, std::string name,
               bool time_invariant);

  DitherKind kind_;
  int harmonic_;
  double period_;
  double sup_bound_;
  double lipschitz_t_;
  Evaluator custom_;
  std::string custom_name_;
  bool time_invariant_;
};

// Integral of u(t, .) over [a, b] by composite Simpson, split at the
// breakpoints of piecewise built-in kinds so each piece is smooth.
double IntegrateSignal(const DitherSignal& signal, double t, double a,
                       double b, int nodes = 4096);

// Integral of u(t, .) over [0, theta]. Sinusoids use the closed form and
// ignore nodes; every other kind goes through IntegrateSignal. Requires
// nodes >= 2.
double PartialIntegral(const DitherSignal& signal, double t, double theta,
                       int nodes = 4096);

struct ValidationReport {
  bool periodic = false;
  bool zero_mean = false;
  bool bounded = false;
  // True when no Lipschitz violation was found on the t-grid. This can only
  // falsify the claim, never prove it.
  bool lipschitz_ok = false;
  double periodicity_defect = 0.0;
  double mean_defect = 0.0;
  double measured_sup = 0.0;
  double lipschitz_quotient = 0.0;

  bool all_passed() const {
    return periodic && zero_mean && bounded && lipschitz_ok;
  }
};

// Checks periodicity, zero average, the sup bound and the t-Lipschitz claim
// on the supplied grids. Throws InvalidArgument for empty grids or tol <= 0.
ValidationReport ValidateAssumptions(const DitherSignal& signal,
                                     std::span<const double> t_samples,
                                     std::span<const double> theta_samples,
                                     double tol);
// Overload with DefaultTimeGrid() and DefaultPhaseGrid(signal.period()).
ValidationReport ValidateAssumptions(const DitherSignal& signal, double tol);

// 11 points on [0, 10].
std::vector<double> DefaultTimeGrid();
// 1000 points over [0, period) with an irrational-looking offset so no sample
// lands on a jump of a built-in kind with n <= 10.
std::vector<double> DefaultPhaseGrid(double period, int points = 1000);

}  // namespace lbes

#endif  // LBES_SIGNALS_HPP_
