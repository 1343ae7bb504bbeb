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
#ifndef LBES_DYNAMICS_HPP_
#define LBES_DYNAMICS_HPP_

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lbes/signals.hpp"
#include "lbes/types.hpp"

namespace lbes {

// A time-varying vector field b(t, x) on R^n with an optional analytic state
// Jacobian (row i holds the partials of b_i). Copies share the underlying
// callables; evaluation is reentrant.
class VectorField {
 public:
  using EvalFn = std::function<Vec(double t, const Vec& x)>;
  using JacobianFn = std::function<Mat(double t, const Vec& x)>;

  VectorField() = default;
  // rate is the largest angular frequency of any explicit t-dependence
  // (0 for autonomous fields). The integrator uses it to pick a step.
  VectorField(int dim, EvalFn eval, JacobianFn jacobian = nullptr,
              double rate = 0.0);

  static VectorField Zero(int dim);
  static VectorField Constant(const Vec& value);
  static VectorField Linear(const Mat& a);

  int dim() const { return dim_; }
  double rate() const { return rate_; }
  bool has_jacobian() const { return static_cast<bool>(jacobian_); }
  bool valid() const { return static_cast<bool>(eval_); }

  // Throws InvalidArgument if x has the wrong length or the callable returns
  // a vector of the wrong length.
  Vec operator()(double t, const Vec& x) const;

  // Analytic Jacobian when present, central finite differences otherwise.
  Mat Jacobian(double t, const Vec& x) const;

  VectorField Scaled(double c) const;

 private:
  int dim_ = 0;
  EvalFn eval_;
  JacobianFn jacobian_;
  double rate_ = 0.0;
};

// sum_k c_k * f_k. The result carries a Jacobian only if every term does.
VectorField LinearCombination(
    const std::vector<std::pair<double, VectorField>>& terms);

// Central differences, column k = (F(t, x + h e_k) - F(t, x - h e_k)) / 2h.
// Throws NumericalError if any evaluation is non-finite.
Mat FiniteDiffJacobian(const VectorField& field, double t, const Vec& x,
                       double h);
// Step h = 1e-6 * max(1, |x|_inf).
Mat FiniteDiffJacobian(const VectorField& field, double t, const Vec& x);

// Largest entrywise |J_analytic - J_fd| / max(1, |J_analytic|) at (t, x).
// Requires an analytic Jacobian.
double JacobianDiscrepancy(const VectorField& field, double t, const Vec& x);

struct Channel {
  VectorField field;
  DitherSignal dither;
};

// x' = b0(t, x) + sum_i omega^gamma * u_i(t, omega t) * b_i(t, x).
// gamma = 0.5 is the square-root-amplitude scheme that admits a Lie bracket
// approximation; gamma = 1.0 is the amplitude-omega variant.
class InputAffineSystem {
 public:
  InputAffineSystem(VectorField drift, std::vector<Channel> channels,
                    double omega, double amplitude_exponent = 0.5);

  const VectorField& drift() const { return drift_; }
  const std::vector<Channel>& channels() const { return channels_; }
  double omega() const { return omega_; }
  double amplitude_exponent() const { return amplitude_exponent_; }
  int dim() const { return drift_.dim(); }

  // Largest effective angular rate: omega times the fastest dither rate, or
  // the fastest explicit rate of any field, whichever is larger.
  double fastest_rate() const;

 private:
  VectorField drift_;
  std::vector<Channel> channels_;
  double omega_;
  double amplitude_exponent_;
};

// The assembled right-hand side. Its Jacobian is the same combination of
// channel Jacobians when all fields supply one.
VectorField AssembleRhs(const InputAffineSystem& sys);

}  // namespace lbes

#endif  // LBES_DYNAMICS_HPP_
