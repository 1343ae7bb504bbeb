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
#ifndef LBES_LIEBRACKET_HPP_
#define LBES_LIEBRACKET_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "lbes/dynamics.hpp"
#include "lbes/signals.hpp"

namespace lbes {

// [f, g](t, x) = Dg(t, x) f(t, x) - Df(t, x) g(t, x). Fields without an
// analytic Jacobian fall back to central differences.
VectorField LieBracket(const VectorField& f, const VectorField& g);

enum class NuMethod { kClosedForm, kQuadrature };

struct NuOptions {
  NuMethod method = NuMethod::kClosedForm;
  int nodes = 4096;

  // "closed_form" or "quadrature:<nodes>".
  static NuOptions Parse(std::string_view text);
  std::string ToString() const;
};

// nu_ji = (1/T) int_0^T u_j(t, s) int_0^s u_i(t, r) dr ds for a channel pair
// i < j. The outer signal is u_j (the later channel), the inner u_i.
struct NuCoefficient {
  double value = 0.0;
  int j = 0;
  int i = 0;
  NuMethod method = NuMethod::kClosedForm;
};

// Composite Simpson over [0, T] with the inner running integral accumulated
// cell by cell on the same grid. Requires equal periods and nodes >= 8.
NuCoefficient NuQuadrature(const DitherSignal& outer_j,
                           const DitherSignal& inner_i, double t,
                           int nodes = 4096);

// Closed form for sinusoid pairs, ordered (outer, inner):
//   outer sine(n),   inner cosine(n)  ->  +1/(2n)
//   outer cosine(n), inner sine(n)    ->  -1/(2n)
//   anything else                     ->  0
// Throws Unsupported for non-sinusoidal kinds.
double NuClosedForm(DitherKind outer_kind, int outer_n, DitherKind inner_kind,
                    int inner_n);

struct LieBracketSystem {
  VectorField field;
  // Pairs with a numerically non-zero coefficient that enter the field.
  std::vector<NuCoefficient> coefficients;
  // Set when some bracket uses finite-difference Jacobians.
  bool finite_difference_fallback = false;
  std::vector<std::string> warnings;
};

// z' = b0(t, z) + sum_{i<j} nu_ji [b_i, b_j](t, z). Self-pairs are excluded
// (they vanish for zero-mean dithers). Coefficients of time-invariant dithers
// are computed once; time-varying custom dithers are re-integrated at every
// evaluation. Throws InvalidArgument when the amplitude exponent is not 0.5.
// The closed-form method falls back to quadrature for non-sinusoid pairs and
// records a warning.
LieBracketSystem BuildLieBracketSystem(const InputAffineSystem& sys,
                                       const NuOptions& options = {});

}  // namespace lbes

#endif  // LBES_LIEBRACKET_HPP_
