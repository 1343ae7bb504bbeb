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
// Internal quadrature helpers shared by the library sources.
#ifndef LBES_SRC_QUADRATURE_HPP_
#define LBES_SRC_QUADRATURE_HPP_

#include <cmath>

namespace lbes::detail {

// Composite Simpson on [a, b] with an even number of intervals (odd counts
// are bumped up by one).
template <typename F>
double Simpson(F&& f, double a, double b, int intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  }
  return sum * h / 3.0;
}

// Simpson on a single cell using its midpoint.
template <typename F>
double SimpsonCell(F&& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

}  // namespace lbes::detail

#endif  // LBES_SRC_QUADRATURE_HPP_
