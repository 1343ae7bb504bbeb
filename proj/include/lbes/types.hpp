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

#ifndef LBES_TYPES_HPP_
#define LBES_TYPES_HPP_

#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lbes {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Violated precondition or malformed input (bad period, dimension mismatch,
// duplicate frequency ratios, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested computation has no implementation for the given inputs, e.g.
// the closed-form nu coefficient of a square wave.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A field evaluation produced NaN or Inf.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool AllFinite(const Vec& v) { return v.allFinite(); }

}  // namespace lbes

#endif  // LBES_TYPES_HPP_
