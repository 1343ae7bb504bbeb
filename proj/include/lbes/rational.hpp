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
#ifndef LBES_RATIONAL_HPP_
#define LBES_RATIONAL_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace lbes {

// Exact positive-or-negative fraction p/q in lowest terms, q > 0.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t p, std::int64_t q = 1);

  // "p/q", "p", or a finite decimal such as "0.5" (converted exactly).
  static Rational Parse(std::string_view text);

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }
  double value() const { return static_cast<double>(p_) / q_; }
  std::string ToString() const;

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

}  // namespace lbes

#endif  // LBES_RATIONAL_HPP_
