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
#include "lbes/rational.hpp"

#include <charconv>
#include <numeric>

#include "lbes/types.hpp"

namespace lbes {
namespace {

std::int64_t ParseInt(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("malformed rational '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw InvalidArgument("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  p_ = g == 0 ? 0 : p / g;
  q_ = g == 0 ? 1 : q / g;
}

Rational Rational::Parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(ParseInt(text.substr(0, slash), text),
                    ParseInt(text.substr(slash + 1), text));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) {
      throw InvalidArgument("too many decimals in rational '" +
                            std::string(text) + "'");
    }
    std::int64_t scale = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) scale *= 10;
    const std::string_view int_part = text.substr(0, dot);
    const bool negative = !int_part.empty() && int_part.front() == '-';
    const std::int64_t whole =
        int_part.empty() || int_part == "-" ? 0 : ParseInt(int_part, text);
    const std::int64_t f = frac.empty() ? 0 : ParseInt(frac, text);
    const std::int64_t magnitude = (negative ? -whole : whole) * scale + f;
    return Rational(negative ? -magnitude : magnitude, scale);
  }
  return Rational(ParseInt(text, text), 1);
}

std::string Rational::ToString() const {
  if (q_ == 1) return std::to_string(p_);
  return std::to_string(p_) + "/" + std::to_string(q_);
}

}  // namespace lbes
