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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lbes/liebracket.hpp"

using namespace lbes;
using std::numbers::pi;

namespace {

Vec V(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<Vec> RandomPoints(int dim, int count, std::uint64_t seed, double r = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Vec> pts;
  for (int k = 0; k < count; ++k) {
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = u(rng);
    pts.push_back(p);
  }
  return pts;
}

// Nonlinear planar fields with hand-derived Jacobians.
VectorField FieldA() {
  return VectorField(
      2, [](double, const Vec& x) { return V({std::sin(x[1]), x[0] * x[1]}); },
      [](double, const Vec& x) {
        return (Mat(2, 2) << 0, std::cos(x[1]), x[1], x[0]).finished();
      });
}
VectorField FieldB() {
  return VectorField(
      2, [](double, const Vec& x) { return V({x[0] * x[0], std::exp(-x[0]) + x[1]}); },
      [](double, const Vec& x) {
        return (Mat(2, 2) << 2 * x[0], 0, -std::exp(-x[0]), 1).finished();
      });
}
VectorField FieldC() {
  return VectorField(2, [](double, const Vec& x) { return V({x[1] * x[1], -x[0]}); });
}

InputAffineSystem ScalarLoop(double alpha) {
  VectorField f(
      1, [](double, const Vec& x) { return V({-(x[0] - 1) * (x[0] - 1)}); },
      [](double, const Vec& x) { return Mat::Constant(1, 1, -2 * (x[0] - 1)); });
  return InputAffineSystem(
      VectorField::Zero(1),
      {{VectorField::Constant(V({alpha})), DitherSignal::Cosine(1)},
       {f, DitherSignal::Sine(1)}},
      50.0);
}

}  // namespace

TEST_CASE("bracket of a field with itself vanishes") {
  const auto br = LieBracket(FieldA(), FieldA());
  for (const Vec& x : RandomPoints(2, 20, 1)) CHECK(br(0.0, x).norm() < 1e-14);
}

TEST_CASE("bracket of polynomial fields against a symbolic oracle") {
  // f = [x2, 0], g = [0, x1]: Df = [[0,1],[0,0]], Dg = [[0,0],[1,0]], so
  // Dg f = [0, x2] and Df g = [x1, 0].
  const VectorField f(2, [](double, const Vec& x) { return V({x[1], 0.0}); });
  const VectorField g(2, [](double, const Vec& x) { return V({0.0, x[0]}); });
  auto oracle = [](const Vec& x) { return V({-x[0], x[1]}); };
  const auto br = LieBracket(f, g);
  CHECK((br(0.0, V({1, 2})) - oracle(V({1, 2}))).norm() < 1e-8);
  for (const Vec& x : RandomPoints(2, 20, 2)) CHECK((br(0.0, x) - oracle(x)).norm() < 1e-7);
}

TEST_CASE("bracket dimension mismatch") {
  CHECK_THROWS_AS(LieBracket(VectorField::Zero(2), VectorField::Zero(3)), InvalidArgument);
}

TEST_CASE("antisymmetry") {
  const auto fg = LieBracket(FieldA(), FieldB());
  const auto gf = LieBracket(FieldB(), FieldA());
  for (const Vec& x : RandomPoints(2, 50, 3)) CHECK((fg(0, x) + gf(0, x)).norm() < 1e-10);
  const auto fd1 = LieBracket(FieldA(), FieldC());
  const auto fd2 = LieBracket(FieldC(), FieldA());
  for (const Vec& x : RandomPoints(2, 50, 4)) CHECK((fd1(0, x) + fd2(0, x)).norm() < 1e-5);
}

TEST_CASE("bilinearity") {
  const double a = 1.5, b = -0.75;
  const auto left = LieBracket(LinearCombination({{a, FieldA()}, {b, FieldC()}}), FieldB());
  const auto ab = LieBracket(FieldA(), FieldB());
  const auto cb = LieBracket(FieldC(), FieldB());
  for (const Vec& x : RandomPoints(2, 50, 5)) {
    const Vec expected = a * ab(0, x) + b * cb(0, x);
    CHECK((left(0, x) - expected).norm() < 1e-5 * (1 + expected.norm()));
  }
}

TEST_CASE("nu examples") {
  CHECK(NuQuadrature(DitherSignal::Cosine(1), DitherSignal::Sine(1), 0).value ==
        doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(std::abs(NuQuadrature(DitherSignal::Sine(2), DitherSignal::Sine(2), 0).value) < 1e-10);
  CHECK(std::abs(NuQuadrature(DitherSignal::Cosine(3), DitherSignal::Sine(2), 0).value) < 1e-10);

  CHECK(NuClosedForm(DitherKind::kSine, 1, DitherKind::kCosine, 1) == 0.5);
  CHECK(NuClosedForm(DitherKind::kCosine, 4, DitherKind::kSine, 4) == -0.125);
  CHECK(NuClosedForm(DitherKind::kSine, 2, DitherKind::kSine, 3) == 0.0);
  CHECK_THROWS_AS(NuClosedForm(DitherKind::kSquare, 1, DitherKind::kSine, 1), Unsupported);
}

TEST_CASE("nu from a direct double integral") {
  // Oracle: nested trapezoid sums over a fine grid, written independently.
  auto double_integral = [](const DitherSignal& outer, const DitherSignal& inner) {
    const int n = 20000;
    const double h = 2 * pi / n;
    double inner_acc = 0.0, total = 0.0, prev = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double s0 = (k - 1) * h, s1 = k * h;
      inner_acc += 0.5 * h * (inner(0, s0) + inner(0, s1));
      const double cur = outer(0, s1) * inner_acc;
      total += 0.5 * h * (prev + cur);
      prev = cur;
    }
    return total / (2 * pi);
  };
  const auto sq = DitherSignal::Square(1);
  const auto cs = DitherSignal::Cosine(1);
  CHECK(NuQuadrature(sq, cs, 0).value ==
        doctest::Approx(double_integral(sq, cs)).epsilon(1e-5));
  const auto tri = DitherSignal::Triangle(1);
  CHECK(NuQuadrature(cs, tri, 0).value ==
        doctest::Approx(double_integral(cs, tri)).epsilon(1e-5));
}

TEST_CASE("nu quadrature agrees with the closed form for all sinusoid pairs") {
  for (DitherKind ko : {DitherKind::kSine, DitherKind::kCosine}) {
    for (DitherKind ki : {DitherKind::kSine, DitherKind::kCosine}) {
      for (int no = 1; no <= 5; ++no) {
        for (int ni = 1; ni <= 5; ++ni) {
          const double q = NuQuadrature(DitherSignal::Builtin(ko, no),
                                        DitherSignal::Builtin(ki, ni), 0, 10000).value;
          CHECK(std::abs(q - NuClosedForm(ko, no, ki, ni)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("nu preconditions") {
  const auto odd = DitherSignal::Custom([](double, double s) { return std::sin(s); }, 1.0, 1, 0);
  CHECK_THROWS_AS(NuQuadrature(odd, DitherSignal::Sine(1), 0), InvalidArgument);
  CHECK_THROWS_AS(NuQuadrature(DitherSignal::Sine(1), DitherSignal::Sine(1), 0, 4),
                  InvalidArgument);
  CHECK(NuOptions::Parse("quadrature:512").nodes == 512);
  CHECK(NuOptions::Parse("closed_form").method == NuMethod::kClosedForm);
  CHECK_THROWS_AS(NuOptions::Parse("exact"), InvalidArgument);
}

TEST_CASE("basic loop bracket system is half the gradient") {
  for (double alpha : {1.0, 0.3}) {
    const auto lie = BuildLieBracketSystem(ScalarLoop(alpha));
    for (double z = -5; z <= 5; z += 0.1) {
      CHECK(lie.field(0.0, V({z}))[0] ==
            doctest::Approx(alpha * (1 - z)).epsilon(1e-12));
    }
    const auto quad = BuildLieBracketSystem(ScalarLoop(alpha), NuOptions::Parse("quadrature"));
    CHECK(quad.field(0.0, V({-2.0}))[0] == doctest::Approx(3 * alpha).epsilon(1e-9));
  }
}

TEST_CASE("single channel yields the drift") {
  const auto drift = VectorField::Linear(-Mat::Identity(2, 2));
  const InputAffineSystem sys(drift, {{FieldA(), DitherSignal::Sine(1)}}, 10.0);
  const auto lie = BuildLieBracketSystem(sys);
  CHECK(lie.coefficients.empty());
  for (const Vec& x : RandomPoints(2, 10, 6)) CHECK((lie.field(0, x) - drift(0, x)).norm() == 0.0);
}

TEST_CASE("amplitude exponent one has no bracket system") {
  const InputAffineSystem sys(VectorField::Zero(2), {{FieldA(), DitherSignal::Sine(1)}}, 10.0, 1.0);
  CHECK_THROWS_AS(BuildLieBracketSystem(sys), InvalidArgument);
}

TEST_CASE("harmonic scaling leaves the bracket term invariant") {
  const InputAffineSystem base(VectorField::Zero(2),
                               {{FieldA(), DitherSignal::Sine(1)}, {FieldB(), DitherSignal::Cosine(1)}}, 10.0);
  const auto ref = BuildLieBracketSystem(base).field;
  for (int n : {2, 3, 5}) {
    const double s = std::sqrt(static_cast<double>(n));
    const InputAffineSystem scaled(
        VectorField::Zero(2),
        {{FieldA().Scaled(s), DitherSignal::Sine(n)}, {FieldB().Scaled(s), DitherSignal::Cosine(n)}},
        10.0);
    const auto lie = BuildLieBracketSystem(scaled).field;
    for (const Vec& x : RandomPoints(2, 30, 7)) {
      CHECK((lie(0, x) - ref(0, x)).norm() < 1e-10 * (1 + ref(0, x).norm()));
    }
  }
}

TEST_CASE("distinct harmonics do not interact") {
  const InputAffineSystem sys(VectorField::Zero(2),
                              {{FieldA(), DitherSignal::Sine(1)}, {FieldB(), DitherSignal::Cosine(2)}}, 10.0);
  for (auto opt : {NuOptions{}, NuOptions::Parse("quadrature:4096")}) {
    const auto lie = BuildLieBracketSystem(sys, opt);
    for (const Vec& x : RandomPoints(2, 20, 8)) CHECK(lie.field(0, x).norm() < 1e-9);
  }
}

TEST_CASE("non-sinusoid pairs fall back to quadrature") {
  const InputAffineSystem sys(VectorField::Zero(2),
                              {{FieldA(), DitherSignal::Square(1)}, {FieldB(), DitherSignal::Cosine(1)}}, 10.0);
  const auto lie = BuildLieBracketSystem(sys);
  CHECK_FALSE(lie.warnings.empty());
  REQUIRE(lie.coefficients.size() == 1);
  CHECK(lie.coefficients[0].method == NuMethod::kQuadrature);
  const double nu = NuQuadrature(DitherSignal::Cosine(1), DitherSignal::Square(1), 0).value;
  const auto br = LieBracket(FieldA(), FieldB());
  for (const Vec& x : RandomPoints(2, 10, 9)) {
    CHECK((lie.field(0, x) - nu * br(0, x)).norm() < 1e-12 * (1 + br(0, x).norm()));
  }
}

TEST_CASE("time-varying dithers get time-varying coefficients") {
  const auto inner = DitherSignal::Custom(
      [](double t, double s) { return (1 + 0.5 * std::sin(t)) * std::sin(s); }, 2 * pi,
      1.5, 0.5, "modulated", false);
  const InputAffineSystem sys(VectorField::Zero(2),
                              {{FieldA(), inner}, {FieldB(), DitherSignal::Cosine(1)}}, 10.0);
  const auto lie = BuildLieBracketSystem(sys);
  const auto br = LieBracket(FieldA(), FieldB());
  for (double t : {0.0, 1.0, 2.5}) {
    const Vec x = V({0.4, -0.9});
    const double nu = -0.5 * (1 + 0.5 * std::sin(t));
    CHECK((lie.field(t, x) - nu * br(t, x)).norm() < 1e-6);
  }
}

TEST_CASE("finite-difference fallback is reported") {
  const InputAffineSystem sys(VectorField::Zero(2),
                              {{FieldC(), DitherSignal::Sine(1)}, {FieldB(), DitherSignal::Cosine(1)}}, 10.0);
  CHECK(BuildLieBracketSystem(sys).finite_difference_fallback);
}
