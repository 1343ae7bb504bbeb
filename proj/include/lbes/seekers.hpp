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
#ifndef LBES_SEEKERS_HPP_
#define LBES_SEEKERS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lbes/dynamics.hpp"
#include "lbes/rational.hpp"
#include "lbes/signals.hpp"

namespace lbes {

// A scalar map on positions with an optional analytic gradient.
struct AgentMap {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;

  double operator()(const Vec& x) const { return value(x); }
  // Analytic gradient, or central differences when none was supplied.
  Vec Gradient(const Vec& x) const;
};

// N agents, each with an individual map f^i on R^{2N} (all agent positions),
// plus the potential F whose agent blocks of the gradient must agree with
// those of the individual maps.
struct PotentialGame {
  int num_agents = 0;
  std::vector<AgentMap> maps;
  AgentMap potential;
  std::optional<Vec> known_maximizer;

  int position_dim() const { return 2 * num_agents; }
};

// The bundled three-agent game with potential
// F = -1/2 (x - x*)^T Q (x - x*), Q = diag(1, 1, 1, 1, 1, 3),
// x* = [1, 1, -1, -1, -1, 1]. With drop_cross_term the (x_1^b)^2 term is
// removed from f^a, which leaves agent a's own block untouched.
PotentialGame ThreeAgentGame(bool drop_cross_term = false);

// Identical-interest game: every agent maximizes
// F = -1/2 (x - x*)^T diag(q) (x - x*). q and xstar have length 2N.
PotentialGame QuadraticGame(const Vec& q_diag, const Vec& xstar);

// Feedback gain c, dither amplitude alpha, washout pole h (filter
// s / (s + h)), frequency ratio a (omega^i = a omega) and, for unicycles,
// the turn-rate ratio d (Omega^i = d Omega). c = 0 is accepted as a
// no-feedback control case.
struct AgentParams {
  double c = 0.3;
  double alpha = 1.0;
  double h = 1.0;
  Rational a{1};
  std::optional<Rational> d;
  // Kinds of the two dithers; harmonics come from the frequency
  // decomposition.
  std::array<DitherKind, 2> dithers{DitherKind::kSine, DitherKind::kCosine};
};

struct FrequencyDecomposition {
  std::int64_t q = 1;                   // base frequency is omega / q
  std::vector<std::int64_t> harmonics;  // a_i omega = n_i omega / q
};

// q = prod q_i, n_i = p_i prod_{j != i} q_j. Throws on non-positive ratios
// or integer overflow.
FrequencyDecomposition FrequencyDecompose(std::span<const Rational> ratios);

// State layout for both multi-agent architectures: [xbar (2N), xbar_e (N)],
// agent i owns positions 2i, 2i + 1 and filter slot 2N + i. Unicycle
// headings are not states; they are Omega^i t.
inline int PositionIndex(int agent, int coord) { return 2 * agent + coord; }
inline int FilterIndex(int num_agents, int agent) {
  return 2 * num_agents + agent;
}

// Single-integrator agents with high-pass filtered feedback. Channels are
// ordered agent by agent: (b1^i, u1) then (b2^i, u2), each scaled by
// n_i^gamma and driven at the base frequency omega / q. Throws on
// duplicate ratios a_i.
InputAffineSystem BuildSingleIntegrator(const PotentialGame& game,
                                        std::span<const AgentParams> params,
                                        double omega,
                                        double amplitude_exponent = 0.5);

// Closed-form averaged field of the single-integrator scheme.
VectorField AnalyticLieSingleIntegrator(const PotentialGame& game,
                                        std::span<const AgentParams> params);

// Unicycles whose forward speed carries the seeking feedback and whose
// heading is Omega^i t with Omega^i = d_i Omega. Requires every d_i and
// Omega != 0.
InputAffineSystem BuildUnicycle(const PotentialGame& game,
                                std::span<const AgentParams> params,
                                double turn_rate, double omega,
                                double amplitude_exponent = 0.5);

VectorField AnalyticLieUnicycle(const PotentialGame& game,
                                std::span<const AgentParams> params,
                                double turn_rate);

// Period of the unicycle Lie field: (2 pi / |Omega|) prod l_i with
// d_i = k_i / l_i.
double LieUnicyclePeriod(std::span<const AgentParams> params, double turn_rate);

// dV/dt for V = -F along the unicycle Lie field, in the closed form
// -sum_i (c alpha / 2) (grad_1 F cos + grad_2 F sin)^2.
double UnicycleLyapunovRate(const PotentialGame& game,
                            std::span<const AgentParams> params,
                            double turn_rate, double t, const Vec& z);

// The basic scalar loop x' = alpha sqrt(omega) cos(omega t)
// + f(x) sqrt(omega) sin(omega t): channel 1 is (alpha, cosine:1), channel 2
// is (f, sine:1). f acts on a length-1 vector.
InputAffineSystem BuildScalarScheme(const AgentMap& f, double alpha,
                                    double omega,
                                    double amplitude_exponent = 0.5);
// z' = (alpha / 2) f'(z).
VectorField AnalyticLieScalar(const AgentMap& f, double alpha);
// f(x) = -(x - peak)^2.
AgentMap ScalarQuadraticMap(double peak);

struct CompatibilityReport {
  double max_discrepancy = 0.0;
  int samples = 0;
  bool passed = false;
};

// Max over random points and agents of |grad_{x^i} f^i - grad_{x^i} F|. Points
// are uniform in a box of half-width radius around the known maximizer (or
// the origin).
CompatibilityReport CheckPotentialCompatibility(const PotentialGame& game,
                                                int samples, double tol,
                                                std::uint64_t seed = 7,
                                                double radius = 3.0);

// |grad F(x*)| at the known maximizer; throws if there is none.
double StationarityResidual(const PotentialGame& game);

// Component i is f^i(xbar) / h^i.
Vec FilterEquilibrium(const PotentialGame& game,
                      std::span<const AgentParams> params, const Vec& xbar);

// [x*, FilterEquilibrium(x*)]; throws if the game has no known maximizer.
Vec TargetState(const PotentialGame& game, std::span<const AgentParams> params);

// Checks sizes, positivity (c may be 0) and distinct ratios a_i.
void ValidateAgentParams(const PotentialGame& game,
                         std::span<const AgentParams> params,
                         bool require_turn_ratio);

}  // namespace lbes

#endif  // LBES_SEEKERS_HPP_
