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
#include "lbes/seekers.hpp"

#include <cmath>
#include <random>
#include <string>

namespace lbes {
namespace {

std::int64_t CheckedMul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw InvalidArgument("frequency decomposition overflows 64-bit integers");
  }
  return out;
}

Vec Positions(const Vec& x, int num_agents) {
  return x.head(2 * num_agents);
}

std::vector<Rational> Ratios(std::span<const AgentParams> params) {
  std::vector<Rational> ratios;
  ratios.reserve(params.size());
  for (const auto& p : params) ratios.push_back(p.a);
  return ratios;
}

// Drift: only the filter rows move, x_e' = -h x_e + f(xbar).
VectorField FilterDrift(const PotentialGame& game,
                        std::span<const AgentParams> params_span) {
  const int n_agents = game.num_agents;
  const int dim = 3 * n_agents;
  std::vector<AgentParams> params(params_span.begin(), params_span.end());
  auto maps = game.maps;
  return VectorField(
      dim,
      [=](double, const Vec& x) {
        Vec out = Vec::Zero(dim);
        const Vec xbar = Positions(x, n_agents);
        for (int i = 0; i < n_agents; ++i) {
          const int e = FilterIndex(n_agents, i);
          out[e] = -params[i].h * x[e] + maps[i](xbar);
        }
        return out;
      },
      [=](double, const Vec& x) {
        Mat jac = Mat::Zero(dim, dim);
        const Vec xbar = Positions(x, n_agents);
        for (int i = 0; i < n_agents; ++i) {
          const int e = FilterIndex(n_agents, i);
          jac.block(e, 0, 1, 2 * n_agents) = maps[i].Gradient(xbar).transpose();
          jac(e, e) = -params[i].h;
        }
        return jac;
      });
}

// Per-agent quantities used by all feedback fields.
struct AgentView {
  int index;
  int n_agents;
  AgentParams params;
  AgentMap map;

  // c (f^i(xbar) - h x_e^i)
  double Feedback(const Vec& x) const {
    return params.c *
           (map(Positions(x, n_agents)) - params.h * x[FilterIndex(n_agents, index)]);
  }
  // Gradient of Feedback over the full state.
  Vec FeedbackGradient(const Vec& x) const {
    Vec g = Vec::Zero(3 * n_agents);
    g.head(2 * n_agents) = params.c * map.Gradient(Positions(x, n_agents));
    g[FilterIndex(n_agents, index)] = -params.c * params.h;
    return g;
  }
};

}  // namespace

Vec AgentMap::Gradient(const Vec& x) const {
  if (gradient) return gradient(x);
  const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
  Vec g(x.size());
  Vec xp = x;
  Vec xm = x;
  for (int k = 0; k < x.size(); ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    g[k] = (value(xp) - value(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

PotentialGame ThreeAgentGame(bool drop_cross_term) {
  PotentialGame game;
  game.num_agents = 3;
  const double bx1 = drop_cross_term ? 0.0 : 1.0;

  AgentMap fa;
  fa.value = [bx1](const Vec& x) {
    return -0.5 * std::pow(x[0] - 1.0, 2) - 0.5 * std::pow(x[1] - 1.0, 2) +
           bx1 * x[2] * x[2] + x[3] * x[3] +
           std::exp(-x[4] * x[4] - x[5] * x[5]) - 10.0;
  };
  fa.gradient = [bx1](const Vec& x) {
    const double e = std::exp(-x[4] * x[4] - x[5] * x[5]);
    Vec g(6);
    g << -(x[0] - 1.0), -(x[1] - 1.0), 2.0 * bx1 * x[2], 2.0 * x[3],
        -2.0 * x[4] * e, -2.0 * x[5] * e;
    return g;
  };

  AgentMap fb;
  fb.value = [](const Vec& x) {
    return -0.5 * std::pow(x[2] + 1.0, 2) - 0.5 * std::pow(x[3] + 1.0, 2) +
           std::sin(x[0] + x[1]) - 10.0;
  };
  fb.gradient = [](const Vec& x) {
    const double c = std::cos(x[0] + x[1]);
    Vec g(6);
    g << c, c, -(x[2] + 1.0), -(x[3] + 1.0), 0.0, 0.0;
    return g;
  };

  AgentMap fc;
  fc.value = [](const Vec& x) {
    return -0.5 * std::pow(x[4] + 1.0, 2) - 1.5 * std::pow(x[5] - 1.0, 2) + 10.0;
  };
  fc.gradient = [](const Vec& x) {
    Vec g = Vec::Zero(6);
    g[4] = -(x[4] + 1.0);
    g[5] = -3.0 * (x[5] - 1.0);
    return g;
  };

  game.maps = {fa, fb, fc};
  Vec q(6);
  q << 1, 1, 1, 1, 1, 3;
  Vec xstar(6);
  xstar << 1, 1, -1, -1, -1, 1;
  game.potential = QuadraticGame(q, xstar).potential;
  game.known_maximizer = xstar;
  return game;
}

PotentialGame QuadraticGame(const Vec& q_diag, const Vec& xstar) {
  if (q_diag.size() != xstar.size() || xstar.size() == 0 ||
      xstar.size() % 2 != 0) {
    throw InvalidArgument("quadratic game needs Q diag and x* of equal even length");
  }
  if ((q_diag.array() <= 0.0).any()) {
    throw InvalidArgument("quadratic game needs a positive diagonal Q");
  }
  AgentMap f;
  f.value = [q_diag, xstar](const Vec& x) {
    const Vec d = x - xstar;
    return -0.5 * d.dot(q_diag.cwiseProduct(d));
  };
  f.gradient = [q_diag, xstar](const Vec& x) {
    return (-q_diag.cwiseProduct(x - xstar)).eval();
  };
  PotentialGame game;
  game.num_agents = static_cast<int>(xstar.size() / 2);
  game.maps.assign(game.num_agents, f);
  game.potential = f;
  game.known_maximizer = xstar;
  return game;
}

FrequencyDecomposition FrequencyDecompose(std::span<const Rational> ratios) {
  if (ratios.empty()) throw InvalidArgument("no frequency ratios");
  FrequencyDecomposition out;
  for (const auto& r : ratios) {
    if (r.num() <= 0) {
      throw InvalidArgument("frequency ratio " + r.ToString() +
                            " must be positive");
    }
    out.q = CheckedMul(out.q, r.den());
  }
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    std::int64_t n = ratios[i].num();
    for (std::size_t j = 0; j < ratios.size(); ++j) {
      if (j != i) n = CheckedMul(n, ratios[j].den());
    }
    out.harmonics.push_back(n);
  }
  return out;
}

void ValidateAgentParams(const PotentialGame& game,
                         std::span<const AgentParams> params,
                         bool require_turn_ratio) {
  if (game.num_agents < 1 ||
      static_cast<int>(game.maps.size()) != game.num_agents) {
    throw InvalidArgument("game needs one map per agent");
  }
  if (static_cast<int>(params.size()) != game.num_agents) {
    throw InvalidArgument("expected " + std::to_string(game.num_agents) +
                          " agent parameter blocks, got " +
                          std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    const std::string who = "agent " + std::to_string(i) + ": ";
    if (!(p.c >= 0.0)) throw InvalidArgument(who + "c must be >= 0");
    if (!(p.alpha > 0.0)) throw InvalidArgument(who + "alpha must be > 0");
    if (!(p.h > 0.0)) throw InvalidArgument(who + "h must be > 0");
    if (p.a.num() <= 0) throw InvalidArgument(who + "a must be > 0");
    if (require_turn_ratio && !p.d) {
      throw InvalidArgument(who + "unicycle agents need a turn-rate ratio d");
    }
    if (p.d && p.d->num() <= 0) throw InvalidArgument(who + "d must be > 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (params[j].a == p.a) {
        throw InvalidArgument("agents " + std::to_string(j) + " and " +
                              std::to_string(i) +
                              " share frequency ratio " + p.a.ToString() +
                              "; ratios must be distinct");
      }
    }
  }
}

InputAffineSystem BuildSingleIntegrator(const PotentialGame& game,
                                        std::span<const AgentParams> params,
                                        double omega,
                                        double amplitude_exponent) {
  ValidateAgentParams(game, params, false);
  const auto ratios = Ratios(params);
  const FrequencyDecomposition freq = FrequencyDecompose(ratios);
  const int n_agents = game.num_agents;
  const int dim = 3 * n_agents;

  std::vector<Channel> channels;
  for (int i = 0; i < n_agents; ++i) {
    const AgentView agent{i, n_agents, params[i], game.maps[i]};
    const int n = static_cast<int>(freq.harmonics[i]);
    const double s = std::pow(static_cast<double>(n), amplitude_exponent);
    const int p1 = PositionIndex(i, 0);
    const int p2 = PositionIndex(i, 1);

    VectorField b1(
        dim,
        [=](double, const Vec& x) {
          Vec out = Vec::Zero(dim);
          out[p1] = s * agent.Feedback(x);
          out[p2] = s * agent.params.alpha;
          return out;
        },
        [=](double, const Vec& x) {
          Mat jac = Mat::Zero(dim, dim);
          jac.row(p1) = s * agent.FeedbackGradient(x).transpose();
          return jac;
        });
    VectorField b2(
        dim,
        [=](double, const Vec& x) {
          Vec out = Vec::Zero(dim);
          out[p1] = s * agent.params.alpha;
          out[p2] = -s * agent.Feedback(x);
          return out;
        },
        [=](double, const Vec& x) {
          Mat jac = Mat::Zero(dim, dim);
          jac.row(p2) = -s * agent.FeedbackGradient(x).transpose();
          return jac;
        });
    channels.push_back({b1, DitherSignal::Builtin(params[i].dithers[0], n)});
    channels.push_back({b2, DitherSignal::Builtin(params[i].dithers[1], n)});
  }
  return InputAffineSystem(FilterDrift(game, params), std::move(channels),
                           omega / static_cast<double>(freq.q),
                           amplitude_exponent);
}

VectorField AnalyticLieSingleIntegrator(const PotentialGame& game,
                                        std::span<const AgentParams> params_span) {
  ValidateAgentParams(game, params_span, false);
  const int n_agents = game.num_agents;
  const int dim = 3 * n_agents;
  std::vector<AgentParams> params(params_span.begin(), params_span.end());
  const auto maps = game.maps;
  const VectorField drift = FilterDrift(game, params);
  return VectorField(dim, [=](double t, const Vec& z) {
    Vec dz = drift(t, z);
    const Vec zbar = Positions(z, n_agents);
    for (int i = 0; i < n_agents; ++i) {
      const auto& p = params[i];
      const Vec grad = maps[i].Gradient(zbar);
      const double g1 = grad[PositionIndex(i, 0)];
      const double g2 = grad[PositionIndex(i, 1)];
      const double e = maps[i](zbar) - z[FilterIndex(n_agents, i)] * p.h;
      dz[PositionIndex(i, 0)] = 0.5 * (p.c * p.alpha * g1 - p.c * p.c * g2 * e);
      dz[PositionIndex(i, 1)] = 0.5 * (p.c * p.alpha * g2 + p.c * p.c * g1 * e);
    }
    return dz;
  });
}

InputAffineSystem BuildUnicycle(const PotentialGame& game,
                                std::span<const AgentParams> params,
                                double turn_rate, double omega,
                                double amplitude_exponent) {
  ValidateAgentParams(game, params, true);
  if (turn_rate == 0.0 || !std::isfinite(turn_rate)) {
    throw InvalidArgument("unicycle turn rate Omega must be non-zero");
  }
  const auto ratios = Ratios(params);
  const FrequencyDecomposition freq = FrequencyDecompose(ratios);
  const int n_agents = game.num_agents;
  const int dim = 3 * n_agents;

  std::vector<Channel> channels;
  for (int i = 0; i < n_agents; ++i) {
    const AgentView agent{i, n_agents, params[i], game.maps[i]};
    const int n = static_cast<int>(freq.harmonics[i]);
    const double s = std::pow(static_cast<double>(n), amplitude_exponent);
    const double heading_rate = params[i].d->value() * turn_rate;
    const int p1 = PositionIndex(i, 0);
    const int p2 = PositionIndex(i, 1);
    const double rate = std::abs(heading_rate);

    VectorField b1(
        dim,
        [=](double t, const Vec& x) {
          Vec out = Vec::Zero(dim);
          const double v = s * agent.Feedback(x);
          out[p1] = v * std::cos(heading_rate * t);
          out[p2] = v * std::sin(heading_rate * t);
          return out;
        },
        [=](double t, const Vec& x) {
          Mat jac = Mat::Zero(dim, dim);
          const Vec g = s * agent.FeedbackGradient(x);
          jac.row(p1) = std::cos(heading_rate * t) * g.transpose();
          jac.row(p2) = std::sin(heading_rate * t) * g.transpose();
          return jac;
        },
        rate);
    VectorField b2(
        dim,
        [=](double t, const Vec&) {
          Vec out = Vec::Zero(dim);
          out[p1] = s * agent.params.alpha * std::cos(heading_rate * t);
          out[p2] = s * agent.params.alpha * std::sin(heading_rate * t);
          return out;
        },
        [=](double, const Vec&) { return Mat::Zero(dim, dim).eval(); }, rate);
    channels.push_back({b1, DitherSignal::Builtin(params[i].dithers[0], n)});
    channels.push_back({b2, DitherSignal::Builtin(params[i].dithers[1], n)});
  }
  return InputAffineSystem(FilterDrift(game, params), std::move(channels),
                           omega / static_cast<double>(freq.q),
                           amplitude_exponent);
}

VectorField AnalyticLieUnicycle(const PotentialGame& game,
                                std::span<const AgentParams> params_span,
                                double turn_rate) {
  ValidateAgentParams(game, params_span, true);
  if (turn_rate == 0.0 || !std::isfinite(turn_rate)) {
    throw InvalidArgument("unicycle turn rate Omega must be non-zero");
  }
  const int n_agents = game.num_agents;
  const int dim = 3 * n_agents;
  std::vector<AgentParams> params(params_span.begin(), params_span.end());
  const auto maps = game.maps;
  const VectorField drift = FilterDrift(game, params);
  double rate = 0.0;
  for (const auto& p : params) {
    rate = std::max(rate, std::abs(p.d->value() * turn_rate));
  }
  return VectorField(
      dim,
      [=](double t, const Vec& z) {
        Vec dz = drift(t, z);
        const Vec zbar = Positions(z, n_agents);
        for (int i = 0; i < n_agents; ++i) {
          const auto& p = params[i];
          const Vec grad = maps[i].Gradient(zbar);
          const double g1 = grad[PositionIndex(i, 0)];
          const double g2 = grad[PositionIndex(i, 1)];
          const double th = p.d->value() * turn_rate * t;
          const double co = std::cos(th);
          const double si = std::sin(th);
          const double ca = p.c * p.alpha;
          dz[PositionIndex(i, 0)] = 0.5 * (ca * g1 * co * co + ca * g2 * co * si);
          dz[PositionIndex(i, 1)] = 0.5 * (ca * g2 * si * si + ca * g1 * co * si);
        }
        return dz;
      },
      nullptr, rate);
}

double LieUnicyclePeriod(std::span<const AgentParams> params, double turn_rate) {
  if (turn_rate == 0.0) throw InvalidArgument("turn rate must be non-zero");
  std::int64_t l = 1;
  for (const auto& p : params) {
    if (!p.d) throw InvalidArgument("unicycle agents need d");
    l = CheckedMul(l, p.d->den());
  }
  return kTwoPi / std::abs(turn_rate) * static_cast<double>(l);
}

double UnicycleLyapunovRate(const PotentialGame& game,
                            std::span<const AgentParams> params,
                            double turn_rate, double t, const Vec& z) {
  ValidateAgentParams(game, params, true);
  const int n_agents = game.num_agents;
  const Vec grad = game.potential.Gradient(Positions(z, n_agents));
  double rate = 0.0;
  for (int i = 0; i < n_agents; ++i) {
    const auto& p = params[i];
    const double th = p.d->value() * turn_rate * t;
    const double w = grad[PositionIndex(i, 0)] * std::cos(th) +
                     grad[PositionIndex(i, 1)] * std::sin(th);
    rate -= 0.5 * p.c * p.alpha * w * w;
  }
  return rate;
}

InputAffineSystem BuildScalarScheme(const AgentMap& f, double alpha,
                                    double omega, double amplitude_exponent) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  Vec a(1);
  a[0] = alpha;
  VectorField b1 = VectorField::Constant(a);
  VectorField b2(
      1,
      [f](double, const Vec& x) {
        Vec out(1);
        out[0] = f(x);
        return out;
      },
      [f](double, const Vec& x) {
        Mat jac(1, 1);
        jac(0, 0) = f.Gradient(x)[0];
        return jac;
      });
  std::vector<Channel> channels{{b1, DitherSignal::Cosine(1)},
                                {b2, DitherSignal::Sine(1)}};
  return InputAffineSystem(VectorField::Zero(1), std::move(channels), omega,
                           amplitude_exponent);
}

VectorField AnalyticLieScalar(const AgentMap& f, double alpha) {
  return VectorField(1, [f, alpha](double, const Vec& z) {
    return (0.5 * alpha * f.Gradient(z)).eval();
  });
}

AgentMap ScalarQuadraticMap(double peak) {
  AgentMap f;
  f.value = [peak](const Vec& x) { return -(x[0] - peak) * (x[0] - peak); };
  f.gradient = [peak](const Vec& x) {
    Vec g(1);
    g[0] = -2.0 * (x[0] - peak);
    return g;
  };
  return f;
}

CompatibilityReport CheckPotentialCompatibility(const PotentialGame& game,
                                                int samples, double tol,
                                                std::uint64_t seed,
                                                double radius) {
  CompatibilityReport report;
  const int dim = game.position_dim();
  const Vec center =
      game.known_maximizer ? *game.known_maximizer : Vec::Zero(dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Vec x(dim);
    for (int k = 0; k < dim; ++k) x[k] = center[k] + radius * unit(rng);
    const Vec gf = game.potential.Gradient(x);
    for (int i = 0; i < game.num_agents; ++i) {
      const Vec gi = game.maps[i].Gradient(x);
      const double d = (gi.segment(2 * i, 2) - gf.segment(2 * i, 2)).norm();
      report.max_discrepancy = std::max(report.max_discrepancy, d);
    }
    ++report.samples;
  }
  report.passed = report.max_discrepancy < tol;
  return report;
}

double StationarityResidual(const PotentialGame& game) {
  if (!game.known_maximizer) throw InvalidArgument("game has no known maximizer");
  return game.potential.Gradient(*game.known_maximizer).norm();
}

Vec FilterEquilibrium(const PotentialGame& game,
                      std::span<const AgentParams> params, const Vec& xbar) {
  if (static_cast<int>(params.size()) != game.num_agents) {
    throw InvalidArgument("parameter count does not match agent count");
  }
  Vec out(game.num_agents);
  for (int i = 0; i < game.num_agents; ++i) {
    out[i] = game.maps[i](xbar) / params[i].h;
  }
  return out;
}

Vec TargetState(const PotentialGame& game, std::span<const AgentParams> params) {
  if (!game.known_maximizer) throw InvalidArgument("game has no known maximizer");
  const Vec& xstar = *game.known_maximizer;
  Vec target(3 * game.num_agents);
  target << xstar, FilterEquilibrium(game, params, xstar);
  return target;
}

}  // namespace lbes
