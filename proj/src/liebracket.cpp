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
#include "lbes/liebracket.hpp"

#include <charconv>
#include <cmath>
#include <memory>

#include "quadrature.hpp"

namespace lbes {
namespace {

// Coefficients below this are treated as exact zeros of the quadrature.
constexpr double kNuZero = 1e-12;

bool SamePeriod(const DitherSignal& a, const DitherSignal& b) {
  return std::abs(a.period() - b.period()) <=
         1e-12 * std::max(a.period(), b.period());
}

}  // namespace

VectorField LieBracket(const VectorField& f, const VectorField& g) {
  if (f.dim() != g.dim()) {
    throw InvalidArgument("Lie bracket of fields with different dimensions");
  }
  return VectorField(
      f.dim(),
      [f, g](double t, const Vec& x) {
        return (g.Jacobian(t, x) * f(t, x) - f.Jacobian(t, x) * g(t, x)).eval();
      },
      nullptr, std::max(f.rate(), g.rate()));
}

NuOptions NuOptions::Parse(std::string_view text) {
  if (text == "closed_form") return {NuMethod::kClosedForm, 4096};
  constexpr std::string_view prefix = "quadrature";
  if (text.substr(0, prefix.size()) == prefix) {
    std::string_view rest = text.substr(prefix.size());
    if (rest.empty()) return {NuMethod::kQuadrature, 4096};
    if (rest.front() == ':') {
      rest.remove_prefix(1);
      int nodes = 0;
      const auto [ptr, ec] =
          std::from_chars(rest.data(), rest.data() + rest.size(), nodes);
      if (ec == std::errc() && ptr == rest.data() + rest.size() && nodes >= 8) {
        return {NuMethod::kQuadrature, nodes};
      }
    }
  }
  throw InvalidArgument("nu_method must be 'closed_form' or "
                        "'quadrature:<nodes>' with nodes >= 8, got '" +
                        std::string(text) + "'");
}

std::string NuOptions::ToString() const {
  if (method == NuMethod::kClosedForm) return "closed_form";
  return "quadrature:" + std::to_string(nodes);
}

NuCoefficient NuQuadrature(const DitherSignal& outer_j,
                           const DitherSignal& inner_i, double t, int nodes) {
  if (nodes < 8) throw InvalidArgument("nu quadrature needs nodes >= 8");
  if (!SamePeriod(outer_j, inner_i)) {
    throw InvalidArgument("nu quadrature needs signals with equal periods");
  }
  if (nodes % 2 != 0) ++nodes;
  const double period = outer_j.period();
  const double h = period / nodes;
  auto inner = [&](double s) { return inner_i(t, s); };
  // Running inner integral at every node.
  std::vector<double> running(nodes + 1, 0.0);
  for (int k = 0; k < nodes; ++k) {
    running[k + 1] = running[k] + detail::SimpsonCell(inner, k * h, (k + 1) * h);
  }
  double sum = 0.0;
  for (int k = 0; k <= nodes; ++k) {
    const double w = (k == 0 || k == nodes) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * outer_j(t, k * h) * running[k];
  }
  NuCoefficient nu;
  nu.value = sum * h / 3.0 / period;
  nu.method = NuMethod::kQuadrature;
  return nu;
}

double NuClosedForm(DitherKind outer_kind, int outer_n, DitherKind inner_kind,
                    int inner_n) {
  auto sinusoid = [](DitherKind k) {
    return k == DitherKind::kSine || k == DitherKind::kCosine;
  };
  if (!sinusoid(outer_kind) || !sinusoid(inner_kind)) {
    throw Unsupported("closed-form nu exists only for sine/cosine pairs; use "
                      "quadrature for " +
                      std::string(KindName(outer_kind)) + "/" +
                      std::string(KindName(inner_kind)));
  }
  if (outer_n < 1 || inner_n < 1) {
    throw InvalidArgument("harmonics must be positive");
  }
  if (outer_n != inner_n || outer_kind == inner_kind) return 0.0;
  const double magnitude = 1.0 / (2.0 * outer_n);
  return outer_kind == DitherKind::kSine ? magnitude : -magnitude;
}

LieBracketSystem BuildLieBracketSystem(const InputAffineSystem& sys,
                                       const NuOptions& options) {
  if (sys.amplitude_exponent() != 0.5) {
    throw InvalidArgument(
        "the Lie bracket system exists only for square-root-omega "
        "amplitudes (amplitude_exponent = 0.5)");
  }
  LieBracketSystem out;
  const auto& channels = sys.channels();

  struct Term {
    VectorField bracket;
    double nu;
    // Present only for time-varying dithers.
    std::shared_ptr<const DitherSignal> outer;
    std::shared_ptr<const DitherSignal> inner;
  };
  std::vector<Term> terms;

  for (std::size_t i = 0; i < channels.size(); ++i) {
    for (std::size_t j = i + 1; j < channels.size(); ++j) {
      const DitherSignal& uj = channels[j].dither;
      const DitherSignal& ui = channels[i].dither;
      const bool time_varying = !uj.time_invariant() || !ui.time_invariant();
      NuCoefficient nu;
      nu.j = static_cast<int>(j);
      nu.i = static_cast<int>(i);
      bool use_quadrature = options.method == NuMethod::kQuadrature ||
                            !uj.is_sinusoid() || !ui.is_sinusoid() ||
                            time_varying;
      if (!use_quadrature && !SamePeriod(uj, ui)) use_quadrature = true;
      if (use_quadrature && options.method == NuMethod::kClosedForm &&
          !time_varying) {
        out.warnings.push_back("pair (" + std::to_string(j) + "," +
                               std::to_string(i) + ") " + uj.name() + "/" +
                               ui.name() +
                               " has no closed form; used quadrature");
      }
      if (use_quadrature) {
        nu = NuQuadrature(uj, ui, 0.0, options.nodes);
        nu.j = static_cast<int>(j);
        nu.i = static_cast<int>(i);
      } else {
        nu.value = NuClosedForm(uj.kind(), uj.harmonic(), ui.kind(),
                                ui.harmonic());
        nu.method = NuMethod::kClosedForm;
      }
      if (!time_varying && std::abs(nu.value) <= kNuZero) continue;

      const VectorField& bi = channels[i].field;
      const VectorField& bj = channels[j].field;
      if (!bi.has_jacobian() || !bj.has_jacobian()) {
        out.finite_difference_fallback = true;
      }
      Term term{LieBracket(bi, bj), nu.value, nullptr, nullptr};
      if (time_varying) {
        term.outer = std::make_shared<const DitherSignal>(uj);
        term.inner = std::make_shared<const DitherSignal>(ui);
      }
      terms.push_back(std::move(term));
      out.coefficients.push_back(nu);
    }
  }
  if (out.finite_difference_fallback) {
    out.warnings.push_back(
        "some brackets use finite-difference Jacobians; accuracy is limited "
        "to about 1e-6 relative");
  }

  const VectorField drift = sys.drift();
  double rate = drift.rate();
  for (const auto& term : terms) rate = std::max(rate, term.bracket.rate());
  const int nodes = options.nodes;
  out.field = VectorField(
      sys.dim(),
      [drift, terms, nodes](double t, const Vec& z) {
        Vec dz = drift(t, z);
        for (const auto& term : terms) {
          double nu = term.nu;
          if (term.outer) nu = NuQuadrature(*term.outer, *term.inner, t, nodes).value;
          dz += nu * term.bracket(t, z);
        }
        return dz;
      },
      nullptr, rate);
  return out;
}

}  // namespace lbes
