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
#include "lbes/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lbes {

VectorField::VectorField(int dim, EvalFn eval, JacobianFn jacobian,
                         double rate)
    : dim_(dim),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      rate_(rate) {
  if (dim_ < 1) throw InvalidArgument("vector field dimension must be >= 1");
  if (!eval_) throw InvalidArgument("vector field without evaluator");
  if (!(rate_ >= 0.0)) throw InvalidArgument("field rate must be >= 0");
}

VectorField VectorField::Zero(int dim) {
  return VectorField(
      dim, [dim](double, const Vec&) { return Vec::Zero(dim).eval(); },
      [dim](double, const Vec&) { return Mat::Zero(dim, dim).eval(); });
}

VectorField VectorField::Constant(const Vec& value) {
  const int n = static_cast<int>(value.size());
  return VectorField(
      n, [value](double, const Vec&) { return value; },
      [n](double, const Vec&) { return Mat::Zero(n, n).eval(); });
}

VectorField VectorField::Linear(const Mat& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("linear field needs square A");
  return VectorField(
      static_cast<int>(a.rows()),
      [a](double, const Vec& x) { return (a * x).eval(); },
      [a](double, const Vec&) { return a; });
}

Vec VectorField::operator()(double t, const Vec& x) const {
  if (x.size() != dim_) {
    throw InvalidArgument("state has length " + std::to_string(x.size()) +
                          ", field expects " + std::to_string(dim_));
  }
  Vec out = eval_(t, x);
  if (out.size() != dim_) {
    throw InvalidArgument("field returned length " +
                          std::to_string(out.size()) + ", expected " +
                          std::to_string(dim_));
  }
  return out;
}

Mat VectorField::Jacobian(double t, const Vec& x) const {
  if (jacobian_) return jacobian_(t, x);
  return FiniteDiffJacobian(*this, t, x);
}

VectorField VectorField::Scaled(double c) const {
  auto eval = eval_;
  JacobianFn jac;
  if (jacobian_) {
    jac = [c, j = jacobian_](double t, const Vec& x) {
      return (c * j(t, x)).eval();
    };
  }
  return VectorField(
      dim_, [c, eval](double t, const Vec& x) { return (c * eval(t, x)).eval(); },
      std::move(jac), rate_);
}

VectorField LinearCombination(
    const std::vector<std::pair<double, VectorField>>& terms) {
  if (terms.empty()) throw InvalidArgument("empty linear combination");
  const int n = terms.front().second.dim();
  bool all_jac = true;
  double rate = 0.0;
  for (const auto& [c, f] : terms) {
    if (f.dim() != n) throw InvalidArgument("dimension mismatch in combination");
    all_jac = all_jac && f.has_jacobian();
    rate = std::max(rate, f.rate());
  }
  VectorField::JacobianFn jac;
  if (all_jac) {
    jac = [terms, n](double t, const Vec& x) {
      Mat j = Mat::Zero(n, n);
      for (const auto& [c, f] : terms) j += c * f.Jacobian(t, x);
      return j;
    };
  }
  return VectorField(
      n,
      [terms, n](double t, const Vec& x) {
        Vec out = Vec::Zero(n);
        for (const auto& [c, f] : terms) out += c * f(t, x);
        return out;
      },
      std::move(jac), rate);
}

Mat FiniteDiffJacobian(const VectorField& field, double t, const Vec& x,
                       double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be > 0");
  const int n = field.dim();
  Mat jac(n, n);
  Vec xp = x;
  Vec xm = x;
  for (int k = 0; k < n; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    const Vec fp = field(t, xp);
    const Vec fm = field(t, xm);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NumericalError("non-finite field value in finite differences");
    }
    jac.col(k) = (fp - fm) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return jac;
}

Mat FiniteDiffJacobian(const VectorField& field, double t, const Vec& x) {
  const double scale = x.size() > 0 ? std::max(1.0, x.cwiseAbs().maxCoeff())
                                    : 1.0;
  return FiniteDiffJacobian(field, t, x, 1e-6 * scale);
}

double JacobianDiscrepancy(const VectorField& field, double t, const Vec& x) {
  if (!field.has_jacobian()) {
    throw InvalidArgument("field has no analytic Jacobian to check");
  }
  const Mat analytic = field.Jacobian(t, x);
  const Mat fd = FiniteDiffJacobian(field, t, x);
  double worst = 0.0;
  for (int r = 0; r < analytic.rows(); ++r) {
    for (int c = 0; c < analytic.cols(); ++c) {
      const double scale = std::max(1.0, std::abs(analytic(r, c)));
      worst = std::max(worst, std::abs(analytic(r, c) - fd(r, c)) / scale);
    }
  }
  return worst;
}

InputAffineSystem::InputAffineSystem(VectorField drift,
                                     std::vector<Channel> channels,
                                     double omega, double amplitude_exponent)
    : drift_(std::move(drift)),
      channels_(std::move(channels)),
      omega_(omega),
      amplitude_exponent_(amplitude_exponent) {
  if (!drift_.valid()) throw InvalidArgument("system without drift field");
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) {
    throw InvalidArgument("omega must be positive and finite");
  }
  if (amplitude_exponent_ != 0.5 && amplitude_exponent_ != 1.0) {
    throw InvalidArgument("amplitude exponent must be 0.5 or 1.0");
  }
  for (const auto& ch : channels_) {
    if (ch.field.dim() != drift_.dim()) {
      throw InvalidArgument("channel field dimension " +
                            std::to_string(ch.field.dim()) +
                            " does not match drift dimension " +
                            std::to_string(drift_.dim()));
    }
  }
}

double InputAffineSystem::fastest_rate() const {
  double rate = drift_.rate();
  for (const auto& ch : channels_) {
    rate = std::max({rate, ch.field.rate(), omega_ * ch.dither.angular_rate()});
  }
  return rate;
}

VectorField AssembleRhs(const InputAffineSystem& sys) {
  if (sys.channels().empty()) return sys.drift();
  const double gain = std::pow(sys.omega(), sys.amplitude_exponent());
  const double omega = sys.omega();
  const auto drift = sys.drift();
  const auto channels = sys.channels();
  bool all_jac = drift.has_jacobian();
  for (const auto& ch : channels) all_jac = all_jac && ch.field.has_jacobian();

  VectorField::JacobianFn jac;
  if (all_jac) {
    jac = [=](double t, const Vec& x) {
      Mat j = drift.Jacobian(t, x);
      for (const auto& ch : channels) {
        j += gain * ch.dither(t, omega * t) * ch.field.Jacobian(t, x);
      }
      return j;
    };
  }
  return VectorField(
      sys.dim(),
      [=](double t, const Vec& x) {
        Vec out = drift(t, x);
        for (const auto& ch : channels) {
          out += gain * ch.dither(t, omega * t) * ch.field(t, x);
        }
        return out;
      },
      std::move(jac), sys.fastest_rate());
}

}  // namespace lbes
