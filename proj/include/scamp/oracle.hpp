// Copyright 2026 The scamp Authors
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

// Direct numerical quadrature of the phase-averaged success probability.
// Serves as the independent check on the Bessel closed forms in analytic.hpp.

#ifndef SCAMP_ORACLE_HPP_
#define SCAMP_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "scamp/core.hpp"
#include "scamp/errors.hpp"

namespace scamp {

struct QuadratureSettings {
  std::size_t initial_intervals = 4096;
  std::size_t max_intervals = std::size_t{1} << 20;
  double relative_tolerance = 1e-10;
};

/// (1/2pi) * integral_0^{2pi} dtheta
///     exp[-2 eta1 a^2 t1^2 (1 - cos)] *
///     (1 - exp{-eta2 a^2 r2^2 [1 - 2 r1^2 (1 - r1^2)(1 - cos)] / r1^2})
///
/// by composite Simpson, doubling the interval count until two successive
/// estimates agree to `relative_tolerance`. `eta1_override` replaces the
/// comparison efficiency (e.g. eta1 + G - t2^2 for the fidelity numerator)
/// and may exceed 1. Dark counts are ignored.
namespace detail {

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace detail

inline double phase_quadrature_oracle(double alpha, const AmplifierConfig& cfg,
                                      std::optional<double> eta1_override = {},
                                      const QuadratureSettings& settings = {}) {
  detail::require(std::isfinite(alpha) && alpha > 0.0,
                  "phase_quadrature_oracle: alpha must be positive");
  const double eta1 = eta1_override.value_or(cfg.d1().eta());
  const double eta2 = cfg.d2().eta();
  detail::require(eta1 >= 0.0, "phase_quadrature_oracle: eta1 must be >= 0");
  const double a2 = alpha * alpha;
  const double r1_sq = cfg.t2_sq() / cfg.intensity_gain();
  const double t1_sq = 1.0 - r1_sq;
  const double r2_sq = 1.0 - cfg.t2_sq();

  auto integrand = [&](double theta) {
    const double one_minus_cos = 1.0 - std::cos(theta);
    const double veto = std::exp(-2.0 * eta1 * a2 * t1_sq * one_minus_cos);
    const double herald_mean =
        eta2 * a2 * r2_sq * (1.0 - 2.0 * r1_sq * (1.0 - r1_sq) * one_minus_cos) /
        r1_sq;
    return veto * -std::expm1(-herald_mean);
  };

  auto simpson = [&](std::size_t n) {
    const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
    // Neumaier-compensated sums keep the rounding error independent of n.
    detail::CompensatedSum odd, even;
    for (std::size_t i = 1; i < n; ++i) {
      const double f = integrand(h * static_cast<double>(i));
      (i % 2 == 1 ? odd : even).add(f);
    }
    const double ends = integrand(0.0) + integrand(2.0 * std::numbers::pi);
    const double weighted = ends + 4.0 * odd.value() + 2.0 * even.value();
    return weighted / (3.0 * static_cast<double>(n));
  };

  std::size_t n = settings.initial_intervals;
  double previous = simpson(n);
  while (n < settings.max_intervals) {
    n *= 2;
    const double current = simpson(n);
    const double change = std::abs(current - previous);
    if (change <= settings.relative_tolerance * std::abs(current)) return current;
    previous = current;
  }
  throw NonConvergence("phase_quadrature_oracle: no convergence within " +
                       std::to_string(settings.max_intervals) + " intervals");
}

}  // namespace scamp

#endif  // SCAMP_ORACLE_HPP_
