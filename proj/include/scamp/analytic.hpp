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

// Closed-form performance metrics of the state-comparison amplifier.
//
// Two levels are provided. success_prob_given / fidelity_test_prob treat a
// single pair of pure coherent inputs (input alpha, guess beta) and accept
// arbitrary detectors. The ensemble functions specialise to Bob's nulling
// guess t1*alpha/r1 with alpha real and positive, and assume dark-count-free
// detectors; they reject configurations with dark counts.
//
// Shorthands used below, with G the intensity gain and alpha real:
//   X = 1 - exp(-eta2 G a^2 (1/t2^2 - 1))               correct input heralds
//   Y = exp(-4 eta1 a^2 (1 - t2^2/G))                   wrong input not vetoed
//   Z = 1 - exp(-eta2 G a^2 (1/t2^2 - 1)(1 - 2t2^2/G)^2) wrong input heralds
//   W = exp(-4 G a^2 (1 - t2^2/G)^2)                    wrong output overlap
//   P(S) = (X + Y Z)/2,  P(T,S) = (X + Y Z W)/2.

#ifndef SCAMP_ANALYTIC_HPP_
#define SCAMP_ANALYTIC_HPP_

#include <algorithm>
#include <cmath>

#include "scamp/bessel.hpp"
#include "scamp/core.hpp"
#include "scamp/errors.hpp"

namespace scamp {

struct BinaryMetrics {
  double p_success;
  double p_joint;
  double fidelity;
  double p_plus_given_s;
  double p_minus_given_s;
};

struct QuadratureMoments {
  double mean_x1;
  double mean_x1_sq;
  double variance;
  double snr_out;
  double noise_figure;
};

/// P(S | alpha, beta): comparison detector silent and subtraction detector
/// fires, for pure coherent inputs. Honors efficiencies and dark counts.
inline double success_prob_given(ComplexAmplitude alpha, ComplexAmplitude beta,
                                 const AmplifierConfig& cfg) {
  const auto out = beam_splitter_transform(alpha, beta, cfg.comparison_splitter());
  const ComplexAmplitude subtraction_arm = cfg.r2() * out.kept;
  return no_click_probability(out.detector, cfg.d1()) *
         (1.0 - no_click_probability(subtraction_arm, cfg.d2()));
}

/// Overlap of the heralded output t2*(t1*beta + r1*alpha_in) with the target
/// g*alpha_in. The target is built from Alice's actual input.
inline double fidelity_test_prob(ComplexAmplitude alpha_in, ComplexAmplitude beta,
                                 const AmplifierConfig& cfg) {
  const auto out =
      beam_splitter_transform(alpha_in, beta, cfg.comparison_splitter());
  return coherent_overlap(cfg.t2() * out.kept, cfg.g() * alpha_in);
}

namespace detail {

inline void require_dark_free(const AmplifierConfig& cfg) {
  require(cfg.d1().dark_prob() == 0.0 && cfg.d2().dark_prob() == 0.0,
          "closed forms assume dark-count-free detectors; use the Monte Carlo "
          "path for dark counts");
}

struct BinaryTerms {
  double x, y, z, w;
};

inline BinaryTerms binary_terms(double alpha, const AmplifierConfig& cfg) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
  require_dark_free(cfg);
  const double a2 = alpha * alpha;
  const double gain = cfg.intensity_gain();
  const double ratio = cfg.t2_sq() / gain;  // r1^2
  const double eta1 = cfg.d1().eta();
  const double eta2 = cfg.d2().eta();
  const double herald = eta2 * gain * a2 * (1.0 / cfg.t2_sq() - 1.0);
  const double k = 1.0 - 2.0 * ratio;
  return {-std::expm1(-herald),
          std::exp(-4.0 * eta1 * a2 * (1.0 - ratio)),
          -std::expm1(-herald * k * k),
          std::exp(-4.0 * gain * a2 * (1.0 - ratio) * (1.0 - ratio))};
}

}  // namespace detail

/// Success probability for the binary alphabet; zero is a valid answer here.
inline double binary_success_prob(double alpha, const AmplifierConfig& cfg) {
  const auto t = detail::binary_terms(alpha, cfg);
  return 0.5 * (t.x + t.y * t.z);
}

/// Binary-alphabet metrics with Bob's guess fixed at +t1*alpha/r1.
/// Throws NeverSucceeds when P(S) = 0.
inline BinaryMetrics binary_metrics(double alpha, const AmplifierConfig& cfg) {
  const auto t = detail::binary_terms(alpha, cfg);
  const double wrong = t.y * t.z;
  const double total = t.x + wrong;
  if (!(total > 0.0)) throw NeverSucceeds();
  const double p_success = 0.5 * total;
  const double p_joint = 0.5 * (t.x + wrong * t.w);
  const double p_plus = t.x / total;
  return {p_success, p_joint, std::min(1.0, p_joint / p_success), p_plus,
          wrong / total};
}

/// x1-quadrature moments of the heralded binary output and the resulting
/// noise figure SNR_out / SNR_in with SNR_in = 2*alpha.
///
/// The variance is evaluated as 1/2 + 2 G a^2 P(+|S) P(-|S) (1 - k)^2 with
/// k = 1 - 2 t2^2/G, which is algebraically <x1^2> - <x1>^2 but cannot go
/// negative through cancellation.
inline QuadratureMoments binary_quadrature_moments(double alpha,
                                                   const AmplifierConfig& cfg) {
  const BinaryMetrics m = binary_metrics(alpha, cfg);
  const double gain = cfg.intensity_gain();
  const double k = 1.0 - 2.0 * cfg.t2_sq() / gain;
  const double p = m.p_plus_given_s;
  const double q = m.p_minus_given_s;
  const double mean_x1 = std::sqrt(2.0 * gain) * alpha * (p + k * q);
  const double mean_x1_sq =
      0.5 * (1.0 + 4.0 * gain * alpha * alpha * (p + k * k * q));
  const double variance =
      0.5 + 2.0 * gain * alpha * alpha * p * q * (1.0 - k) * (1.0 - k);
  const double snr = mean_x1 / std::sqrt(variance);
  return {mean_x1, mean_x1_sq, variance, snr, snr / (2.0 * alpha)};
}

namespace detail {

// (1/2pi) * integral over theta of the phase-averaged success integrand,
// e^{-A} I0(A) - e^{-A-B+C} I0(A-C), with raw efficiencies so that the
// fidelity numerator can pass eta1 + G - t2^2 (which exceeds 1).
//
// I0 is even, so the second term is e^{-B} * e^{-D} I0(|D|) with D = A - C,
// i.e. e^{-B - D + |D|} * bessel_i0_scaled(|D|). The exponent -B - D + |D|
// is never positive over the valid domain.
inline double phase_average(double alpha_sq, double gain, double t2_sq,
                            double eta1, double eta2) {
  const double t1_sq = 1.0 - t2_sq / gain;
  const double a = 2.0 * eta1 * alpha_sq * t1_sq;
  const double b = eta2 * alpha_sq * gain * (1.0 / t2_sq - 1.0);
  const double c = 2.0 * eta2 * alpha_sq * (1.0 - t2_sq) * t1_sq;
  const double d = a - c;
  const double value = bessel_i0_scaled(a) -
                       std::exp(-b - d + std::abs(d)) * bessel_i0_scaled(std::abs(d));
  return std::clamp(value, 0.0, 1.0);
}

inline void require_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
}

}  // namespace detail

/// P(S) for inputs of magnitude alpha and uniformly random phase.
inline double phase_covariant_success_prob(double alpha,
                                           const AmplifierConfig& cfg) {
  detail::require_alpha(alpha);
  detail::require_dark_free(cfg);
  return detail::phase_average(alpha * alpha, cfg.intensity_gain(), cfg.t2_sq(),
                               cfg.d1().eta(), cfg.d2().eta());
}

/// P(T,S) for the phase-covariant ensemble: the success integral with the
/// comparison efficiency shifted by G - t2^2, which folds the output overlap
/// exp(-2 (G - t2^2) a^2 t1^2 (1 - cos theta)) into the comparison exponent.
inline double phase_covariant_joint_prob(double alpha,
                                         const AmplifierConfig& cfg) {
  detail::require_alpha(alpha);
  detail::require_dark_free(cfg);
  const double shifted_eta1 =
      cfg.d1().eta() + cfg.intensity_gain() - cfg.t2_sq();
  return detail::phase_average(alpha * alpha, cfg.intensity_gain(), cfg.t2_sq(),
                               shifted_eta1, cfg.d2().eta());
}

/// Phase-covariant fidelity P(T,S)/P(S). Throws NeverSucceeds when P(S) = 0.
inline double phase_covariant_fidelity(double alpha, const AmplifierConfig& cfg) {
  const double denominator = phase_covariant_success_prob(alpha, cfg);
  if (!(denominator > 0.0)) throw NeverSucceeds();
  return std::min(1.0, phase_covariant_joint_prob(alpha, cfg) / denominator);
}

}  // namespace scamp

#endif  // SCAMP_ANALYTIC_HPP_
