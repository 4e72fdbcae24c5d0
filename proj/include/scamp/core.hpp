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

// Domain types for the state-comparison amplifier and the three optical
// primitives everything else is assembled from.
//
// Coherent states stay coherent through linear optics, so the whole circuit
// is modelled on complex amplitudes alone: beam splitters mix amplitudes,
// detectors turn |amplitude|^2 into click probabilities, and the quality
// test is the overlap of two coherent states.

#ifndef SCAMP_CORE_HPP_
#define SCAMP_CORE_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "scamp/errors.hpp"

namespace scamp {

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace detail

/// Coherent-state amplitude. |a|^2 is the mean photon number.
class ComplexAmplitude {
 public:
  constexpr ComplexAmplitude() = default;
  ComplexAmplitude(double re, double im = 0.0) : value_(re, im) {  // NOLINT
    detail::require(std::isfinite(re) && std::isfinite(im),
                    "ComplexAmplitude: components must be finite");
  }
  explicit ComplexAmplitude(std::complex<double> z)
      : ComplexAmplitude(z.real(), z.imag()) {}

  static ComplexAmplitude polar(double magnitude, double phase) {
    return ComplexAmplitude(std::polar(magnitude, phase));
  }

  double re() const { return value_.real(); }
  double im() const { return value_.imag(); }
  std::complex<double> value() const { return value_; }
  double mean_photon_number() const { return std::norm(value_); }

  friend ComplexAmplitude operator+(ComplexAmplitude a, ComplexAmplitude b) {
    return ComplexAmplitude(a.value_ + b.value_);
  }
  friend ComplexAmplitude operator-(ComplexAmplitude a, ComplexAmplitude b) {
    return ComplexAmplitude(a.value_ - b.value_);
  }
  friend ComplexAmplitude operator-(ComplexAmplitude a) {
    return ComplexAmplitude(-a.value_);
  }
  friend ComplexAmplitude operator*(double s, ComplexAmplitude a) {
    return ComplexAmplitude(s * a.value_);
  }
  friend ComplexAmplitude operator*(ComplexAmplitude a, double s) {
    return s * a;
  }
  friend bool operator==(ComplexAmplitude a, ComplexAmplitude b) {
    return a.value_ == b.value_;
  }

 private:
  std::complex<double> value_{0.0, 0.0};
};

/// Lossless beam splitter with real, non-negative amplitudes t and r.
///
/// Built from an intensity coefficient so the amplitude is always the
/// non-negative root. The sign convention lives in beam_splitter_transform.
class BeamSplitter {
 public:
  static BeamSplitter from_transmission(double t_sq) {
    detail::require(detail::is_probability(t_sq),
                    "BeamSplitter: t^2 must lie in [0, 1]");
    return BeamSplitter(t_sq, 1.0 - t_sq);
  }
  static BeamSplitter from_reflection(double r_sq) {
    detail::require(detail::is_probability(r_sq),
                    "BeamSplitter: r^2 must lie in [0, 1]");
    return BeamSplitter(1.0 - r_sq, r_sq);
  }

  double t() const { return t_; }
  double r() const { return r_; }
  double t_sq() const { return t_sq_; }
  double r_sq() const { return r_sq_; }

 private:
  BeamSplitter(double t_sq, double r_sq)
      : t_sq_(t_sq), r_sq_(r_sq), t_(std::sqrt(t_sq)), r_(std::sqrt(r_sq)) {}

  double t_sq_;
  double r_sq_;
  double t_;
  double r_;
};

/// On/off photodetector: quantum efficiency and the probability of at least
/// one dark count per detection window.
class DetectorModel {
 public:
  explicit DetectorModel(double eta = 1.0, double dark_prob = 0.0)
      : eta_(eta), dark_prob_(dark_prob) {
    detail::require(detail::is_probability(eta),
                    "DetectorModel: efficiency must lie in [0, 1]");
    detail::require(dark_prob >= 0.0 && dark_prob < 1.0,
                    "DetectorModel: dark-count probability must lie in [0, 1)");
  }

  static DetectorModel ideal() { return DetectorModel(1.0, 0.0); }

  double eta() const { return eta_; }
  double dark_prob() const { return dark_prob_; }

 private:
  double eta_;
  double dark_prob_;
};

/// Full device parameterization.
///
/// The first beam splitter is fixed by the requested gain: r1 = t2 / g with
/// g = sqrt(G). A gain below t2^2 would need r1 > 1 and is rejected.
class AmplifierConfig {
 public:
  AmplifierConfig(double intensity_gain, double t2_sq,
                  DetectorModel d1 = DetectorModel::ideal(),
                  DetectorModel d2 = DetectorModel::ideal())
      : intensity_gain_(intensity_gain), t2_sq_(t2_sq), d1_(d1), d2_(d2) {
    detail::require(std::isfinite(intensity_gain) && intensity_gain > 0.0,
                    "AmplifierConfig: intensity gain must be positive");
    detail::require(t2_sq > 0.0 && t2_sq < 1.0,
                    "AmplifierConfig: t2^2 must lie in (0, 1)");
    detail::require(t2_sq <= intensity_gain,
                    "AmplifierConfig: intensity gain must be at least t2^2");
  }

  double intensity_gain() const { return intensity_gain_; }
  double t2_sq() const { return t2_sq_; }
  const DetectorModel& d1() const { return d1_; }
  const DetectorModel& d2() const { return d2_; }

  double g() const { return std::sqrt(intensity_gain_); }
  double r1_sq() const { return t2_sq_ / intensity_gain_; }
  double t1_sq() const { return 1.0 - r1_sq(); }
  double r2_sq() const { return 1.0 - t2_sq_; }
  double r1() const { return std::sqrt(r1_sq()); }
  double t1() const { return std::sqrt(t1_sq()); }
  double t2() const { return std::sqrt(t2_sq_); }
  double r2() const { return std::sqrt(r2_sq()); }

  BeamSplitter comparison_splitter() const {
    return BeamSplitter::from_reflection(r1_sq());
  }
  BeamSplitter subtraction_splitter() const {
    return BeamSplitter::from_transmission(t2_sq_);
  }

  /// Guess amplitude t1*alpha/r1 that exactly nulls the comparison port
  /// for input alpha.
  ComplexAmplitude nulling_guess(ComplexAmplitude alpha) const {
    return (t1() / r1()) * alpha;
  }

  AmplifierConfig with_detectors(DetectorModel d1, DetectorModel d2) const {
    return AmplifierConfig(intensity_gain_, t2_sq_, d1, d2);
  }

 private:
  double intensity_gain_;
  double t2_sq_;
  DetectorModel d1_;
  DetectorModel d2_;
};

enum class EnsembleKind { Binary, PhaseCovariant };

inline const char* to_string(EnsembleKind kind) {
  return kind == EnsembleKind::Binary ? "binary" : "phase";
}

/// Alice's input distribution: {+alpha, -alpha} with equal weight, or
/// alpha*exp(i*theta) with theta uniform on [0, 2*pi).
class InputEnsemble {
 public:
  InputEnsemble(EnsembleKind kind, double alpha) : kind_(kind), alpha_(alpha) {
    detail::require(std::isfinite(alpha) && alpha > 0.0,
                    "InputEnsemble: alpha must be positive");
  }
  static InputEnsemble binary(double alpha) {
    return InputEnsemble(EnsembleKind::Binary, alpha);
  }
  static InputEnsemble phase_covariant(double alpha) {
    return InputEnsemble(EnsembleKind::PhaseCovariant, alpha);
  }

  EnsembleKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double alpha_sq() const { return alpha_ * alpha_; }

  /// Maps a uniform variate u in [0, 1) onto a draw from the ensemble.
  ComplexAmplitude draw(double u) const {
    if (kind_ == EnsembleKind::Binary) {
      return ComplexAmplitude(u < 0.5 ? alpha_ : -alpha_);
    }
    return ComplexAmplitude::polar(alpha_, 2.0 * std::numbers::pi * u);
  }

 private:
  EnsembleKind kind_;
  double alpha_;
};

struct BeamSplitterOutputs {
  ComplexAmplitude kept;
  ComplexAmplitude detector;
};

/// Two-port mixing with rows (t, -r) to the detector arm and (r, t) to the
/// kept arm. For the comparison stage (upper = input alpha, lower = guess
/// beta) the detector port carries t*alpha - r*beta, which vanishes for a
/// correct guess. Global phases relative to other conventions drop out of
/// every probability and overlap.
inline BeamSplitterOutputs beam_splitter_transform(ComplexAmplitude upper,
                                                   ComplexAmplitude lower,
                                                   const BeamSplitter& bs) {
  return {bs.r() * upper + bs.t() * lower, bs.t() * upper - bs.r() * lower};
}

/// Probability that an on/off detector stays silent for coherent light of
/// amplitude `amp`: (1 - dark) * exp(-eta * |amp|^2).
inline double no_click_probability(ComplexAmplitude amp,
                                   const DetectorModel& det) {
  return (1.0 - det.dark_prob()) *
         std::exp(-det.eta() * amp.mean_photon_number());
}

/// |<a|b>|^2 = exp(-|a - b|^2) for coherent states.
inline double coherent_overlap(ComplexAmplitude a, ComplexAmplitude b) {
  return std::exp(-std::norm(a.value() - b.value()));
}

}  // namespace scamp

#endif  // SCAMP_CORE_HPP_
