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

// Shot-by-shot simulation of the amplifier.
//
// Each trial draws Alice's amplitude, propagates it with Bob's guess through
// both beam splitters, samples the two on/off detectors and applies the
// acceptance rule (comparison detector silent, subtraction detector fires).
//
// Estimators reported by `estimate`:
//   p_success         n_accepted / n, binomial error sqrt(p (1 - p) / n).
//   fidelity          mean over accepted trials of the exact overlap of the
//                     output with g * input. Error s_w / sqrt(n_accepted),
//                     which is the delta-method error of the ratio
//                     sum(w * 1_acc) / sum(1_acc) to leading order.
//   fidelity_sampled  fraction of accepted trials that pass a sampled
//                     pass/fail projection test; same error formula. Used to
//                     cross-check the exact-overlap estimator.
//   mean_x1, mean_x1_sq, noise_figure (binary ensemble only)
//                     per accepted trial the output is a coherent state with
//                     real part a, so <x1> = sqrt(2) a and <x1^2> = 1/2 + 2a^2
//                     are averaged exactly rather than sampled. The noise
//                     figure error uses the delta method on (mean a, mean a^2)
//                     with their sample covariance.
//
// All sums are kept in exact fixed point so that merging partial results is
// associative and commutative: any partition of trials among workers gives
// a bit-identical summary.

#ifndef SCAMP_MONTECARLO_HPP_
#define SCAMP_MONTECARLO_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "scamp/core.hpp"
#include "scamp/errors.hpp"
#include "scamp/random.hpp"

namespace scamp {

/// Exact running sum of doubles on a 2^-56 fixed-point grid.
class ExactSum {
 public:
  void add(double x) {
    const double scaled = std::round(std::ldexp(x, kFractionBits));
    if (!(std::abs(scaled) < 0x1.0p120)) {
      throw std::overflow_error("ExactSum: term outside accumulator range");
    }
    accumulate(static_cast<Int>(scaled));
  }
  void merge(const ExactSum& other) { accumulate(other.sum_); }
  double value() const {
    return std::ldexp(static_cast<double>(sum_), -kFractionBits);
  }
  friend bool operator==(const ExactSum&, const ExactSum&) = default;

 private:
  __extension__ using Int = __int128;
  static constexpr int kFractionBits = 56;

  void accumulate(Int term) {
    if (__builtin_add_overflow(sum_, term, &sum_)) {
      throw std::overflow_error("ExactSum: accumulator overflow");
    }
  }

  Int sum_ = 0;
};

enum class DetectionSampling {
  /// Bernoulli click with the exact no-click probability.
  ClickProbability,
  /// Poisson photon number, per-photon Bernoulli efficiency, then dark count.
  PhotonCounting,
};

struct SimulationOptions {
  /// Bob's guess; defaults to the nulling guess t1*alpha/r1.
  std::optional<ComplexAmplitude> guess;
  DetectionSampling detection = DetectionSampling::ClickProbability;
  unsigned workers = 1;
};

struct TrialOutcome {
  bool accepted = false;
  ComplexAmplitude input_amp;
  ComplexAmplitude output_amp;
  /// coherent_overlap(output_amp, g * input_amp); 0 when not accepted.
  double fidelity_weight = 0.0;
  /// Outcome of a sampled projection onto |g * input>; false when not accepted.
  bool passed_test = false;
};

namespace detail {

inline bool sample_click(TrialStream& rng, ComplexAmplitude amp,
                         const DetectorModel& det, DetectionSampling mode) {
  if (mode == DetectionSampling::ClickProbability) {
    return rng.uniform() >= no_click_probability(amp, det);
  }
  const double mean = amp.mean_photon_number();
  std::int64_t photons = 0;
  if (mean > 0.0) photons = std::poisson_distribution<std::int64_t>(mean)(rng);
  std::int64_t detected = 0;
  if (photons > 0 && det.eta() > 0.0) {
    detected = std::binomial_distribution<std::int64_t>(photons, det.eta())(rng);
  }
  const bool dark = rng.uniform() < det.dark_prob();
  return detected > 0 || dark;
}

}  // namespace detail

/// One trial of the device. In ClickProbability mode exactly four variates
/// are consumed per trial, whatever the outcome.
inline TrialOutcome run_trial(
    TrialStream& rng, const InputEnsemble& ensemble,
    std::optional<ComplexAmplitude> guess, const AmplifierConfig& cfg,
    DetectionSampling detection = DetectionSampling::ClickProbability) {
  TrialOutcome outcome;
  outcome.input_amp = ensemble.draw(rng.uniform());
  const ComplexAmplitude beta =
      guess.value_or(cfg.nulling_guess(ComplexAmplitude(ensemble.alpha())));
  const auto bs1 =
      beam_splitter_transform(outcome.input_amp, beta, cfg.comparison_splitter());
  const ComplexAmplitude subtraction_arm = cfg.r2() * bs1.kept;
  outcome.output_amp = cfg.t2() * bs1.kept;

  const bool d1_click = detail::sample_click(rng, bs1.detector, cfg.d1(), detection);
  const bool d2_click =
      detail::sample_click(rng, subtraction_arm, cfg.d2(), detection);
  outcome.accepted = !d1_click && d2_click;

  const double test_variate = rng.uniform();
  if (outcome.accepted) {
    outcome.fidelity_weight =
        coherent_overlap(outcome.output_amp, cfg.g() * outcome.input_amp);
    outcome.passed_test = test_variate < outcome.fidelity_weight;
  }
  return outcome;
}

/// Mergeable partial result over a set of trials.
struct Accumulator {
  std::uint64_t n_trials = 0;
  std::uint64_t n_accepted = 0;
  std::uint64_t n_passed = 0;
  ExactSum w, w2;          // fidelity weight
  ExactSum a, a2, a3, a4;  // real part of the output amplitude

  void add(const TrialOutcome& t) {
    ++n_trials;
    if (!t.accepted) return;
    ++n_accepted;
    if (t.passed_test) ++n_passed;
    const double x = t.output_amp.re();
    w.add(t.fidelity_weight);
    w2.add(t.fidelity_weight * t.fidelity_weight);
    a.add(x);
    a2.add(x * x);
    a3.add(x * x * x);
    a4.add(x * x * x * x);
  }

  void merge(const Accumulator& o) {
    n_trials += o.n_trials;
    n_accepted += o.n_accepted;
    n_passed += o.n_passed;
    w.merge(o.w);
    w2.merge(o.w2);
    a.merge(o.a);
    a2.merge(o.a2);
    a3.merge(o.a3);
    a4.merge(o.a4);
  }

  friend bool operator==(const Accumulator&, const Accumulator&) = default;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EstimateSummary {
  std::uint64_t n_trials = 0;
  std::uint64_t n_accepted = 0;
  std::uint64_t seed = 0;
  Estimate p_success;
  // Absent when no trial was accepted.
  std::optional<Estimate> fidelity;
  std::optional<Estimate> fidelity_sampled;
  // Binary ensemble only; absent with fewer than two accepted trials.
  std::optional<Estimate> mean_x1;
  std::optional<Estimate> mean_x1_sq;
  std::optional<Estimate> noise_figure;
};

/// Trials [begin, end) of the run keyed by `seed`.
inline Accumulator simulate_range(const InputEnsemble& ensemble,
                                  const AmplifierConfig& cfg, std::uint64_t seed,
                                  std::uint64_t begin, std::uint64_t end,
                                  const SimulationOptions& options = {}) {
  Accumulator acc;
  for (std::uint64_t i = begin; i < end; ++i) {
    TrialStream rng(seed, i);
    acc.add(run_trial(rng, ensemble, options.guess, cfg, options.detection));
  }
  return acc;
}

inline EstimateSummary summarize(const Accumulator& acc,
                                 const InputEnsemble& ensemble,
                                 std::uint64_t seed) {
  EstimateSummary s;
  s.n_trials = acc.n_trials;
  s.n_accepted = acc.n_accepted;
  s.seed = seed;
  const double n = static_cast<double>(acc.n_trials);
  const double p = static_cast<double>(acc.n_accepted) / n;
  s.p_success = {p, std::sqrt(p * (1.0 - p) / n)};
  if (acc.n_accepted == 0) return s;

  const double m = static_cast<double>(acc.n_accepted);
  // Standard error of a sample mean from its first two raw sums.
  auto mean_se = [m](double sum, double sum_sq) -> Estimate {
    const double mean = sum / m;
    if (m < 2.0) return {mean, 0.0};
    const double var = std::max(0.0, (sum_sq - sum * mean) / (m - 1.0));
    return {mean, std::sqrt(var / m)};
  };
  s.fidelity = mean_se(acc.w.value(), acc.w2.value());
  const double passed = static_cast<double>(acc.n_passed);
  s.fidelity_sampled = mean_se(passed, passed);

  if (ensemble.kind() != EnsembleKind::Binary || acc.n_accepted < 2) return s;
  const double m1 = acc.a.value() / m;
  const double m2 = acc.a2.value() / m;
  const double m3 = acc.a3.value() / m;
  const double m4 = acc.a4.value() / m;
  const double bessel = m / (m - 1.0);
  const double var_a = std::max(0.0, (m2 - m1 * m1) * bessel);
  const double var_a2 = std::max(0.0, (m4 - m2 * m2) * bessel);
  const double cov = (m3 - m1 * m2) * bessel;

  s.mean_x1 = Estimate{std::sqrt(2.0) * m1, std::sqrt(2.0 * var_a / m)};
  s.mean_x1_sq = Estimate{0.5 + 2.0 * m2, 2.0 * std::sqrt(var_a2 / m)};

  // NF = sqrt(2) m1 / (2 alpha sqrt(V)),  V = 1/2 + 2 m2 - 2 m1^2.
  const double v = 0.5 + 2.0 * m2 - 2.0 * m1 * m1;
  if (v > 0.0) {
    const double scale = std::sqrt(2.0) / (2.0 * ensemble.alpha());
    const double v32 = v * std::sqrt(v);
    const double d_m1 = scale * (v + 2.0 * m1 * m1) / v32;
    const double d_m2 = -scale * m1 / v32;
    const double var_nf =
        (d_m1 * d_m1 * var_a + 2.0 * d_m1 * d_m2 * cov + d_m2 * d_m2 * var_a2) / m;
    s.noise_figure = Estimate{scale * m1 / std::sqrt(v), std::sqrt(std::max(0.0, var_nf))};
  }
  return s;
}

/// Runs `n_trials` trials split into contiguous blocks across
/// `options.workers` threads. The result depends only on the arguments other
/// than the worker count.
inline EstimateSummary estimate(const InputEnsemble& ensemble,
                                const AmplifierConfig& cfg, std::uint64_t n_trials,
                                std::uint64_t seed,
                                const SimulationOptions& options = {}) {
  if (n_trials < 1) throw InvalidArgument("estimate: n_trials must be >= 1");
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(options.workers, 1, n_trials);
  Accumulator total;
  if (workers == 1) {
    total = simulate_range(ensemble, cfg, seed, 0, n_trials, options);
  } else {
    std::vector<std::future<Accumulator>> parts;
    parts.reserve(workers);
    for (std::uint64_t k = 0; k < workers; ++k) {
      const std::uint64_t begin = n_trials * k / workers;
      const std::uint64_t end = n_trials * (k + 1) / workers;
      parts.push_back(std::async(std::launch::async, [&, begin, end] {
        return simulate_range(ensemble, cfg, seed, begin, end, options);
      }));
    }
    for (auto& part : parts) total.merge(part.get());
  }
  return summarize(total, ensemble, seed);
}

}  // namespace scamp

#endif  // SCAMP_MONTECARLO_HPP_
