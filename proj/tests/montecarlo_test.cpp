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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "scamp/analytic.hpp"
#include "scamp/montecarlo.hpp"
#include "support/oracles.hpp"

namespace scamp {
namespace {

constexpr double kZ = 4.0;

AmplifierConfig config(double gain, double t2_sq, double eta1 = 1.0,
                       double eta2 = 1.0) {
  return AmplifierConfig(gain, t2_sq, DetectorModel(eta1), DetectorModel(eta2));
}

TEST(TrialStream, DeterministicAndKeyedOnIndex) {
  TrialStream a(1, 5), b(1, 5), c(1, 6), d(2, 5);
  const auto first = a();
  EXPECT_EQ(first, b());
  EXPECT_NE(first, c());
  EXPECT_NE(first, d());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(ExactSum, PropertyOrderIndependent) {
  std::mt19937_64 rng(1);
  std::lognormal_distribution<double> mag(0.0, 4.0);
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back((i % 2 ? -1.0 : 1.0) * mag(rng));
  ExactSum forward, backward, split_a, split_b;
  for (double x : xs) forward.add(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) backward.add(*it);
  for (std::size_t i = 0; i < xs.size(); ++i) (i % 3 ? split_a : split_b).add(xs[i]);
  split_b.merge(split_a);
  EXPECT_EQ(forward, backward);
  EXPECT_EQ(forward, split_b);
}

TEST(ExactSum, RejectsOutOfRangeTerm) {
  ExactSum s;
  EXPECT_THROW(s.add(1e40), std::overflow_error);
  EXPECT_THROW(s.add(std::nan("")), std::overflow_error);
}

TEST(RunTrial, BlindHeraldNeverAccepts) {
  const auto cfg = config(2.0, 0.9, 1.0, 0.0);
  const auto ens = InputEnsemble::binary(1.0);
  for (std::uint64_t i = 0; i < 5000; ++i) {
    TrialStream rng(3, i);
    ASSERT_FALSE(run_trial(rng, ens, std::nullopt, cfg).accepted);
  }
}

TEST(RunTrial, PerfectPointAcceptsOnlyCorrectBranch) {
  const auto cfg = config(1.8, 0.9);
  const auto ens = InputEnsemble::binary(std::sqrt(0.5));
  int accepted = 0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    TrialStream rng(11, i);
    const auto t = run_trial(rng, ens, std::nullopt, cfg);
    if (!t.accepted) continue;
    ++accepted;
    ASSERT_GT(t.input_amp.re(), 0.0);
    ASSERT_NEAR(t.fidelity_weight, 1.0, 1e-14);
  }
  EXPECT_GT(accepted, 100);
}

TEST(RunTrial, IdenticalSeedGivesIdenticalOutcomes) {
  const auto cfg = config(3.0, 0.95, 0.7, 0.9);
  const auto ens = InputEnsemble::phase_covariant(0.9);
  for (std::uint64_t i = 0; i < 500; ++i) {
    TrialStream a(99, i), b(99, i);
    const auto x = run_trial(a, ens, std::nullopt, cfg);
    const auto y = run_trial(b, ens, std::nullopt, cfg);
    ASSERT_EQ(x.accepted, y.accepted);
    ASSERT_EQ(x.input_amp, y.input_amp);
    ASSERT_EQ(x.output_amp, y.output_amp);
    ASSERT_EQ(x.fidelity_weight, y.fidelity_weight);
    ASSERT_EQ(x.passed_test, y.passed_test);
  }
}

TEST(RunTrial, OutputAmplitudeFollowsCircuit) {
  const auto cfg = config(4.0, 0.9);
  const auto ens = InputEnsemble::binary(0.6);
  TrialStream rng(1, 0);
  const auto t = run_trial(rng, ens, std::nullopt, cfg);
  const ComplexAmplitude beta = cfg.nulling_guess(ComplexAmplitude(0.6));
  const ComplexAmplitude expected =
      cfg.t2() * (cfg.t1() * beta + cfg.r1() * t.input_amp);
  EXPECT_NEAR(t.output_amp.re(), expected.re(), 1e-14);
}

// Fixed input +alpha, nulling guess: accepted fraction vs 1 - exp(-0.1/0.45).
TEST(Estimate, SingleInputSuccessAtTenMillionTrials) {
  const auto cfg = config(2.0, 0.9);
  const auto ens = InputEnsemble::binary(1.0);
  std::uint64_t n = 0, hits = 0;
  for (std::uint64_t i = 0; i < 10'000'000; ++i) {
    TrialStream rng(2024, i);
    const auto t = run_trial(rng, ens, std::nullopt, cfg);
    if (t.input_amp.re() < 0.0) continue;
    ++n;
    hits += t.accepted;
  }
  const double p = static_cast<double>(hits) / n;
  const double expected = 1.0 - std::exp(-0.1 / 0.45);
  EXPECT_LT(std::abs(p - expected), kZ * std::sqrt(expected * (1 - expected) / n));
}

TEST(Estimate, BinaryAgreesWithClosedForm) {
  const double alpha = std::sqrt(0.5);
  const auto cfg = config(4.0, 0.9);
  const auto s = estimate(InputEnsemble::binary(alpha), cfg, 1'000'000, 42);
  const auto m = binary_metrics(alpha, cfg);
  const auto q = binary_quadrature_moments(alpha, cfg);
  EXPECT_LT(std::abs(s.p_success.value - m.p_success), kZ * s.p_success.std_error);
  ASSERT_TRUE(s.fidelity && s.noise_figure && s.mean_x1 && s.mean_x1_sq);
  EXPECT_LT(std::abs(s.fidelity->value - m.fidelity), kZ * s.fidelity->std_error);
  EXPECT_LT(std::abs(s.mean_x1->value - q.mean_x1), kZ * s.mean_x1->std_error);
  EXPECT_LT(std::abs(s.mean_x1_sq->value - q.mean_x1_sq), kZ * s.mean_x1_sq->std_error);
  EXPECT_LT(std::abs(s.noise_figure->value - q.noise_figure),
            kZ * s.noise_figure->std_error);
}

TEST(Estimate, PhaseCovariantAgreesWithClosedForm) {
  const double alpha = std::sqrt(0.5);
  const auto cfg = config(2.0, 0.95);
  const auto s = estimate(InputEnsemble::phase_covariant(alpha), cfg, 1'000'000, 42);
  EXPECT_LT(std::abs(s.p_success.value - phase_covariant_success_prob(alpha, cfg)),
            kZ * s.p_success.std_error);
  ASSERT_TRUE(s.fidelity);
  EXPECT_LT(std::abs(s.fidelity->value - phase_covariant_fidelity(alpha, cfg)),
            kZ * s.fidelity->std_error);
  EXPECT_FALSE(s.noise_figure);
}

TEST(Estimate, RejectsZeroTrials) {
  EXPECT_THROW(estimate(InputEnsemble::binary(1.0), config(2.0, 0.9), 0, 1),
               InvalidArgument);
}

TEST(Estimate, NoAcceptedTrialsLeavesConditionalsAbsent) {
  const auto s = estimate(InputEnsemble::binary(1.0), config(2.0, 0.9, 1.0, 0.0), 1000, 1);
  EXPECT_EQ(s.n_accepted, 0u);
  EXPECT_EQ(s.p_success.value, 0.0);
  EXPECT_FALSE(s.fidelity);
  EXPECT_FALSE(s.fidelity_sampled);
  EXPECT_FALSE(s.noise_figure);
}

TEST(Estimate, SingleTrialReproducibleAcrossRunsAndWorkers) {
  const auto ens = InputEnsemble::phase_covariant(1.0);
  const auto cfg = config(8.0, 0.95);
  SimulationOptions many;
  many.workers = 8;
  const auto a = estimate(ens, cfg, 1, 77);
  const auto b = estimate(ens, cfg, 1, 77, many);
  EXPECT_EQ(a.n_accepted, b.n_accepted);
  EXPECT_EQ(a.p_success.value, b.p_success.value);
  EXPECT_EQ(a.fidelity.has_value(), b.fidelity.has_value());
}

TEST(Accumulator, PropertyMergeOfAnyPartitionIsExact) {
  const auto ens = InputEnsemble::binary(std::sqrt(0.5));
  const auto cfg = config(4.0, 0.9);
  const std::uint64_t n = 30'000;
  const Accumulator whole = simulate_range(ens, cfg, 5, 0, n);
  std::mt19937_64 rng(8);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::uint64_t> cuts{0, n};
    const int k = 1 + static_cast<int>(rng() % 12);
    for (int i = 1; i < k; ++i) cuts.push_back(rng() % n);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Accumulator> parts;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      parts.push_back(simulate_range(ens, cfg, 5, cuts[i], cuts[i + 1]));
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    Accumulator merged;
    for (const auto& p : parts) merged.merge(p);
    ASSERT_EQ(merged, whole);
  }
}

TEST(Estimate, WorkerCountDoesNotChangeSummary) {
  const auto ens = InputEnsemble::binary(1.0);
  const auto cfg = config(3.0, 0.9);
  const auto base = estimate(ens, cfg, 50'000, 9);
  for (unsigned workers : {2u, 3u, 7u}) {
    SimulationOptions o;
    o.workers = workers;
    const auto s = estimate(ens, cfg, 50'000, 9, o);
    EXPECT_EQ(s.n_accepted, base.n_accepted);
    EXPECT_EQ(s.fidelity->value, base.fidelity->value);
    EXPECT_EQ(s.fidelity->std_error, base.fidelity->std_error);
    EXPECT_EQ(s.noise_figure->value, base.noise_figure->value);
    EXPECT_EQ(s.noise_figure->std_error, base.noise_figure->std_error);
  }
}

TEST(Estimate, SampledPassFailAgreesWithExactOverlap) {
  for (auto kind : {EnsembleKind::Binary, EnsembleKind::PhaseCovariant}) {
    const auto s = estimate(InputEnsemble(kind, 1.0), config(4.0, 0.9), 400'000, 21);
    ASSERT_TRUE(s.fidelity && s.fidelity_sampled);
    const double se = std::hypot(s.fidelity->std_error, s.fidelity_sampled->std_error);
    EXPECT_LT(std::abs(s.fidelity->value - s.fidelity_sampled->value), kZ * se);
  }
}

TEST(Estimate, PhotonCountingSlowPathAgrees) {
  const AmplifierConfig cfg(2.5, 0.9, DetectorModel(0.7, 0.02), DetectorModel(0.8, 0.05));
  for (auto kind : {EnsembleKind::Binary, EnsembleKind::PhaseCovariant}) {
    const InputEnsemble ens(kind, 0.9);
    SimulationOptions slow;
    slow.detection = DetectionSampling::PhotonCounting;
    const auto fast = estimate(ens, cfg, 300'000, 4);
    const auto photon = estimate(ens, cfg, 300'000, 5, slow);
    const double se = std::hypot(fast.p_success.std_error, photon.p_success.std_error);
    EXPECT_LT(std::abs(fast.p_success.value - photon.p_success.value), kZ * se);
    const double fse = std::hypot(fast.fidelity->std_error, photon.fidelity->std_error);
    EXPECT_LT(std::abs(fast.fidelity->value - photon.fidelity->value), kZ * fse);
  }
}

TEST(Estimate, DarkCountsMatchSingleInputAverage) {
  const AmplifierConfig cfg(3.0, 0.9, DetectorModel(0.9, 0.05), DetectorModel(0.8, 0.1));
  const double alpha = 0.8;
  const auto s = estimate(InputEnsemble::binary(alpha), cfg, 500'000, 12);
  const ComplexAmplitude beta = cfg.nulling_guess(ComplexAmplitude(alpha));
  const double expected = 0.5 * (success_prob_given(alpha, beta, cfg) +
                                 success_prob_given(-alpha, beta, cfg));
  EXPECT_LT(std::abs(s.p_success.value - expected), kZ * s.p_success.std_error);
}

TEST(Estimate, GuessOverride) {
  const auto cfg = config(3.0, 0.9);
  const double alpha = 0.8;
  SimulationOptions o;
  o.guess = ComplexAmplitude(0.0);
  const auto s = estimate(InputEnsemble::binary(alpha), cfg, 400'000, 3, o);
  const double expected = 0.5 * (success_prob_given(alpha, 0.0, cfg) +
                                 success_prob_given(-alpha, 0.0, cfg));
  EXPECT_LT(std::abs(s.p_success.value - expected), kZ * s.p_success.std_error);
}

TEST(Estimate, StandardErrorShrinksAsInverseRootN) {
  const auto ens = InputEnsemble::binary(1.0);
  const auto cfg = config(4.0, 0.9);
  const auto small = estimate(ens, cfg, 10'000, 1);
  const auto large = estimate(ens, cfg, 1'000'000, 1);
  EXPECT_NEAR(small.p_success.std_error / large.p_success.std_error, 10.0, 1.0);
}

}  // namespace
}  // namespace scamp
