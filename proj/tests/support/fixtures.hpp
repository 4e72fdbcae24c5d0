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

// Regression fixtures: values computed by the oracles, committed as CSV and
// regenerated on demand to detect drift.

#ifndef SCAMP_TESTS_FIXTURES_HPP_
#define SCAMP_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scamp/scamp.hpp"

namespace scamp::testing {

struct FixtureRecord {
  std::string description;
  std::string quantity;
  std::optional<double> alpha_sq;
  std::optional<double> intensity_gain;
  std::optional<double> eta1;
  std::optional<double> eta2;
  std::optional<double> t2_sq;
  std::optional<double> x;
  double expected = 0.0;
  std::string provenance;
  double tolerance = 0.0;  // relative

  AmplifierConfig config() const {
    return AmplifierConfig(*intensity_gain, *t2_sq, DetectorModel(*eta1),
                           DetectorModel(*eta2));
  }
  double alpha() const { return std::sqrt(*alpha_sq); }
};

inline constexpr std::string_view kFixtureHeader =
    "description,quantity,alpha_sq,intensity_gain,eta1,eta2,t2_sq,x,expected,"
    "provenance,tolerance";

inline constexpr std::uint64_t kSlowPathTrials = 200'000;
inline constexpr std::uint64_t kSlowPathSeed = 7;

namespace detail {

inline FixtureRecord device_record(std::string description, std::string quantity,
                                   double a2, double gain, double eta1,
                                   double eta2, double t2, std::string provenance,
                                   double tolerance) {
  FixtureRecord r;
  r.description = std::move(description);
  r.quantity = std::move(quantity);
  r.alpha_sq = a2;
  r.intensity_gain = gain;
  r.eta1 = eta1;
  r.eta2 = eta2;
  r.t2_sq = t2;
  r.provenance = std::move(provenance);
  r.tolerance = tolerance;
  return r;
}

inline std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

/// The committed fixture set, in file order. `expected` is left at zero;
/// compute_expected fills it from the named oracle.
inline std::vector<FixtureRecord> fixture_plan() {
  using detail::device_record;
  using detail::tag;
  std::vector<FixtureRecord> plan;

  for (double x : {0.0, 0.5, 1.0, 2.5, 5.0, 7.5, 10.0}) {
    FixtureRecord r;
    r.description = "scaled I0 at x=" + tag(x);
    r.quantity = "bessel_i0_scaled";
    r.x = x;
    r.provenance = "derived+series40";
    r.tolerance = 1e-12;
    plan.push_back(r);
  }
  for (double x : {30.0, 50.0, 100.0}) {
    FixtureRecord r;
    r.description = "scaled I0 at x=" + tag(x);
    r.quantity = "bessel_i0_scaled";
    r.x = x;
    r.provenance = "derived+asymptotic30";
    r.tolerance = 1e-12;
    plan.push_back(r);
  }

  for (double eta1 : {1.0, 0.5}) {
    for (double a2 : {0.1, 0.5, 1.0}) {
      for (double gain : {1.2, 2.0, 4.0, 8.0}) {
        const std::string where = "a2=" + tag(a2) + " G=" + tag(gain) +
                                  " eta1=" + tag(eta1) + " t2^2=0.95";
        plan.push_back(device_record("phase P(S) " + where, "phase_success", a2,
                                     gain, eta1, 1.0, 0.95,
                                     "derived+simpson_quadrature", 1e-9));
        plan.push_back(device_record("phase P(T and S) " + where, "phase_joint", a2,
                                     gain, eta1, 1.0, 0.95,
                                     "derived+simpson_quadrature", 1e-9));
      }
    }
  }
  plan.push_back(device_record("phase F a2=0.5 G=2", "phase_fidelity", 0.5, 2.0,
                               1.0, 1.0, 0.95, "derived+simpson_quadrature",
                               1e-9));
  plan.push_back(device_record("phase P(S) a2=0.5 G=4", "phase_success", 0.5, 4.0,
                               1.0, 1.0, 0.95, "derived+simpson_quadrature",
                               1e-9));

  for (double a2 : {0.1, 0.5, 1.0}) {
    for (double gain : {1.5, 1.8, 4.0, 400.0}) {
      const std::string where = "a2=" + tag(a2) + " G=" + tag(gain) + " t2^2=0.9";
      plan.push_back(device_record("binary P(S) " + where, "binary_success", a2,
                                   gain, 1.0, 1.0, 0.9,
                                   "derived+two_point_average", 1e-12));
      plan.push_back(device_record("binary P(T and S) " + where, "binary_joint", a2,
                                   gain, 1.0, 1.0, 0.9,
                                   "derived+two_point_average", 1e-12));
    }
  }

  plan.push_back(device_record("P(S) given nulling guess alpha=1 G=2",
                               "success_given_nulling", 1.0, 2.0, 1.0, 1.0, 0.9,
                               "derived+hand_substitution", 1e-12));

  // Tolerances are 4 standard errors of the photon-counting estimate,
  // relative to the estimate, rounded up.
  plan.push_back(device_record("binary P(S) photon-counting MC a2=0.5 G=4",
                               "binary_success", 0.5, 4.0, 1.0, 1.0, 0.9,
                               "derived+photon_counting_mc", 0.0));
  plan.push_back(device_record("phase P(S) photon-counting MC a2=0.5 G=2",
                               "phase_success", 0.5, 2.0, 1.0, 1.0, 0.95,
                               "derived+photon_counting_mc", 0.0));
  return plan;
}

/// Evaluates the oracle named by `r.provenance`. For Monte Carlo records the
/// tolerance is set from the estimate's standard error as well.
inline FixtureRecord compute_expected(FixtureRecord r) {
  const std::string& p = r.provenance;
  if (p == "derived+series40") {
    r.expected = std::exp(-*r.x) * bessel_i0_series40(*r.x);
  } else if (p == "derived+asymptotic30") {
    r.expected = bessel_i0_scaled_asymptotic(*r.x, 30);
  } else if (p == "derived+simpson_quadrature") {
    const AmplifierConfig cfg = r.config();
    const double shifted = *r.eta1 + *r.intensity_gain - *r.t2_sq;
    const double success = phase_quadrature_oracle(r.alpha(), cfg);
    if (r.quantity == "phase_success") {
      r.expected = success;
    } else if (r.quantity == "phase_joint") {
      r.expected = phase_quadrature_oracle(r.alpha(), cfg, shifted);
    } else if (r.quantity == "phase_fidelity") {
      r.expected = phase_quadrature_oracle(r.alpha(), cfg, shifted) / success;
    } else {
      throw InvalidArgument("fixture: quadrature cannot produce " + r.quantity);
    }
  } else if (p == "derived+two_point_average") {
    const TwoPoint tp = binary_two_point_average(r.alpha(), r.config());
    r.expected = r.quantity == "binary_success" ? tp.p_success : tp.p_joint;
  } else if (p == "derived+hand_substitution") {
    // Nulling guess: the kept arm carries alpha/r1, so the subtraction arm
    // holds r2^2 alpha^2 G / t2^2 = 0.1 / 0.45 photons for alpha = 1, G = 2.
    r.expected = 1.0 - std::exp(-0.1 / 0.45);
  } else if (p == "derived+photon_counting_mc") {
    const EnsembleKind kind = r.quantity == "binary_success"
                                  ? EnsembleKind::Binary
                                  : EnsembleKind::PhaseCovariant;
    SimulationOptions options;
    options.detection = DetectionSampling::PhotonCounting;
    const auto s = estimate(InputEnsemble(kind, r.alpha()), r.config(),
                            kSlowPathTrials, kSlowPathSeed, options);
    r.expected = s.p_success.value;
    const double rel = 4.0 * s.p_success.std_error / s.p_success.value;
    r.tolerance = std::ceil(rel * 1e4) / 1e4;
  } else {
    throw InvalidArgument("fixture: unknown provenance " + p);
  }
  return r;
}

inline std::vector<FixtureRecord> regenerate(const std::vector<FixtureRecord>& plan) {
  std::vector<FixtureRecord> out;
  out.reserve(plan.size());
  for (const auto& r : plan) out.push_back(compute_expected(r));
  return out;
}

inline void write_fixtures(const std::vector<FixtureRecord>& records,
                           std::ostream& out) {
  out << "# Regression fixtures for scamp. Generated by scamp_regen_fixtures;\n"
         "# do not edit by hand. Each row names the oracle that produced it\n"
         "# (provenance) and the relative tolerance the library must meet.\n";
  out << kFixtureHeader << '\n';
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  for (const auto& r : records) {
    if (r.description.find(',') != std::string::npos) {
      throw InvalidArgument("fixture description contains a comma: " + r.description);
    }
    out << r.description << ',' << r.quantity << ',' << opt(r.alpha_sq) << ','
        << opt(r.intensity_gain) << ',' << opt(r.eta1) << ',' << opt(r.eta2)
        << ',' << opt(r.t2_sq) << ',' << opt(r.x) << ',' << format_real(r.expected)
        << ',' << r.provenance << ',' << format_real(r.tolerance) << '\n';
  }
}

inline std::vector<FixtureRecord> read_fixtures(std::istream& in) {
  std::vector<FixtureRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kFixtureHeader) throw InvalidArgument("fixtures: bad header");
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw InvalidArgument("fixtures: expected 11 fields");
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_real(s);
    };
    FixtureRecord r;
    r.description = f[0];
    r.quantity = f[1];
    r.alpha_sq = opt(f[2]);
    r.intensity_gain = opt(f[3]);
    r.eta1 = opt(f[4]);
    r.eta2 = opt(f[5]);
    r.t2_sq = opt(f[6]);
    r.x = opt(f[7]);
    r.expected = parse_real(f[8]);
    r.provenance = f[9];
    r.tolerance = parse_real(f[10]);
    records.push_back(r);
  }
  if (!header_seen) throw InvalidArgument("fixtures: missing header");
  return records;
}

/// Differences between committed and freshly regenerated records. Values may
/// differ by the record's relative tolerance, or by `tolerance_override`.
inline std::vector<std::string> find_drift(
    const std::vector<FixtureRecord>& committed,
    const std::vector<FixtureRecord>& fresh,
    std::optional<double> tolerance_override = {}) {
  std::vector<std::string> problems;
  if (committed.size() != fresh.size()) {
    problems.push_back("fixture count changed: " + std::to_string(committed.size()) +
                       " committed, " + std::to_string(fresh.size()) + " regenerated");
  }
  const std::size_t n = std::min(committed.size(), fresh.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = committed[i];
    const auto& f = fresh[i];
    if (c.description != f.description || c.quantity != f.quantity ||
        c.provenance != f.provenance) {
      problems.push_back("row " + std::to_string(i) + " identity changed: '" +
                         c.description + "' vs '" + f.description + "'");
      continue;
    }
    const double tol = tolerance_override.value_or(c.tolerance);
    const double err = relative_error(f.expected, c.expected);
    if (err > tol) {
      problems.push_back("'" + c.description + "' drifted: committed " +
                         format_real(c.expected) + ", regenerated " +
                         format_real(f.expected));
    }
  }
  return problems;
}

}  // namespace scamp::testing

#endif  // SCAMP_TESTS_FIXTURES_HPP_
