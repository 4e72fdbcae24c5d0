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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scamp/scamp.hpp"

namespace scamp::cli {
namespace {

using nlohmann::json;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kOracleTolerance = 1e-9;
constexpr double kZLimit = 4.0;

struct Params {
  std::optional<std::string> ensemble;
  std::vector<double> alpha_sq;
  std::optional<double> gain;
  std::optional<double> gain_min;
  std::optional<double> gain_max;
  std::optional<int> gain_steps;
  std::optional<double> t2_sq;
  std::optional<double> r2_sq;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double dark1 = 0.0;
  double dark2 = 0.0;
  long long trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::optional<std::string> preset;
  std::optional<std::string> format_flag;
  std::string format;
  std::optional<std::string> out_path;
  std::string mode = "analytic";
  std::string detection = "exact";
  std::optional<double> guess_re;
  std::optional<double> guess_im;
  std::optional<double> inject_mc_eta1;
};

// ---- option registration -------------------------------------------------

void add_ensemble(CLI::App* cmd, Params& p) {
  cmd->add_option("--ensemble", p.ensemble,
                  "input ensemble: binary (+/-alpha) or phase (uniform phase)")
      ->check(CLI::IsMember({"binary", "phase"}));
}

void add_device(CLI::App* cmd, Params& p, bool gain_grid) {
  cmd->add_option("--alpha-sq", p.alpha_sq,
                  "mean photon number alpha^2 of the input (photons, > 0); "
                  "repeat for several values")
      ->expected(1, 1 << 20)
      ->delimiter(',');
  auto* gain = cmd->add_option(
      "--intensity-gain", p.gain,
      "intensity gain G = g^2 (power ratio, dimensionless, must exceed t2^2)");
  if (gain_grid) {
    auto* lo = cmd->add_option("--gain-min", p.gain_min,
                               "smallest intensity gain G of a log-spaced grid");
    auto* hi = cmd->add_option("--gain-max", p.gain_max,
                               "largest intensity gain G of a log-spaced grid");
    auto* steps =
        cmd->add_option("--gain-steps", p.gain_steps, "number of grid points");
    gain->excludes(lo)->excludes(hi)->excludes(steps);
  }
  auto* t2 = cmd->add_option(
      "--t2-sq", p.t2_sq,
      "intensity transmission t2^2 of the subtraction beam splitter, in (0, 1)");
  auto* r2 = cmd->add_option(
      "--r2-sq", p.r2_sq,
      "intensity reflection r2^2 = 1 - t2^2 of the subtraction beam splitter");
  t2->excludes(r2);
  cmd->add_option("--eta1", p.eta1,
                  "quantum efficiency of the comparison detector, [0, 1]")->capture_default_str();
  cmd->add_option("--eta2", p.eta2,
                  "quantum efficiency of the subtraction detector, [0, 1]")->capture_default_str();
}

void add_dark(CLI::App* cmd, Params& p) {
  cmd->add_option("--dark1", p.dark1,
                  "dark-count probability per detection window, comparison "
                  "detector, [0, 1)")->capture_default_str();
  cmd->add_option("--dark2", p.dark2,
                  "dark-count probability per detection window, subtraction "
                  "detector, [0, 1)")->capture_default_str();
}

void add_simulation(CLI::App* cmd, Params& p) {
  cmd->add_option("--trials", p.trials, "Monte Carlo trials per point (>= 1)")->capture_default_str();
  cmd->add_option("--seed", p.seed, "Monte Carlo seed (unsigned 64-bit)")->capture_default_str();
  cmd->add_option("--threads", p.threads,
                  "worker threads; results do not depend on this")->capture_default_str();
}

void add_output(CLI::App* cmd, Params& p, const std::string& default_format) {
  cmd->add_option("--format", p.format_flag,
                  "output format (default: " + default_format + ")")
      ->check(CLI::IsMember({"human", "csv", "jsonl"}));
  cmd->add_option("--out", p.out_path, "write output to this file");
}

// ---- validation ------------------------------------------------------------

void check(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

EnsembleKind ensemble_kind(const std::string& name) {
  return name == "binary" ? EnsembleKind::Binary : EnsembleKind::PhaseCovariant;
}

std::optional<double> subtraction_t2(const Params& p) {
  if (p.t2_sq) return *p.t2_sq;
  if (p.r2_sq) return 1.0 - *p.r2_sq;
  return std::nullopt;
}

void check_detectors(const Params& p) {
  check(p.eta1 >= 0.0 && p.eta1 <= 1.0, "--eta1 must lie in [0, 1]");
  check(p.eta2 >= 0.0 && p.eta2 <= 1.0, "--eta2 must lie in [0, 1]");
  check(p.dark1 >= 0.0 && p.dark1 < 1.0, "--dark1 must lie in [0, 1)");
  check(p.dark2 >= 0.0 && p.dark2 < 1.0, "--dark2 must lie in [0, 1)");
}

void check_alpha_sq(const std::vector<double>& list) {
  for (double a2 : list) {
    check(std::isfinite(a2) && a2 > 0.0, "--alpha-sq must be positive");
  }
}

double require_t2(const Params& p) {
  const auto t2 = subtraction_t2(p);
  check(t2.has_value(), "one of --t2-sq or --r2-sq is required");
  check(*t2 > 0.0 && *t2 < 1.0, "t2^2 must lie in (0, 1)");
  return *t2;
}

double checked_t2_or(const Params& p, double fallback) {
  return subtraction_t2(p) ? require_t2(p) : fallback;
}

void check_gain(double gain, double t2_sq) {
  check(std::isfinite(gain) && gain > t2_sq,
        "--intensity-gain must exceed t2^2 (" + format_real(t2_sq) + ")");
}

std::vector<double> gain_list(const Params& p, std::vector<double> fallback) {
  if (p.gain) return {*p.gain};
  if (p.gain_min || p.gain_max || p.gain_steps) {
    check(p.gain_min && p.gain_max && p.gain_steps,
          "--gain-min, --gain-max and --gain-steps must be given together");
    check(*p.gain_steps >= 1, "--gain-steps must be >= 1");
    check(*p.gain_steps == 1 || *p.gain_max > *p.gain_min,
          "--gain-max must exceed --gain-min");
    return GainGrid{*p.gain_min, *p.gain_max, *p.gain_steps}.points();
  }
  return fallback;
}

AmplifierConfig make_config(const Params& p, double gain, double t2_sq) {
  check_gain(gain, t2_sq);
  return AmplifierConfig(gain, t2_sq, DetectorModel(p.eta1, p.dark1),
                         DetectorModel(p.eta2, p.dark2));
}

void check_trials(const Params& p) { check(p.trials >= 1, "--trials must be >= 1"); }

// ---- formatting ------------------------------------------------------------

std::string human(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void line(std::ostream& out, const std::string& key, const std::string& value) {
  out << key;
  for (std::size_t i = key.size(); i < 18; ++i) out << ' ';
  out << value << '\n';
}

std::string with_error(const Estimate& e) {
  return human(e.value) + " +/- " + human(e.std_error);
}

json row_json(const SweepRow& r) {
  json j{{"ensemble", to_string(r.ensemble)},
         {"alpha_sq", r.alpha_sq},
         {"intensity_gain", r.intensity_gain},
         {"eta1", r.eta1},
         {"eta2", r.eta2},
         {"t2_sq", r.t2_sq},
         {"source", to_string(r.source)},
         {"p_success", r.p_success}};
  auto put = [&j](const char* key, const std::optional<double>& v) {
    j[key] = v ? json(*v) : json(nullptr);
  };
  put("p_success_se", r.p_success_se);
  put("fidelity", r.fidelity);
  put("fidelity_se", r.fidelity_se);
  put("noise_figure", r.noise_figure);
  put("noise_figure_se", r.noise_figure_se);
  return j;
}

void write_rows(std::ostream& out, const std::vector<SweepRow>& rows,
                const std::string& format) {
  if (format == "csv") {
    emit_csv(rows, out);
  } else if (format == "jsonl") {
    for (const auto& r : rows) out << row_json(r).dump() << '\n';
  } else {
    auto opt = [](const std::optional<double>& v) {
      return v ? human(*v) : std::string("-");
    };
    out << "ensemble  alpha_sq  G             source    p_success     fidelity"
           "      noise_figure\n";
    for (const auto& r : rows) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-9s %-9s %-13s %-9s %-13s %-13s %s\n",
                    to_string(r.ensemble), human(r.alpha_sq).c_str(),
                    human(r.intensity_gain).c_str(), to_string(r.source),
                    human(r.p_success).c_str(), opt(r.fidelity).c_str(),
                    opt(r.noise_figure).c_str());
      out << buf;
    }
  }
}

// ---- subcommands -----------------------------------------------------------

struct PointArgs {
  EnsembleKind kind;
  double alpha_sq;
  AmplifierConfig cfg;
};

PointArgs single_point(const Params& p) {
  check(p.ensemble.has_value(), "--ensemble is required");
  check(p.alpha_sq.size() == 1, "exactly one --alpha-sq value is required");
  check_alpha_sq(p.alpha_sq);
  check(p.gain.has_value(), "--intensity-gain is required");
  check_detectors(p);
  const double t2 = require_t2(p);
  return {ensemble_kind(*p.ensemble), p.alpha_sq.front(),
          make_config(p, *p.gain, t2)};
}

int cmd_eval(const Params& p, std::ostream& out) {
  const PointArgs pt = single_point(p);
  check(p.dark1 == 0.0 && p.dark2 == 0.0,
        "closed forms assume zero dark counts; use simulate for dark counts");
  const double alpha = std::sqrt(pt.alpha_sq);
  const SweepRow row = analytic_row(pt.kind, pt.alpha_sq, pt.cfg);
  if (!row.fidelity) throw NeverSucceeds();

  if (p.format == "csv" || p.format == "jsonl") {
    write_rows(out, {row}, p.format);
    return kExitOk;
  }
  line(out, "ensemble", to_string(pt.kind));
  line(out, "alpha_sq", human(pt.alpha_sq));
  line(out, "intensity_gain", human(pt.cfg.intensity_gain()));
  line(out, "t2_sq", human(pt.cfg.t2_sq()));
  line(out, "eta1", human(pt.cfg.d1().eta()));
  line(out, "eta2", human(pt.cfg.d2().eta()));
  if (pt.kind == EnsembleKind::Binary) {
    const BinaryMetrics m = binary_metrics(alpha, pt.cfg);
    const QuadratureMoments q = binary_quadrature_moments(alpha, pt.cfg);
    line(out, "p_success", human(m.p_success));
    line(out, "p_joint", human(m.p_joint));
    line(out, "fidelity", human(m.fidelity));
    line(out, "p_plus_given_s", human(m.p_plus_given_s));
    line(out, "p_minus_given_s", human(m.p_minus_given_s));
    line(out, "mean_x1", human(q.mean_x1));
    line(out, "mean_x1_sq", human(q.mean_x1_sq));
    line(out, "variance_x1", human(q.variance));
    line(out, "snr_in", human(2.0 * alpha));
    line(out, "snr_out", human(q.snr_out));
    line(out, "noise_figure", human(q.noise_figure));
  } else {
    line(out, "p_success", human(row.p_success));
    line(out, "p_joint", human(phase_covariant_joint_prob(alpha, pt.cfg)));
    line(out, "fidelity", human(*row.fidelity));
  }
  return kExitOk;
}

SimulationOptions simulation_options(const Params& p) {
  SimulationOptions options;
  options.workers = std::max(1u, p.threads);
  options.detection = p.detection == "photon" ? DetectionSampling::PhotonCounting
                                              : DetectionSampling::ClickProbability;
  if (p.guess_re || p.guess_im) {
    options.guess = ComplexAmplitude(p.guess_re.value_or(0.0),
                                     p.guess_im.value_or(0.0));
  }
  return options;
}

int cmd_simulate(const Params& p, std::ostream& out) {
  const PointArgs pt = single_point(p);
  check_trials(p);
  const InputEnsemble ensemble(pt.kind, std::sqrt(pt.alpha_sq));
  const EstimateSummary s =
      estimate(ensemble, pt.cfg, static_cast<std::uint64_t>(p.trials), p.seed,
               simulation_options(p));
  const SweepRow row = mc_row(s, pt.kind, pt.alpha_sq, pt.cfg);
  if (p.format == "csv") {
    write_rows(out, {row}, "csv");
    return kExitOk;
  }
  if (p.format == "jsonl") {
    json j = row_json(row);
    j["n_trials"] = s.n_trials;
    j["n_accepted"] = s.n_accepted;
    j["seed"] = s.seed;
    out << j.dump() << '\n';
    return kExitOk;
  }
  auto opt = [](const std::optional<Estimate>& e) {
    return e ? with_error(*e) : std::string("absent (no accepted trials)");
  };
  line(out, "ensemble", to_string(pt.kind));
  line(out, "alpha_sq", human(pt.alpha_sq));
  line(out, "intensity_gain", human(pt.cfg.intensity_gain()));
  line(out, "t2_sq", human(pt.cfg.t2_sq()));
  line(out, "seed", std::to_string(s.seed));
  line(out, "n_trials", std::to_string(s.n_trials));
  line(out, "n_accepted", std::to_string(s.n_accepted));
  line(out, "p_success", with_error(s.p_success));
  line(out, "fidelity", opt(s.fidelity));
  line(out, "fidelity_sampled", opt(s.fidelity_sampled));
  if (pt.kind == EnsembleKind::Binary) {
    line(out, "mean_x1", opt(s.mean_x1));
    line(out, "mean_x1_sq", opt(s.mean_x1_sq));
    line(out, "noise_figure", opt(s.noise_figure));
  }
  return kExitOk;
}

int cmd_sweep(const Params& p, std::ostream& out) {
  SweepMode mode = SweepMode::Analytic;
  if (p.mode == "mc") mode = SweepMode::MonteCarlo;
  if (p.mode == "both") mode = SweepMode::Both;
  check_trials(p);
  std::vector<SweepSpec> specs;
  if (p.preset) {
    check(!p.ensemble && p.alpha_sq.empty() && !p.gain && !p.gain_min &&
              !p.gain_max && !p.gain_steps && !p.t2_sq && !p.r2_sq,
          "--preset fixes the device parameters; drop the explicit flags");
    specs = preset(*p.preset);
  } else {
    check(p.ensemble.has_value(), "--ensemble or --preset is required");
    check(!p.alpha_sq.empty(), "--alpha-sq is required");
    check_alpha_sq(p.alpha_sq);
    check_detectors(p);
    SweepSpec s;
    s.ensemble = ensemble_kind(*p.ensemble);
    s.alpha_sq_list = p.alpha_sq;
    s.t2_sq = require_t2(p);
    if (p.gain) {
      check_gain(*p.gain, s.t2_sq);
      s.gain_grid = GainGrid{*p.gain, *p.gain, 1};
    } else {
      check(p.gain_min && p.gain_max && p.gain_steps,
            "--intensity-gain or --gain-min/--gain-max/--gain-steps is required");
      gain_list(p, {});
      s.gain_grid = GainGrid{*p.gain_min, *p.gain_max, *p.gain_steps};
      check_gain(s.gain_grid.min, s.t2_sq);
    }
    s.eta1 = p.eta1;
    s.eta2 = p.eta2;
    s.dark1 = p.dark1;
    s.dark2 = p.dark2;
    specs.push_back(s);
  }
  std::vector<SweepRow> rows;
  for (auto& s : specs) {
    s.mode = mode;
    s.n_trials = static_cast<std::uint64_t>(p.trials);
    s.seed = p.seed;
    s.workers = std::max(1u, p.threads);
    try {
      s.validate();
    } catch (const InvalidArgument& e) {
      throw ValidationError(e.what());
    }
    const auto part = sweep(s);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_rows(out, rows, p.format);
  return kExitOk;
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_oracle(const Params& p, std::ostream& out) {
  const EnsembleKind kind = ensemble_kind(p.ensemble.value_or("phase"));
  std::vector<double> alphas = p.alpha_sq;
  if (alphas.empty()) alphas = {0.1, 0.5, 1.0};
  check_alpha_sq(alphas);
  check_detectors(p);
  check(p.dark1 == 0.0 && p.dark2 == 0.0, "oracle checks assume zero dark counts");
  const double t2 = checked_t2_or(p, kind == EnsembleKind::Binary ? 0.9 : 0.95);
  const auto gains = gain_list(p, {1.2, 2.0, 4.0, 8.0});

  bool all_ok = true;
  json report = json::array();
  for (double a2 : alphas) {
    for (double gain : gains) {
      const AmplifierConfig cfg = make_config(p, gain, t2);
      const double alpha = std::sqrt(a2);
      double closed_s, oracle_s, closed_j, oracle_j;
      if (kind == EnsembleKind::PhaseCovariant) {
        closed_s = phase_covariant_success_prob(alpha, cfg);
        closed_j = phase_covariant_joint_prob(alpha, cfg);
        oracle_s = phase_quadrature_oracle(alpha, cfg);
        oracle_j = phase_quadrature_oracle(alpha, cfg,
                                           cfg.d1().eta() + gain - cfg.t2_sq());
      } else {
        // Two-point average of the single-input expressions.
        const BinaryMetrics m = binary_metrics(alpha, cfg);
        closed_s = m.p_success;
        closed_j = m.p_joint;
        const ComplexAmplitude beta = cfg.nulling_guess(ComplexAmplitude(alpha));
        oracle_s = oracle_j = 0.0;
        for (double sign : {1.0, -1.0}) {
          const ComplexAmplitude in(sign * alpha);
          const double ps = success_prob_given(in, beta, cfg);
          oracle_s += 0.5 * ps;
          oracle_j += 0.5 * ps * fidelity_test_prob(in, beta, cfg);
        }
      }
      const double rel_s = relative_difference(closed_s, oracle_s);
      const double rel_j = relative_difference(closed_j, oracle_j);
      const bool ok = rel_s <= kOracleTolerance && rel_j <= kOracleTolerance;
      all_ok = all_ok && ok;
      if (p.format == "human") {
        out << to_string(kind) << " alpha_sq=" << human(a2) << " G=" << human(gain)
            << " p_success closed=" << format_real(closed_s)
            << " oracle=" << format_real(oracle_s) << " rel=" << human(rel_s)
            << " | p_joint closed=" << format_real(closed_j)
            << " oracle=" << format_real(oracle_j) << " rel=" << human(rel_j)
            << (ok ? "  ok" : "  MISMATCH") << '\n';
      } else {
        report.push_back({{"ensemble", to_string(kind)},
                          {"alpha_sq", a2},
                          {"intensity_gain", gain},
                          {"p_success_closed", closed_s},
                          {"p_success_oracle", oracle_s},
                          {"p_joint_closed", closed_j},
                          {"p_joint_oracle", oracle_j},
                          {"ok", ok}});
      }
    }
  }
  if (p.format == "csv") {
    out << "ensemble,alpha_sq,intensity_gain,p_success_closed,p_success_oracle,"
           "p_joint_closed,p_joint_oracle,ok\n";
    for (const auto& r : report) {
      out << r["ensemble"].get<std::string>() << ','
          << format_real(r["alpha_sq"].get<double>()) << ','
          << format_real(r["intensity_gain"].get<double>()) << ','
          << format_real(r["p_success_closed"].get<double>()) << ','
          << format_real(r["p_success_oracle"].get<double>()) << ','
          << format_real(r["p_joint_closed"].get<double>()) << ','
          << format_real(r["p_joint_oracle"].get<double>()) << ','
          << (r["ok"].get<bool>() ? "true" : "false") << '\n';
    }
  } else if (p.format == "jsonl") {
    for (const auto& r : report) out << r.dump() << '\n';
  }
  return all_ok ? kExitOk : kExitMismatch;
}

double z_score(double mc, double se, double analytic) {
  const double diff = mc - analytic;
  if (se > 0.0) return diff / se;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

int cmd_compare(const Params& p, std::ostream& out) {
  check_trials(p);
  check_detectors(p);
  check(p.dark1 == 0.0 && p.dark2 == 0.0,
        "compare uses the dark-count-free closed forms");
  std::vector<EnsembleKind> kinds{EnsembleKind::Binary,
                                  EnsembleKind::PhaseCovariant};
  if (p.ensemble) kinds = {ensemble_kind(*p.ensemble)};
  std::vector<double> alphas = p.alpha_sq;
  if (alphas.empty()) alphas = {0.1, 0.5, 1.0};
  check_alpha_sq(alphas);
  const auto gains = gain_list(p, {1.5, 2.0, 4.0, 8.0});
  if (p.inject_mc_eta1) {
    check(*p.inject_mc_eta1 >= 0.0 && *p.inject_mc_eta1 <= 1.0,
          "--inject-mc-eta1 must lie in [0, 1]");
  }

  bool all_ok = true;
  std::vector<SweepRow> rows;
  std::uint64_t point = 0;
  for (EnsembleKind kind : kinds) {
    const double t2 = checked_t2_or(p, kind == EnsembleKind::Binary ? 0.9 : 0.95);
    for (double a2 : alphas) {
      for (double gain : gains) {
        const AmplifierConfig cfg = make_config(p, gain, t2);
        const SweepRow exact = analytic_row(kind, a2, cfg);
        if (!exact.fidelity) throw NeverSucceeds();
        AmplifierConfig mc_cfg = cfg;
        if (p.inject_mc_eta1) {
          mc_cfg = cfg.with_detectors(DetectorModel(*p.inject_mc_eta1, p.dark1),
                                      cfg.d2());
        }
        const EstimateSummary s =
            estimate(InputEnsemble(kind, std::sqrt(a2)), mc_cfg,
                     static_cast<std::uint64_t>(p.trials),
                     derive_seed(p.seed, point++), simulation_options(p));
        SweepRow mc = mc_row(s, kind, a2, cfg);

        struct Metric {
          const char* name;
          double analytic;
          std::optional<double> value, se;
        };
        std::vector<Metric> metrics{
            {"p_success", exact.p_success, mc.p_success, mc.p_success_se},
            {"fidelity", *exact.fidelity, mc.fidelity, mc.fidelity_se}};
        if (kind == EnsembleKind::Binary) {
          metrics.push_back({"noise_figure", *exact.noise_figure, mc.noise_figure,
                             mc.noise_figure_se});
        }
        json j{{"ensemble", to_string(kind)},
               {"alpha_sq", a2},
               {"intensity_gain", gain},
               {"n_accepted", s.n_accepted}};
        for (const auto& m : metrics) {
          const double z = m.value ? z_score(*m.value, *m.se, m.analytic)
                                   : std::numeric_limits<double>::infinity();
          const bool ok = std::abs(z) <= kZLimit;
          all_ok = all_ok && ok;
          if (p.format == "human") {
            out << to_string(kind) << " alpha_sq=" << human(a2)
                << " G=" << human(gain) << ' ' << m.name
                << " analytic=" << human(m.analytic) << " mc="
                << (m.value ? human(*m.value) : std::string("absent"))
                << " se=" << (m.se ? human(*m.se) : std::string("-"))
                << " z=" << human(z) << (ok ? "" : "  MISMATCH") << '\n';
          }
          j[m.name] = {{"analytic", m.analytic},
                       {"mc", m.value ? json(*m.value) : json(nullptr)},
                       {"se", m.se ? json(*m.se) : json(nullptr)},
                       {"z", std::isfinite(z) ? json(z) : json(nullptr)},
                       {"ok", ok}};
        }
        if (p.format == "jsonl") out << j.dump() << '\n';
        rows.push_back(exact);
        rows.push_back(mc);
      }
    }
  }
  if (p.format == "csv") emit_csv(rows, out);
  if (p.format == "human") {
    out << (all_ok ? "all z-scores within 4" : "statistical mismatch detected")
        << '\n';
  }
  return all_ok ? kExitOk : kExitMismatch;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "State-comparison amplifier: closed-form metrics, Monte Carlo "
      "simulation, parameter sweeps and oracle cross-checks.",
      "scamp"};
  app.require_subcommand(1, 1);
  Params p;

  auto* eval = app.add_subcommand("eval", "closed-form metrics at one point");
  add_ensemble(eval, p);
  add_device(eval, p, false);
  add_dark(eval, p);
  add_output(eval, p, "human");

  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo estimate at one point");
  add_ensemble(simulate, p);
  add_device(simulate, p, false);
  add_dark(simulate, p);
  add_simulation(simulate, p);
  add_output(simulate, p, "human");
  simulate
      ->add_option("--detection", p.detection,
                   "detector sampling: exact click probability, or photon "
                   "(Poisson photon number with per-photon efficiency)")->capture_default_str()
      ->check(CLI::IsMember({"exact", "photon"}));
  simulate->add_option("--guess-re", p.guess_re,
                       "real part of Bob's guess amplitude (default: nulling "
                       "guess t1*alpha/r1)");
  simulate->add_option("--guess-im", p.guess_im,
                       "imaginary part of Bob's guess amplitude");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "metrics over an (alpha^2, G) grid");
  add_ensemble(sweep_cmd, p);
  add_device(sweep_cmd, p, true);
  add_dark(sweep_cmd, p);
  add_simulation(sweep_cmd, p);
  add_output(sweep_cmd, p, "csv");
  sweep_cmd->add_option("--preset", p.preset, "bundled figure configuration")
      ->check(CLI::IsMember({"fig3", "fig4", "nf", "figS2", "figS3"}));
  sweep_cmd->add_option("--mode", p.mode, "evaluation source")->capture_default_str()
      ->check(CLI::IsMember({"analytic", "mc", "both"}));

  auto* oracle = app.add_subcommand(
      "oracle",
      "check closed forms against independent evaluation (phase: Simpson "
      "quadrature; binary: two-point average)");
  add_ensemble(oracle, p);
  add_device(oracle, p, true);
  add_output(oracle, p, "human");

  auto* compare = app.add_subcommand(
      "compare", "closed forms vs Monte Carlo with z-scores (exit 4 if |z| > 4)");
  add_ensemble(compare, p);
  add_device(compare, p, true);
  add_simulation(compare, p);
  add_output(compare, p, "human");
  compare->add_option("--inject-mc-eta1", p.inject_mc_eta1,
                      "testing hook: comparison-detector efficiency used by "
                      "the Monte Carlo path only");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return kExitValidation;
  }

  p.format = p.format_flag.value_or(*sweep_cmd ? "csv" : "human");

  std::ostringstream buffer;
  int status = kExitOk;
  try {
    if (*eval) status = cmd_eval(p, buffer);
    if (*simulate) status = cmd_simulate(p, buffer);
    if (*sweep_cmd) status = cmd_sweep(p, buffer);
    if (*oracle) status = cmd_oracle(p, buffer);
    if (*compare) status = cmd_compare(p, buffer);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NeverSucceeds&) {
    err << "error: device never succeeds (P(S) = 0)\n";
    return kExitNeverSucceeds;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }

  if (p.out_path) {
    std::ofstream file(*p.out_path, std::ios::binary);
    if (!file || !(file << buffer.str()) || !file.flush()) {
      err << "error: cannot write '" << *p.out_path << "'\n";
      return 1;
    }
  } else {
    out << buffer.str();
  }
  return status;
}

}  // namespace scamp::cli
