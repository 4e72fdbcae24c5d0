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

// Parameter sweeps over (alpha^2, G) and their CSV serialization.

#ifndef SCAMP_SWEEP_HPP_
#define SCAMP_SWEEP_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "scamp/analytic.hpp"
#include "scamp/core.hpp"
#include "scamp/errors.hpp"
#include "scamp/montecarlo.hpp"

namespace scamp {

enum class SweepMode { Analytic, MonteCarlo, Both };
enum class Source { Analytic, MonteCarlo };

inline const char* to_string(Source s) {
  return s == Source::Analytic ? "analytic" : "mc";
}

/// `steps` log-spaced intensity gains from `min` to `max` inclusive.
struct GainGrid {
  double min = 1.5;
  double max = 10.0;
  int steps = 60;

  std::vector<double> points() const {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(std::max(steps, 0)));
    if (steps == 1) return {min};
    const double log_ratio = std::log(max / min);
    for (int i = 0; i < steps; ++i) {
      g.push_back(i == steps - 1 ? max
                                 : min * std::exp(log_ratio * i / (steps - 1)));
    }
    return g;
  }
};

struct SweepSpec {
  EnsembleKind ensemble = EnsembleKind::Binary;
  std::vector<double> alpha_sq_list;
  GainGrid gain_grid;
  double t2_sq = 0.9;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double dark1 = 0.0;
  double dark2 = 0.0;
  SweepMode mode = SweepMode::Analytic;
  std::uint64_t n_trials = 1'000'000;
  std::uint64_t seed = 42;
  unsigned workers = 1;

  bool wants_analytic() const { return mode != SweepMode::MonteCarlo; }
  bool wants_mc() const { return mode != SweepMode::Analytic; }

  void validate() const {
    using detail::require;
    require(!alpha_sq_list.empty(), "sweep: alpha_sq list is empty");
    for (double a2 : alpha_sq_list) {
      require(std::isfinite(a2) && a2 > 0.0, "sweep: alpha_sq must be positive");
    }
    require(gain_grid.steps >= 1, "sweep: gain steps must be >= 1");
    require(std::isfinite(gain_grid.min) && std::isfinite(gain_grid.max),
            "sweep: gain bounds must be finite");
    require(gain_grid.steps == 1 || gain_grid.max > gain_grid.min,
            "sweep: gain grid must be strictly increasing");
    require(t2_sq > 0.0 && t2_sq < 1.0, "sweep: t2^2 must lie in (0, 1)");
    require(gain_grid.min > t2_sq, "sweep: every gain must exceed t2^2");
    // Constructing the detectors checks the eta and dark ranges.
    (void)DetectorModel(eta1, dark1);
    (void)DetectorModel(eta2, dark2);
    require(!wants_analytic() || (dark1 == 0.0 && dark2 == 0.0),
            "sweep: analytic mode requires zero dark counts");
    require(!wants_mc() || n_trials >= 1, "sweep: n_trials must be >= 1");
  }

  AmplifierConfig config_at(double gain) const {
    return AmplifierConfig(gain, t2_sq, DetectorModel(eta1, dark1),
                           DetectorModel(eta2, dark2));
  }
};

struct SweepRow {
  EnsembleKind ensemble = EnsembleKind::Binary;
  double alpha_sq = 0.0;
  double intensity_gain = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double t2_sq = 0.0;
  Source source = Source::Analytic;
  double p_success = 0.0;
  std::optional<double> p_success_se;
  std::optional<double> fidelity;
  std::optional<double> fidelity_se;
  std::optional<double> noise_figure;
  std::optional<double> noise_figure_se;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

namespace detail {

inline SweepRow row_for(EnsembleKind ensemble, double alpha_sq,
                        const AmplifierConfig& cfg, Source source) {
  SweepRow row;
  row.ensemble = ensemble;
  row.alpha_sq = alpha_sq;
  row.intensity_gain = cfg.intensity_gain();
  row.eta1 = cfg.d1().eta();
  row.eta2 = cfg.d2().eta();
  row.t2_sq = cfg.t2_sq();
  row.source = source;
  return row;
}

}  // namespace detail

inline SweepRow analytic_row(EnsembleKind ensemble, double alpha_sq,
                             const AmplifierConfig& cfg) {
  SweepRow row = detail::row_for(ensemble, alpha_sq, cfg, Source::Analytic);
  const double alpha = std::sqrt(alpha_sq);
  if (ensemble == EnsembleKind::Binary) {
    row.p_success = binary_success_prob(alpha, cfg);
    try {
      row.fidelity = binary_metrics(alpha, cfg).fidelity;
      row.noise_figure = binary_quadrature_moments(alpha, cfg).noise_figure;
    } catch (const NeverSucceeds&) {
    }
  } else {
    row.p_success = phase_covariant_success_prob(alpha, cfg);
    try {
      row.fidelity = phase_covariant_fidelity(alpha, cfg);
    } catch (const NeverSucceeds&) {
    }
  }
  return row;
}

inline SweepRow mc_row(const EstimateSummary& s, EnsembleKind ensemble,
                       double alpha_sq, const AmplifierConfig& cfg) {
  SweepRow row = detail::row_for(ensemble, alpha_sq, cfg, Source::MonteCarlo);
  row.p_success = s.p_success.value;
  row.p_success_se = s.p_success.std_error;
  if (s.fidelity) {
    row.fidelity = s.fidelity->value;
    row.fidelity_se = s.fidelity->std_error;
  }
  if (s.noise_figure) {
    row.noise_figure = s.noise_figure->value;
    row.noise_figure_se = s.noise_figure->std_error;
  }
  return row;
}

/// Rows ordered by (alpha_sq list order, gain, source) with the analytic row
/// first when both sources are requested. Monte Carlo point k (in that
/// order, counting grid points only) is seeded with derive_seed(seed, k).
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> gains = spec.gain_grid.points();
  std::vector<SweepRow> rows;
  std::uint64_t point = 0;
  for (double a2 : spec.alpha_sq_list) {
    const double alpha = std::sqrt(a2);
    for (double gain : gains) {
      const AmplifierConfig cfg = spec.config_at(gain);
      if (spec.wants_analytic()) rows.push_back(analytic_row(spec.ensemble, a2, cfg));
      if (spec.wants_mc()) {
        SimulationOptions options;
        options.workers = spec.workers;
        const auto summary = estimate(InputEnsemble(spec.ensemble, alpha), cfg,
                                      spec.n_trials, derive_seed(spec.seed, point),
                                      options);
        rows.push_back(mc_row(summary, spec.ensemble, a2, cfg));
      }
      ++point;
    }
  }
  return rows;
}

/// Bundled figure configurations. fig3/fig4 (binary fidelity / success) and
/// nf share t2^2 = 0.9 and a 60-point log grid over [1.05 t2^2, 10];
/// figS2/figS3 (phase-covariant fidelity / success) use t2^2 = 0.95 and a
/// 60-point log grid over [1.5, 8]. fig3, fig4, figS2 and figS3 expand to one
/// spec per efficiency, eta in {1, 0.5}, applied to both detectors.
inline std::vector<SweepSpec> preset(std::string_view name) {
  const std::vector<double> alphas{0.1, 0.5, 1.0};
  auto make = [&](EnsembleKind kind, double t2_sq, GainGrid grid, double eta) {
    SweepSpec s;
    s.ensemble = kind;
    s.alpha_sq_list = alphas;
    s.t2_sq = t2_sq;
    s.gain_grid = grid;
    s.eta1 = s.eta2 = eta;
    return s;
  };
  const GainGrid binary_grid{1.05 * 0.9, 10.0, 60};
  const GainGrid phase_grid{1.5, 8.0, 60};
  if (name == "fig3" || name == "fig4") {
    return {make(EnsembleKind::Binary, 0.9, binary_grid, 1.0),
            make(EnsembleKind::Binary, 0.9, binary_grid, 0.5)};
  }
  if (name == "nf") return {make(EnsembleKind::Binary, 0.9, binary_grid, 1.0)};
  if (name == "figS2" || name == "figS3") {
    return {make(EnsembleKind::PhaseCovariant, 0.95, phase_grid, 1.0),
            make(EnsembleKind::PhaseCovariant, 0.95, phase_grid, 0.5)};
  }
  throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

// ---- CSV ------------------------------------------------------------------

inline constexpr std::string_view kCsvHeader =
    "ensemble,alpha_sq,intensity_gain,eta1,eta2,t2_sq,source,p_success,"
    "p_success_se,fidelity,fidelity_se,noise_figure,noise_figure_se";

/// Every real is written with exactly 17 significant digits.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("csv: malformed number '" + std::string(s) + "'");
  }
  return v;
}

inline void write_csv_row(std::ostream& out, const SweepRow& r) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  out << to_string(r.ensemble) << ',' << format_real(r.alpha_sq) << ','
      << format_real(r.intensity_gain) << ',' << format_real(r.eta1) << ','
      << format_real(r.eta2) << ',' << format_real(r.t2_sq) << ','
      << to_string(r.source) << ',' << format_real(r.p_success) << ','
      << opt(r.p_success_se) << ',' << opt(r.fidelity) << ','
      << opt(r.fidelity_se) << ',' << opt(r.noise_figure) << ','
      << opt(r.noise_figure_se) << '\n';
}

inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  if (rows.empty()) throw InvalidArgument("emit_csv: no rows");
  out << kCsvHeader << '\n';
  for (const auto& r : rows) write_csv_row(out, r);
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ostringstream buffer;
  emit_csv(rows, buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << buffer.str();
  if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw InvalidArgument("csv: missing or unexpected header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw InvalidArgument("csv: expected 13 fields");
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_real(s);
    };
    SweepRow r;
    if (f[0] == "binary") {
      r.ensemble = EnsembleKind::Binary;
    } else if (f[0] == "phase") {
      r.ensemble = EnsembleKind::PhaseCovariant;
    } else {
      throw InvalidArgument("csv: unknown ensemble '" + f[0] + "'");
    }
    r.alpha_sq = parse_real(f[1]);
    r.intensity_gain = parse_real(f[2]);
    r.eta1 = parse_real(f[3]);
    r.eta2 = parse_real(f[4]);
    r.t2_sq = parse_real(f[5]);
    if (f[6] == "analytic") {
      r.source = Source::Analytic;
    } else if (f[6] == "mc") {
      r.source = Source::MonteCarlo;
    } else {
      throw InvalidArgument("csv: unknown source '" + f[6] + "'");
    }
    r.p_success = parse_real(f[7]);
    r.p_success_se = opt(f[8]);
    r.fidelity = opt(f[9]);
    r.fidelity_se = opt(f[10]);
    r.noise_figure = opt(f[11]);
    r.noise_figure_se = opt(f[12]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace scamp

#endif  // SCAMP_SWEEP_HPP_
