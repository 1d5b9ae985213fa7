#pragma once

// Reproduction runs for the sweep and validation figures: tidy CSV, a
// minimal SVG and the trend checks each figure is expected to satisfy.

#include "vpboot/errors.hpp"
#include "vpboot/experiments.hpp"
#include "vpboot/io.hpp"
#include "vpboot/stats.hpp"
#include "vpboot/svg.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace vpboot {

enum class Figure { kFig2, kFig3, kFig4, kFig5, kFig6 };
enum class Scale { kDesk, kPaper };

inline Figure parse_figure(const std::string& s) {
  if (s == "fig2") return Figure::kFig2;
  if (s == "fig3") return Figure::kFig3;
  if (s == "fig4") return Figure::kFig4;
  if (s == "fig5") return Figure::kFig5;
  if (s == "fig6") return Figure::kFig6;
  throw InputError("unknown figure '" + s + "' (expected fig2..fig6)");
}

inline std::string to_string(Figure f) {
  static const char* names[] = {"fig2", "fig3", "fig4", "fig5", "fig6"};
  return names[static_cast<int>(f)];
}

inline Scale parse_scale(const std::string& s) {
  if (s == "desk") return Scale::kDesk;
  if (s == "paper") return Scale::kPaper;
  throw InputError("unknown scale '" + s + "' (expected desk or paper)");
}

inline std::string to_string(Scale s) { return s == Scale::kDesk ? "desk" : "paper"; }

inline std::string to_string(YStatistic s) {
  return s == YStatistic::kMarginal ? "marginal" : "semipartial";
}

inline YStatistic parse_y_statistic(const std::string& s) {
  if (s == "marginal") return YStatistic::kMarginal;
  if (s == "semipartial") return YStatistic::kSemipartial;
  throw InputError("unknown y statistic '" + s + "' (expected marginal or semipartial)");
}

/// Replicates per scenario: 200 at desk scale, 1000 at paper scale.
inline Index replicates_for(Scale s) { return s == Scale::kDesk ? 200 : 1000; }

struct ReproduceOptions {
  Figure figure = Figure::kFig2;
  Scale scale = Scale::kDesk;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  YStatistic statistic = YStatistic::kMarginal;
};

/// One pass/fail trend check. `value` is compared to `threshold` with `relation`.
struct TrendCheck {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "<", ">"
  double threshold = 0.0;
  bool passed = false;
};

inline TrendCheck make_check(std::string name, double value, std::string relation,
                             double threshold) {
  bool ok = false;
  if (relation == "<=") ok = value <= threshold;
  else if (relation == ">=") ok = value >= threshold;
  else if (relation == "<") ok = value < threshold;
  else if (relation == ">") ok = value > threshold;
  return {std::move(name), value, std::move(relation), threshold, ok};
}

struct FigureRun {
  Figure figure = Figure::kFig2;
  std::string csv;
  std::string svg;
  std::vector<TrendCheck> checks;
  std::vector<ScenarioOutcome> outcomes;        // fig2..fig5
  std::vector<CcaValidationCell> cca_cells;     // fig6
  std::optional<PearsonResult> correlation;     // fig5, fig6

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Thresholds used by the figure checks.
inline constexpr double kTrendRho = -0.9;
inline constexpr double kFig5MinR = 0.85;
inline constexpr double kFig6MinR = 0.9;
inline constexpr double kFig5BandLow = 0.03;
inline constexpr double kFig5BandHigh = 1.0;
inline constexpr double kFig6SpanLow = 0.01;
inline constexpr double kFig6SpanHigh = 0.25;

inline ScenarioConfig figure_base_config(const ReproduceOptions& o) {
  ScenarioConfig base;
  base.seed = o.seed;
  base.replicates = replicates_for(o.scale);
  return base;
}

/// Sweep parameter of an outcome for the given figure.
inline double sweep_value(Figure f, const ScenarioConfig& c) {
  switch (f) {
    case Figure::kFig2: return static_cast<double>(c.n_sites);
    case Figure::kFig3: return c.y_max;
    default: return c.niches.size() > 1 ? c.niches[1].y_opt : 0.0;
  }
}

/// Union of the Figure 2-4 sweep cells (the Figure 5 scenario pool).
inline std::vector<SweepCell> figure5_cells(const ScenarioConfig& base) {
  auto cells = sample_size_cells(base, default_sample_sizes(), default_noise_levels());
  const auto range = sampling_range_cells(base, default_y_max_values(), default_noise_levels());
  const auto optimum = optimum_distance_cells(base, default_optimum_values(), default_noise_levels());
  cells.insert(cells.end(), range.begin(), range.end());
  cells.insert(cells.end(), optimum.begin(), optimum.end());
  return cells;
}

inline std::string figure_hash(const ReproduceOptions& o) {
  return hex64(fnv1a64(canonical_config(figure_base_config(o)) + "figure=" + to_string(o.figure) +
                       ";scale=" + to_string(o.scale) + ";y_statistic=" + to_string(o.statistic)));
}

inline Provenance figure_provenance(const ReproduceOptions& o) {
  Provenance p;
  p.seed = o.seed;
  p.replicates = replicates_for(o.scale);
  p.config_hash = figure_hash(o);
  p.extra = {{"figure", to_string(o.figure)},
             {"scale", to_string(o.scale)},
             {"y_statistic", to_string(o.statistic)}};
  return p;
}

inline std::string outcomes_csv(const ReproduceOptions& o,
                                const std::vector<ScenarioOutcome>& outcomes, bool with_bootstrap) {
  std::ostringstream os;
  write_provenance(os, figure_provenance(o));
  os << "figure,scenario_index,n_sites,y_max,y1_opt,y2_opt,sigma_noise,replicates,"
        "observed_mean_r2,observed_sd,observed_relative_error";
  if (with_bootstrap) os << ",validation_tables,bootstrap_relative_error";
  os << '\n';
  for (const auto& c : outcomes) {
    os << to_string(o.figure) << ',' << c.scenario_index << ',' << c.config.n_sites << ','
       << format_double(c.config.y_max) << ',' << format_double(c.config.niches[0].y_opt) << ','
       << format_double(c.config.niches[1].y_opt) << ',' << format_double(c.config.sigma_noise)
       << ',' << c.config.replicates << ',' << format_double(c.observed_mean_r2) << ','
       << format_double(c.observed_sd) << ',' << format_double(c.observed_relative_error);
    if (with_bootstrap)
      os << ',' << c.bootstrap_table_errors.size() << ','
         << format_double(c.bootstrap_relative_error.value_or(NAN));
    os << '\n';
  }
  return os.str();
}

inline std::string cca_csv(const ReproduceOptions& o, const std::vector<CcaValidationCell>& cells) {
  std::ostringstream os;
  write_provenance(os, figure_provenance(o));
  os << "figure,scenario_index,n_sites,sigma_noise,repeat,replicates,observed_mean,observed_sd,"
        "observed_relative_error,bootstrap_relative_error\n";
  for (const auto& c : cells)
    os << to_string(o.figure) << ',' << c.scenario_index << ',' << c.n_sites << ','
       << format_double(c.sigma_noise) << ',' << c.repeat << ',' << c.config.replicates << ','
       << format_double(c.observed_mean) << ',' << format_double(c.observed_sd) << ','
       << format_double(c.observed_relative_error) << ','
       << format_double(c.bootstrap_relative_error) << '\n';
  return os.str();
}

/// Spearman rho between a sweep parameter and relative error at one noise level.
inline double sweep_trend(Figure f, const std::vector<ScenarioOutcome>& outcomes, double noise,
                          bool use_mean = false) {
  std::vector<double> x, y;
  for (const auto& c : outcomes)
    if (c.config.sigma_noise == noise) {
      x.push_back(sweep_value(f, c.config));
      y.push_back(use_mean ? c.observed_mean_r2 : c.observed_relative_error);
    }
  return spearman_rho(x, y);
}

inline const ScenarioOutcome& find_cell(const std::vector<ScenarioOutcome>& outcomes, Figure f,
                                        double noise, double value) {
  for (const auto& c : outcomes)
    if (c.config.sigma_noise == noise && sweep_value(f, c.config) == value) return c;
  throw InputError("no sweep cell at noise " + format_double(noise) + ", value " +
                   format_double(value));
}

inline std::string sweep_svg(Figure f, const std::vector<ScenarioOutcome>& outcomes) {
  svg::Chart chart;
  static const char* titles[] = {"Sample size", "Sampling range of y", "Niche optimum distance"};
  static const char* xlabels[] = {"n (sites)", "y_max", "y*_2 - y*_1"};
  const int k = static_cast<int>(f);
  chart.title = std::string(titles[k]) + ": adjusted R2 of y (mean +/- sd)";
  chart.x_label = xlabels[k];
  chart.y_label = "adjusted R2";
  chart.log_x = f == Figure::kFig2;
  std::map<double, svg::Series> by_noise;
  for (const auto& c : outcomes) {
    auto& s = by_noise[c.config.sigma_noise];
    s.label = "sigma_noise = " + format_double(c.config.sigma_noise);
    s.x.push_back(sweep_value(f, c.config));
    s.y.push_back(c.observed_mean_r2);
    s.err.push_back(c.observed_sd);
  }
  for (auto& [noise, s] : by_noise) chart.series.push_back(std::move(s));
  return svg::render(chart);
}

inline std::string scatter_svg(const std::string& title, const std::vector<double>& observed,
                               const std::vector<double>& bootstrap) {
  svg::Chart chart;
  chart.title = title;
  chart.x_label = "observed relative error";
  chart.y_label = "bootstrap relative error";
  chart.log_x = chart.log_y = true;
  chart.diagonal = true;
  svg::Series s;
  s.label = "scenario cells";
  s.lines = false;
  s.x = observed;
  s.y = bootstrap;
  chart.series.push_back(std::move(s));
  return svg::render(chart);
}

inline FigureRun reproduce_figure(const ReproduceOptions& o) {
  FigureRun run;
  run.figure = o.figure;
  const ScenarioConfig base = figure_base_config(o);
  const ExperimentOptions eo{o.threads, o.statistic};
  const auto& noises = default_noise_levels();
  switch (o.figure) {
    case Figure::kFig2: {
      run.outcomes = sweep_sample_size(base, default_sample_sizes(), noises, eo);
      run.checks.push_back(make_check("spearman(relative error, n) at sigma_noise=0.01",
                                      sweep_trend(o.figure, run.outcomes, 0.01), "<=", kTrendRho));
      run.checks.push_back(make_check(
          "relative error at n=1000: sigma_noise 0.1 minus 0.01",
          find_cell(run.outcomes, o.figure, 0.1, 1000).observed_relative_error -
              find_cell(run.outcomes, o.figure, 0.01, 1000).observed_relative_error,
          ">", 0.0));
      break;
    }
    case Figure::kFig3: {
      run.outcomes = sweep_sampling_range(base, default_y_max_values(), noises, eo);
      run.checks.push_back(make_check("spearman(relative error, y_max) at sigma_noise=0.01",
                                      sweep_trend(o.figure, run.outcomes, 0.01), "<=", kTrendRho));
      run.checks.push_back(
          make_check("mean adjusted R2: y_max=0.1 minus y_max=1.0 at sigma_noise=0.01",
                     find_cell(run.outcomes, o.figure, 0.01, 0.1).observed_mean_r2 -
                         find_cell(run.outcomes, o.figure, 0.01, 1.0).observed_mean_r2,
                     "<", 0.0));
      break;
    }
    case Figure::kFig4: {
      run.outcomes = sweep_optimum_distance(base, default_optimum_values(), noises, eo);
      run.checks.push_back(make_check("spearman(relative error, y*_2) at sigma_noise=0.01",
                                      sweep_trend(o.figure, run.outcomes, 0.01), "<=", kTrendRho));
      run.checks.push_back(make_check("spearman(mean adjusted R2, y*_2) at sigma_noise=0.01",
                                      sweep_trend(o.figure, run.outcomes, 0.01, true), ">=", 0.9));
      break;
    }
    case Figure::kFig5: {
      run.outcomes = bootstrap_validation(figure5_cells(base), kValidationTables, eo);
      std::vector<double> obs, boot;
      for (const auto& c : run.outcomes) {
        obs.push_back(c.observed_relative_error);
        boot.push_back(*c.bootstrap_relative_error);
      }
      const auto band = pairs_in_band(obs, boot, kFig5BandLow, kFig5BandHigh);
      run.correlation = pearson_r(band.observed, band.bootstrap);
      run.checks.push_back(make_check("pearson r on observed error in [0.03, 1.0]",
                                      run.correlation->r, ">=", kFig5MinR));
      const auto above = pairs_in_band(obs, boot, std::nextafter(kFig5BandHigh, INFINITY), INFINITY);
      double diff = NAN;
      if (!above.observed.empty()) {
        diff = 0.0;
        for (std::size_t i = 0; i < above.observed.size(); ++i)
          diff += above.bootstrap[i] - above.observed[i];
        diff /= static_cast<double>(above.observed.size());
      }
      run.checks.push_back(
          make_check("mean(bootstrap - observed) on observed error > 1.0", diff, ">", 0.0));
      run.svg = scatter_svg("Bootstrap vs observed relative error (RDA)", obs, boot);
      break;
    }
    case Figure::kFig6: {
      CcaValidationSpec spec;
      spec.seed = o.seed;
      spec.replicates = replicates_for(o.scale);
      run.cca_cells = cca_validation(spec, eo);
      std::vector<double> obs, boot;
      for (const auto& c : run.cca_cells) {
        obs.push_back(c.observed_relative_error);
        boot.push_back(c.bootstrap_relative_error);
      }
      run.correlation = pearson_r(obs, boot);
      run.checks.push_back(make_check("pearson r (all cells)", run.correlation->r, ">=", kFig6MinR));
      run.checks.push_back(make_check("min observed relative error",
                                      *std::min_element(obs.begin(), obs.end()), "<=",
                                      kFig6SpanLow));
      run.checks.push_back(make_check("max observed relative error",
                                      *std::max_element(obs.begin(), obs.end()), ">=",
                                      kFig6SpanHigh));
      run.svg = scatter_svg("Bootstrap vs observed relative error (CCA)", obs, boot);
      run.csv = cca_csv(o, run.cca_cells);
      return run;
    }
  }
  run.csv = outcomes_csv(o, run.outcomes, o.figure == Figure::kFig5);
  if (run.svg.empty()) run.svg = sweep_svg(o.figure, run.outcomes);
  return run;
}

inline std::string checks_text(const FigureRun& run) {
  std::ostringstream os;
  if (run.correlation)
    os << "pearson r = " << run.correlation->r << ", t = " << run.correlation->t
       << ", df = " << run.correlation->df << '\n';
  for (const auto& c : run.checks)
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.value << ' ' << c.relation << ' '
       << c.threshold << '\n';
  return os.str();
}

}  // namespace vpboot
