#pragma once

// Monte Carlo harness: replicated scenarios, one-factor sweeps, and the
// bootstrap-versus-observed error validations for the RDA and CCA settings.

#include "vpboot/errors.hpp"
#include "vpboot/ordination.hpp"
#include "vpboot/parallel.hpp"
#include "vpboot/resample.hpp"
#include "vpboot/rng.hpp"
#include "vpboot/stats.hpp"
#include "vpboot/synth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vpboot {

/// How the explanatory share of the y factor is measured.
enum class YStatistic {
  /// adjR²(Y ~ x + y) - adjR²(Y ~ x)
  kSemipartial,
  /// adjR²(Y ~ y)
  kMarginal,
};

inline double y_share(const Matrix& abundances, const Matrix& env, YStatistic kind) {
  if (kind == YStatistic::kMarginal) return adjusted_rda_r2(abundances, env.col(1));
  return adjusted_rda_r2(abundances, env) - adjusted_rda_r2(abundances, env.col(0));
}

struct ExperimentOptions {
  unsigned threads = 0;
  YStatistic statistic = YStatistic::kSemipartial;
};

struct ScenarioOutcome {
  ScenarioConfig config;
  std::uint64_t scenario_index = 0;
  std::vector<double> replicate_values;
  double observed_mean_r2 = 0.0;
  double observed_sd = 0.0;
  double observed_relative_error = 0.0;
  std::optional<double> bootstrap_relative_error;
  std::vector<double> bootstrap_table_errors;
};

/// Simulates `config.replicates` independent tables and summarises the y share.
inline ScenarioOutcome run_replicated_scenario(const ScenarioConfig& config,
                                               std::uint64_t scenario_index = 0,
                                               const ExperimentOptions& options = {}) {
  config.validate();
  ScenarioOutcome out;
  out.config = config;
  out.scenario_index = scenario_index;
  out.replicate_values.resize(static_cast<std::size_t>(config.replicates));
  parallel_for(out.replicate_values.size(), options.threads, [&](std::size_t r) {
    const SyntheticMatrices d = generate_matrices(config, scenario_index, r);
    try {
      out.replicate_values[r] = y_share(d.abundances, d.env, options.statistic);
    } catch (const NumericalError& e) {
      throw NumericalError("replicate " + std::to_string(r) + ": " + e.what());
    }
  });
  out.observed_mean_r2 = mean_of(out.replicate_values);
  out.observed_sd = sample_sd(out.replicate_values);
  out.observed_relative_error = relative_error(out.observed_sd, out.observed_mean_r2);
  return out;
}

/// Noise levels used by every sweep.
inline const std::vector<double>& default_noise_levels() {
  static const std::vector<double> levels{0.01, 0.05, 0.1};
  return levels;
}

inline std::vector<Index> default_sample_sizes() { return {25, 50, 100, 250, 500, 1000}; }

/// 0.1, 0.2, ..., 1.0
inline std::vector<double> default_y_max_values() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
  return v;
}

/// 0.0, 0.1, ..., 1.0
inline std::vector<double> default_optimum_values() {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(i / 10.0);
  return v;
}

/// Scenario-index offsets keep cells of different sweeps on disjoint streams.
inline constexpr std::uint64_t kSampleSizeSweep = 1'000'000;
inline constexpr std::uint64_t kRangeSweep = 2'000'000;
inline constexpr std::uint64_t kOptimumSweep = 3'000'000;

/// One cell of a sweep: a configuration and its stream index.
struct SweepCell {
  ScenarioConfig config;
  std::uint64_t scenario_index = 0;
};

namespace detail {

template <typename Value, typename Apply>
std::vector<SweepCell> sweep_cells(const ScenarioConfig& base, const std::vector<Value>& values,
                                   const std::vector<double>& noises, std::uint64_t offset,
                                   Apply apply) {
  std::vector<SweepCell> cells;
  for (std::size_t k = 0; k < noises.size(); ++k)
    for (std::size_t v = 0; v < values.size(); ++v) {
      SweepCell c{base, offset + k * values.size() + v};
      c.config.sigma_noise = noises[k];
      apply(c.config, values[v]);
      cells.push_back(std::move(c));
    }
  return cells;
}

}  // namespace detail

inline std::vector<SweepCell> sample_size_cells(const ScenarioConfig& base,
                                                const std::vector<Index>& sizes,
                                                const std::vector<double>& noises,
                                                std::uint64_t offset = kSampleSizeSweep) {
  return detail::sweep_cells(base, sizes, noises, offset,
                             [](ScenarioConfig& c, Index n) { c.n_sites = n; });
}

inline std::vector<SweepCell> sampling_range_cells(const ScenarioConfig& base,
                                                   const std::vector<double>& y_max_values,
                                                   const std::vector<double>& noises,
                                                   std::uint64_t offset = kRangeSweep) {
  return detail::sweep_cells(base, y_max_values, noises, offset,
                             [](ScenarioConfig& c, double v) { c.y_max = v; });
}

/// Sweeps y*_2 with y*_1 held at zero.
inline std::vector<SweepCell> optimum_distance_cells(const ScenarioConfig& base,
                                                     const std::vector<double>& y2_values,
                                                     const std::vector<double>& noises,
                                                     std::uint64_t offset = kOptimumSweep) {
  return detail::sweep_cells(base, y2_values, noises, offset, [](ScenarioConfig& c, double v) {
    if (c.niches.size() < 2) throw InputError("optimum sweep needs two species");
    c.niches[0].y_opt = 0.0;
    c.niches[1].y_opt = v;
  });
}

inline std::vector<ScenarioOutcome> run_cells(const std::vector<SweepCell>& cells,
                                              const ExperimentOptions& options = {}) {
  std::vector<ScenarioOutcome> out;
  out.reserve(cells.size());
  for (const auto& c : cells)
    out.push_back(run_replicated_scenario(c.config, c.scenario_index, options));
  return out;
}

/// Outcomes ordered by noise level, then by sample size.
inline std::vector<ScenarioOutcome> sweep_sample_size(
    const ScenarioConfig& base, const std::vector<Index>& sizes = default_sample_sizes(),
    const std::vector<double>& noises = default_noise_levels(),
    const ExperimentOptions& options = {}) {
  return run_cells(sample_size_cells(base, sizes, noises), options);
}

inline std::vector<ScenarioOutcome> sweep_sampling_range(
    const ScenarioConfig& base, const std::vector<double>& y_max_values = default_y_max_values(),
    const std::vector<double>& noises = default_noise_levels(),
    const ExperimentOptions& options = {}) {
  return run_cells(sampling_range_cells(base, y_max_values, noises), options);
}

inline std::vector<ScenarioOutcome> sweep_optimum_distance(
    const ScenarioConfig& base, const std::vector<double>& y2_values = default_optimum_values(),
    const std::vector<double>& noises = default_noise_levels(),
    const ExperimentOptions& options = {}) {
  return run_cells(optimum_distance_cells(base, y2_values, noises), options);
}

/// Relative error of the y share estimated by bootstrapping one table.
inline double bootstrap_table_error(const SyntheticMatrices& data, Index replicates,
                                    std::uint64_t seed, const ExperimentOptions& options) {
  const auto summary = bootstrap_indices(
      data.abundances.rows(),
      [&](const std::vector<Index>& rows) {
        return std::vector<double>{
            y_share(take_rows(data.abundances, rows), take_rows(data.env, rows), options.statistic)};
      },
      {"y_share"}, {replicates, seed, options.threads});
  return summary.front().relative_uncertainty;
}

inline constexpr Index kValidationTables = 10;

/// For every cell: the observed relative error over fresh replicate tables,
/// paired with the mean bootstrap relative error over `tables` extra tables.
inline std::vector<ScenarioOutcome> bootstrap_validation(const std::vector<SweepCell>& cells,
                                                         Index tables = kValidationTables,
                                                         const ExperimentOptions& options = {}) {
  if (tables < 1) throw InputError("bootstrap_validation: at least one table required");
  std::vector<ScenarioOutcome> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) {
    ScenarioOutcome o = run_replicated_scenario(cell.config, cell.scenario_index, options);
    for (Index t = 0; t < tables; ++t) {
      const auto tt = static_cast<std::uint64_t>(t);
      const SyntheticMatrices d =
          generate_matrices(cell.config, cell.scenario_index, tt, StreamDomain::kValidation);
      const std::uint64_t seed = derive_seed(
          cell.config.seed,
          {static_cast<std::uint64_t>(StreamDomain::kValidation), cell.scenario_index, tt});
      o.bootstrap_table_errors.push_back(
          bootstrap_table_error(d, cell.config.replicates, seed, options));
    }
    o.bootstrap_relative_error = mean_of(o.bootstrap_table_errors);
    out.push_back(std::move(o));
  }
  return out;
}

/// The CCA statistic: explained inertia proportion of log1p-transformed
/// abundances, with all-zero species dropped.
inline double cca_proportion(const Matrix& abundances, const Matrix& env) {
  return cca_explained(log1p_transform(drop_empty_columns(abundances)), env).proportion;
}

struct CcaValidationCell {
  Index n_sites = 0;
  double sigma_noise = 0.0;
  Index repeat = 0;
  std::uint64_t scenario_index = 0;
  ScenarioConfig config;
  double observed_mean = 0.0;
  double observed_sd = 0.0;
  double observed_relative_error = 0.0;
  double bootstrap_relative_error = 0.0;
};

struct CcaValidationSpec {
  std::vector<Index> sizes{20, 40, 60, 80, 100};
  std::vector<double> noises{0.0, 0.01, 0.05, 0.1};
  Index repeats = 5;
  std::size_t n_species = 5;
  Index replicates = 200;
  Index tables = kValidationTables;
  std::uint64_t seed = 0;
};

inline CcaValidationCell run_cca_cell(const CcaValidationSpec& spec, Index n, double noise,
                                      Index repeat, std::uint64_t scenario_index,
                                      const ExperimentOptions& options) {
  CcaValidationCell cell;
  cell.n_sites = n;
  cell.sigma_noise = noise;
  cell.repeat = repeat;
  cell.scenario_index = scenario_index;
  cell.config = complex_config(n, spec.n_species, noise, spec.seed, scenario_index);
  cell.config.replicates = spec.replicates;

  std::vector<double> values(static_cast<std::size_t>(spec.replicates));
  parallel_for(values.size(), options.threads, [&](std::size_t r) {
    const SyntheticMatrices d = generate_matrices(cell.config, scenario_index, r);
    values[r] = cca_proportion(d.abundances, d.env);
  });
  cell.observed_mean = mean_of(values);
  cell.observed_sd = sample_sd(values);
  cell.observed_relative_error = relative_error(cell.observed_sd, cell.observed_mean);

  std::vector<double> errors;
  for (Index t = 0; t < spec.tables; ++t) {
    const auto tt = static_cast<std::uint64_t>(t);
    const SyntheticMatrices d =
        generate_matrices(cell.config, scenario_index, tt, StreamDomain::kValidation);
    const std::uint64_t seed = derive_seed(
        spec.seed, {static_cast<std::uint64_t>(StreamDomain::kValidation), scenario_index, tt});
    const auto summary = bootstrap_indices(
        n,
        [&](const std::vector<Index>& rows) {
          return std::vector<double>{
              cca_proportion(take_rows(d.abundances, rows), take_rows(d.env, rows))};
        },
        {"cca_proportion"}, {spec.replicates, seed, options.threads});
    errors.push_back(summary.front().relative_uncertainty);
  }
  cell.bootstrap_relative_error = mean_of(errors);
  return cell;
}

/// Sizes x noise levels x repeats, each repeat with its own random optima.
inline std::vector<CcaValidationCell> cca_validation(const CcaValidationSpec& spec,
                                                     const ExperimentOptions& options = {}) {
  std::vector<CcaValidationCell> out;
  std::uint64_t index = 0;
  for (Index n : spec.sizes)
    for (double noise : spec.noises)
      for (Index rep = 0; rep < spec.repeats; ++rep)
        out.push_back(run_cca_cell(spec, n, noise, rep, index++, options));
  return out;
}

/// Pairs restricted to observed error in [lo, hi].
struct ErrorPairs {
  std::vector<double> observed;
  std::vector<double> bootstrap;
};

inline ErrorPairs pairs_in_band(const std::vector<double>& observed,
                                const std::vector<double>& bootstrap, double lo, double hi) {
  ErrorPairs p;
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (observed[i] >= lo && observed[i] <= hi) {
      p.observed.push_back(observed[i]);
      p.bootstrap.push_back(bootstrap[i]);
    }
  return p;
}

}  // namespace vpboot
