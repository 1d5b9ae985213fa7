#pragma once

// Bootstrap across sites: rows are resampled with replacement, the same index
// sequence is applied to the community table and every predictor block, and
// a statistic is re-evaluated on each resample.

#include "vpboot/errors.hpp"
#include "vpboot/linalg.hpp"
#include "vpboot/parallel.hpp"
#include "vpboot/rng.hpp"
#include "vpboot/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vpboot {

struct BootstrapSummary {
  std::string statistic_name;
  Index replicate_count = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// sd / |mean|; non-finite only when mean == 0.
  double relative_uncertainty = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  /// Replicates that were degenerate and redrawn.
  Index redrawn_replicates = 0;
};

/// Empirical quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator).
inline double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double relative_error(double sd, double mean) {
  if (mean == 0.0)
    return sd == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                     : std::numeric_limits<double>::infinity();
  return sd / std::abs(mean);
}

inline BootstrapSummary summarize(std::string name, std::span<const double> values) {
  if (values.empty()) throw InputError("summarize: no replicate values");
  BootstrapSummary s;
  s.statistic_name = std::move(name);
  s.replicate_count = static_cast<Index>(values.size());
  // Sorting first makes the summary independent of replicate order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.mean = mean_of(sorted);
  s.sd = sample_sd(sorted);
  s.relative_uncertainty = relative_error(s.sd, s.mean);
  s.ci95_low = quantile_sorted(sorted, 0.025);
  s.ci95_high = quantile_sorted(sorted, 0.975);
  return s;
}

/// n row indices drawn uniformly with replacement.
inline std::vector<Index> draw_row_indices(Index n, SplitMix64& rng) {
  std::vector<Index> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) r = static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
  return rows;
}

struct ResampledData {
  CommunityTable table;
  std::vector<PredictorBlock> blocks;
  std::vector<Index> source_rows;
};

/// Repeated site labels get a "#k" suffix for their k-th extra copy.
inline std::vector<std::string> resampled_labels(const std::vector<std::string>& labels,
                                                 const std::vector<Index>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  std::unordered_map<Index, int> seen;
  for (Index r : rows) {
    const int k = seen[r]++;
    out.push_back(k == 0 ? labels[r] : labels[r] + "#" + std::to_string(k));
  }
  return out;
}

/// Applies one row-index sequence to the table and every block.
inline ResampledData take_sites(const CommunityTable& table,
                                std::span<const PredictorBlock> blocks,
                                const std::vector<Index>& rows) {
  const auto sites = resampled_labels(table.site_ids(), rows);
  ResampledData out{CommunityTable(sites, table.species_ids(), take_rows(table.values(), rows)),
                    {},
                    rows};
  out.blocks.reserve(blocks.size());
  for (const auto& b : blocks)
    out.blocks.emplace_back(b.name(), sites, b.variable_ids(), take_rows(b.values(), rows));
  return out;
}

inline ResampledData resample_rows(const CommunityTable& table,
                                   std::span<const PredictorBlock> blocks, SplitMix64& rng) {
  for (const auto& b : blocks)
    if (b.site_ids() != table.site_ids())
      throw InputError("resample_rows: block '" + b.name() + "' is not site-aligned");
  return take_sites(table, blocks, draw_row_indices(table.n_sites(), rng));
}

/// Maximum share of degenerate replicates tolerated before a bootstrap fails.
inline constexpr double kMaxFailureRate = 0.05;

struct BootstrapOptions {
  Index replicates = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Statistic evaluated on a resample given by its source row indices.
using IndexStatistic = std::function<std::vector<double>(const std::vector<Index>&)>;

/// Bootstrap over row indices of an n-row dataset. Replicate r, attempt a
/// draws from the stream (seed, r, a); a replicate whose statistic throws
/// InputError or NumericalError is redrawn. More than 5% failed attempts is
/// an error.
inline std::vector<BootstrapSummary> bootstrap_indices(Index n_rows, const IndexStatistic& statistic,
                                                       const std::vector<std::string>& names,
                                                       const BootstrapOptions& options) {
  const Index m = options.replicates;
  if (m < 2) throw InputError("bootstrap: at least 2 replicates required");
  if (n_rows < 1) throw InputError("bootstrap: no rows to resample");
  const auto budget = static_cast<Index>(std::floor(kMaxFailureRate * static_cast<double>(m)));

  std::vector<std::vector<double>> values(static_cast<std::size_t>(m));
  std::vector<Index> failures(static_cast<std::size_t>(m), 0);
  std::vector<std::string> last_error(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), options.threads, [&](std::size_t r) {
    for (Index attempt = 0; attempt <= budget; ++attempt) {
      SplitMix64 rng(derive_seed(options.seed,
                                 {static_cast<std::uint64_t>(StreamDomain::kBootstrap), r,
                                  static_cast<std::uint64_t>(attempt)}));
      const auto rows = draw_row_indices(n_rows, rng);
      try {
        values[r] = statistic(rows);
        return;
      } catch (const InputError& e) {
        last_error[r] = e.what();
      } catch (const NumericalError& e) {
        last_error[r] = e.what();
      }
      ++failures[r];
    }
  });

  Index failed = 0;
  std::string example;
  for (std::size_t r = 0; r < failures.size(); ++r) {
    failed += failures[r];
    if (example.empty() && !last_error[r].empty()) example = last_error[r];
  }
  if (failed > budget)
    throw NumericalError("bootstrap: " + std::to_string(failed) + " degenerate resamples out of " +
                         std::to_string(m) + " (rate " +
                         std::to_string(static_cast<double>(failed) / static_cast<double>(m)) +
                         ", limit " + std::to_string(kMaxFailureRate) + "): " + example);

  const std::size_t k = values.front().size();
  if (names.size() != k)
    throw InputError("bootstrap: statistic returned " + std::to_string(k) + " values for " +
                     std::to_string(names.size()) + " names");
  std::vector<BootstrapSummary> out;
  std::vector<double> column(static_cast<std::size_t>(m));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (values[r].size() != k) throw InputError("bootstrap: statistic arity changed");
      column[r] = values[r][c];
    }
    out.push_back(summarize(names[c], column));
    out.back().redrawn_replicates = failed;
  }
  return out;
}

/// Statistic on a labelled resample.
using TableStatistic =
    std::function<std::vector<double>(const CommunityTable&, std::span<const PredictorBlock>)>;

inline std::vector<BootstrapSummary> bootstrap_statistic(const CommunityTable& table,
                                                         std::span<const PredictorBlock> blocks,
                                                         const TableStatistic& statistic,
                                                         const std::vector<std::string>& names,
                                                         const BootstrapOptions& options) {
  for (const auto& b : blocks)
    if (b.site_ids() != table.site_ids())
      throw InputError("bootstrap: block '" + b.name() + "' is not site-aligned");
  return bootstrap_indices(
      table.n_sites(),
      [&](const std::vector<Index>& rows) {
        const ResampledData d = take_sites(table, blocks, rows);
        return statistic(d.table, d.blocks);
      },
      names, options);
}

}  // namespace vpboot
