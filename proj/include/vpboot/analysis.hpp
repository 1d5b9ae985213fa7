#pragma once

// Two-block variance partition of a real dataset with bootstrap uncertainty
// on every reported fraction.

#include "vpboot/errors.hpp"
#include "vpboot/io.hpp"
#include "vpboot/ordination.hpp"
#include "vpboot/resample.hpp"
#include "vpboot/tables.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace vpboot {

enum class Method { kCca, kRda };

inline std::string to_string(Method m) { return m == Method::kCca ? "cca" : "rda"; }

inline Method parse_method(const std::string& s) {
  if (s == "cca") return Method::kCca;
  if (s == "rda") return Method::kRda;
  throw InputError("unknown method '" + s + "' (expected cca or rda)");
}

struct AnalysisOptions {
  std::string dataset_name = "dataset";
  Method method = Method::kCca;
  Index replicates = 1000;
  std::uint64_t seed = 0;
  /// Defaults to true for CCA and false for RDA.
  std::optional<bool> log1p;
  unsigned threads = 0;

  bool use_log1p() const { return log1p.value_or(method == Method::kCca); }
};

/// Three-way rollup: shared variance is folded into the spatial share.
struct Rollup {
  double env_pure = 0.0;
  double spatial_including_shared = 0.0;
  double residual = 1.0;
};

inline Rollup rollup(const PartitionResult& p) {
  Rollup r;
  r.env_pure = p.r2_xw - p.r2_w;
  r.spatial_including_shared = p.r2_xw - r.env_pure;
  r.residual = 1.0 - p.r2_xw;
  return r;
}

inline const std::vector<std::string>& rollup_names() {
  static const std::vector<std::string> names{"env_pure", "spatial_including_shared", "residual"};
  return names;
}

struct AnalysisReport {
  std::string dataset_name;
  Method method = Method::kCca;
  bool log1p = false;
  Index n_sites = 0;
  Index n_species = 0;
  std::string env_name;
  std::string spatial_name;
  Index env_rank = 0;
  Index spatial_rank = 0;
  PartitionResult partition;
  Rollup fractions;
  std::vector<BootstrapSummary> summaries;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  Index replicates = 0;
  std::string config_hash;
};

/// Throws InputError listing every position where the two label lists differ.
inline void require_aligned(const std::vector<std::string>& expected,
                            const std::vector<std::string>& actual, const std::string& what) {
  if (expected == actual) return;
  std::ostringstream os;
  os << what << " is not site-aligned with the community table";
  if (expected.size() != actual.size())
    os << " (" << actual.size() << " sites vs " << expected.size() << ")";
  std::size_t shown = 0;
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n && shown < 10; ++i)
    if (expected[i] != actual[i]) {
      os << (shown == 0 ? ": " : "; ") << "row " << i + 1 << " '" << actual[i] << "' vs '"
         << expected[i] << "'";
      ++shown;
    }
  throw InputError(os.str());
}

/// Partition of one (possibly resampled) dataset under the chosen method.
inline PartitionResult partition_for(Method method, const Matrix& y, const Matrix& env,
                                     const Matrix& spatial) {
  if (method == Method::kRda) return varpart_two(y, env, spatial, "env", "spatial");
  return varpart_two_cca(drop_empty_columns(y), env, spatial);
}

inline std::string analysis_hash(const CommunityTable& table, const PredictorBlock& env,
                                 const PredictorBlock& spatial, const AnalysisOptions& o) {
  std::ostringstream os;
  os << "method=" << to_string(o.method) << ";log1p=" << o.use_log1p()
     << ";replicates=" << o.replicates << ";seed=" << o.seed << '\n';
  write_table_csv(os, table);
  write_table_csv(os, env);
  write_table_csv(os, spatial);
  return hex64(fnv1a64(os.str()));
}

inline AnalysisReport analyze(const CommunityTable& table, const PredictorBlock& env,
                              const PredictorBlock& spatial, const AnalysisOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  require_aligned(table.site_ids(), env.site_ids(), "predictor block '" + env.name() + "'");
  require_aligned(table.site_ids(), spatial.site_ids(), "predictor block '" + spatial.name() + "'");

  AnalysisReport report;
  report.dataset_name = options.dataset_name;
  report.method = options.method;
  report.log1p = options.use_log1p();
  report.n_sites = table.n_sites();
  report.n_species = table.n_species();
  report.env_name = env.name();
  report.spatial_name = spatial.name();
  report.env_rank = env.rank();
  report.spatial_rank = spatial.rank();
  report.seed = options.seed;
  report.replicates = options.replicates;
  report.config_hash = analysis_hash(table, env, spatial, options);

  const Matrix y = report.log1p ? log1p_transform(table.values()) : table.values();
  report.partition = partition_for(options.method, y, env.values(), spatial.values());
  report.fractions = rollup(report.partition);

  const Matrix& x = env.values();
  const Matrix& w = spatial.values();
  report.summaries = bootstrap_indices(
      table.n_sites(),
      [&](const std::vector<Index>& rows) {
        const Rollup r = rollup(
            partition_for(options.method, take_rows(y, rows), take_rows(x, rows), take_rows(w, rows)));
        return std::vector<double>{r.env_pure, r.spatial_including_shared, r.residual};
      },
      rollup_names(), {options.replicates, options.seed, options.threads});

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const BootstrapSummary& s) {
  return {{"statistic_name", s.statistic_name},
          {"replicate_count", s.replicate_count},
          {"mean", finite_or_null(s.mean)},
          {"sd", finite_or_null(s.sd)},
          {"relative_uncertainty", finite_or_null(s.relative_uncertainty)},
          {"ci95_low", finite_or_null(s.ci95_low)},
          {"ci95_high", finite_or_null(s.ci95_high)},
          {"redrawn_replicates", s.redrawn_replicates}};
}

inline nlohmann::json to_json(const PartitionResult& p) {
  return {{"frac_pure_x", p.frac_pure_x}, {"frac_shared", p.frac_shared},
          {"frac_pure_w", p.frac_pure_w}, {"frac_residual", p.frac_residual},
          {"r2_x", p.r2_x},               {"r2_w", p.r2_w},
          {"r2_xw", p.r2_xw}};
}

/// Machine-readable report. Wall-clock time is left out so that repeated runs
/// produce identical bytes; pass include_runtime to add it.
inline nlohmann::json to_json(const AnalysisReport& r, bool include_runtime = false) {
  nlohmann::json j;
  j["dataset_name"] = r.dataset_name;
  j["method"] = to_string(r.method);
  j["log1p"] = r.log1p;
  j["n_sites"] = r.n_sites;
  j["n_species"] = r.n_species;
  j["blocks"] = {{"x", {{"name", r.env_name}, {"rank", r.env_rank}}},
                 {"w", {{"name", r.spatial_name}, {"rank", r.spatial_rank}}}};
  j["partition"] = to_json(r.partition);
  j["fractions"] = {{"env_pure", r.fractions.env_pure},
                    {"spatial_including_shared", r.fractions.spatial_including_shared},
                    {"residual", r.fractions.residual}};
  j["summaries"] = nlohmann::json::array();
  for (const auto& s : r.summaries) j["summaries"].push_back(to_json(s));
  j["seed"] = r.seed;
  j["M"] = r.replicates;
  j["provenance"] = {{"tool", std::string("vpboot ") + kToolVersion},
                     {"seed", r.seed},
                     {"M", r.replicates},
                     {"config_hash", r.config_hash}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

inline std::string percent(double fraction, int digits = 1) {
  if (!std::isfinite(fraction)) return "n/a";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << fraction * 100.0 << '%';
  return os.str();
}

inline std::string to_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << r.dataset_name << " (" << to_string(r.method) << (r.log1p ? ", log1p" : "") << "): "
     << r.n_sites << " sites x " << r.n_species << " species, M = " << r.replicates
     << ", seed = " << r.seed << '\n';
  const double point[] = {r.fractions.env_pure, r.fractions.spatial_including_shared,
                          r.fractions.residual};
  const char* labels[] = {"environment (pure)", "spatial (incl. shared)", "unexplained"};
  for (std::size_t k = 0; k < r.summaries.size() && k < 3; ++k) {
    const auto& s = r.summaries[k];
    os << "  " << labels[k] << ": " << percent(point[k]) << "  bootstrap mean "
       << percent(s.mean) << ", 0.95-CI [" << percent(s.ci95_low) << "; " << percent(s.ci95_high)
       << "], SD " << percent(s.sd, 2) << ", relative uncertainty "
       << percent(s.relative_uncertainty) << '\n';
  }
  if (!r.summaries.empty() && r.summaries.front().redrawn_replicates > 0)
    os << "  redrawn degenerate resamples: " << r.summaries.front().redrawn_replicates << '\n';
  os << "  runtime: " << r.runtime_seconds << " s\n";
  return os.str();
}

/// Second-order trend surface (x, y, x², xy, y²) of centred coordinates.
inline PredictorBlock trend_surface(const PredictorBlock& coords) {
  if (coords.n_variables() != 2)
    throw InputError("trend surface needs exactly 2 coordinate columns, block '" +
                     coords.name() + "' has " + std::to_string(coords.n_variables()));
  const Matrix c = center_columns(coords.values());
  Matrix out(c.rows(), 5);
  out.col(0) = c.col(0);
  out.col(1) = c.col(1);
  out.col(2) = c.col(0).array().square();
  out.col(3) = c.col(0).array() * c.col(1).array();
  out.col(4) = c.col(1).array().square();
  const auto& v = coords.variable_ids();
  return PredictorBlock(coords.name(), coords.site_ids(),
                        {v[0], v[1], v[0] + "^2", v[0] + "*" + v[1], v[1] + "^2"}, std::move(out));
}

}  // namespace vpboot
