#pragma once

// Gaussian-niche community simulator. Each species responds to the two site
// factors x and y with a bell-shaped curve; noisy responses are multiplied,
// normalised across species and scaled by the carrying capacity.

#include "vpboot/errors.hpp"
#include "vpboot/rng.hpp"
#include "vpboot/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace vpboot {

struct SpeciesNiche {
  double x_opt = 0.5;
  double y_opt = 0.0;
};

struct SiteEnvironment {
  double x = 0.0;
  double y = 0.0;
};

/// Full parameterisation of one synthetic scenario.
struct ScenarioConfig {
  Index n_sites = 100;
  std::vector<SpeciesNiche> niches = {{0.5, 0.0}, {0.5, 0.5}};
  double sigma_niche = 0.5;
  double sigma_noise = 0.01;
  double y_max = 1.0;
  std::int64_t carrying_capacity = 10000;
  Index replicates = 200;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_sites < 3) throw InputError("n_sites must be at least 3");
    if (niches.size() < 2) throw InputError("at least 2 species are required");
    for (const auto& n : niches)
      if (!std::isfinite(n.x_opt) || !std::isfinite(n.y_opt))
        throw InputError("species optima must be finite");
    if (!(sigma_niche > 0.0) || !std::isfinite(sigma_niche))
      throw InputError("sigma_niche must be positive");
    if (!(sigma_noise >= 0.0) || !std::isfinite(sigma_noise))
      throw InputError("sigma_noise must be non-negative");
    if (!(y_max > 0.0 && y_max <= 1.0)) throw InputError("y_max must lie in (0, 1]");
    if (carrying_capacity < 1) throw InputError("carrying_capacity must be positive");
    if (replicates < 1) throw InputError("replicates must be positive");
  }
};

/// Normal density with mean `opt` and standard deviation `sigma` at `v`.
inline double gaussian_response(double v, double opt, double sigma) {
  if (!(sigma > 0.0)) throw InputError("gaussian_response: sigma must be positive");
  const double z = (v - opt) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// Product of the two noisy factor responses. Each factor is clamped at zero
/// before multiplication so the result is never negative.
inline double relative_abundance(const SiteEnvironment& site, const SpeciesNiche& niche,
                                 double sigma_niche, double sigma_noise, SplitMix64& rng) {
  double fx = gaussian_response(site.x, niche.x_opt, sigma_niche);
  double fy = gaussian_response(site.y, niche.y_opt, sigma_niche);
  if (sigma_noise > 0.0) {
    fx += sigma_noise * standard_normal(rng);
    fy += sigma_noise * standard_normal(rng);
  }
  return std::max(fx, 0.0) * std::max(fy, 0.0);
}

/// Normalises relative abundances to the carrying capacity, rounding every
/// positive share up. Returns nullopt when every alpha is zero.
inline std::optional<std::vector<std::int64_t>> site_abundances(const std::vector<double>& alphas,
                                                               std::int64_t capacity) {
  double total = 0.0;
  for (double a : alphas) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw InputError("site_abundances: relative abundances must be finite and non-negative");
    total += a;
  }
  if (!(total > 0.0)) return std::nullopt;
  std::vector<std::int64_t> counts(alphas.size(), 0);
  const double k = static_cast<double>(capacity);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (alphas[i] > 0.0) counts[i] = static_cast<std::int64_t>(std::ceil(alphas[i] * k / total));
  return counts;
}

/// Abundance and predictor matrices without labels.
struct SyntheticMatrices {
  Matrix abundances;  // sites x species
  Matrix env;         // sites x 2 (x, y)
};

struct SyntheticDataset {
  CommunityTable table;
  PredictorBlock env;
};

inline constexpr int kMaxSiteRedraws = 100;

/// Simulates one community table. Site `i` draws from the stream keyed by
/// (seed, domain, scenario_index, replicate_index, i).
inline SyntheticMatrices generate_matrices(const ScenarioConfig& config,
                                           std::uint64_t scenario_index = 0,
                                           std::uint64_t replicate_index = 0,
                                           StreamDomain domain = StreamDomain::kObserved) {
  config.validate();
  const Index n = config.n_sites;
  const std::size_t species = config.niches.size();
  SyntheticMatrices out{Matrix(n, static_cast<Index>(species)), Matrix(n, 2)};
  std::vector<double> alphas(species);
  for (Index i = 0; i < n; ++i) {
    SplitMix64 rng(derive_seed(config.seed, {static_cast<std::uint64_t>(domain), scenario_index,
                                             replicate_index, static_cast<std::uint64_t>(i)}));
    SiteEnvironment site;
    site.x = uniform01(rng);
    site.y = config.y_max * uniform01(rng);
    std::optional<std::vector<std::int64_t>> counts;
    for (int attempt = 0; attempt < kMaxSiteRedraws && !counts; ++attempt) {
      for (std::size_t s = 0; s < species; ++s)
        alphas[s] = relative_abundance(site, config.niches[s], config.sigma_niche,
                                       config.sigma_noise, rng);
      counts = site_abundances(alphas, config.carrying_capacity);
    }
    if (!counts)
      throw NumericalError("site " + std::to_string(i) + ": all species absent after " +
                           std::to_string(kMaxSiteRedraws) + " noise redraws");
    for (std::size_t s = 0; s < species; ++s)
      out.abundances(i, static_cast<Index>(s)) = static_cast<double>((*counts)[s]);
    out.env(i, 0) = site.x;
    out.env(i, 1) = site.y;
  }
  return out;
}

/// Labelled variant of generate_matrices; the predictor block is named "env"
/// with columns x and y.
inline SyntheticDataset generate_dataset(const ScenarioConfig& config,
                                         std::uint64_t scenario_index = 0,
                                         std::uint64_t replicate_index = 0,
                                         StreamDomain domain = StreamDomain::kObserved) {
  SyntheticMatrices m = generate_matrices(config, scenario_index, replicate_index, domain);
  std::vector<std::string> sites, species;
  for (Index i = 0; i < m.abundances.rows(); ++i) sites.push_back("site" + std::to_string(i + 1));
  for (Index j = 0; j < m.abundances.cols(); ++j)
    species.push_back("species" + std::to_string(j + 1));
  CommunityTable table(sites, std::move(species), std::move(m.abundances));
  PredictorBlock env("env", std::move(sites), {"x", "y"}, std::move(m.env));
  return {std::move(table), std::move(env)};
}

/// Niche optima drawn uniformly from [0, 1]^2.
inline std::vector<SpeciesNiche> draw_random_niches(std::size_t n_species, std::uint64_t seed,
                                                    std::uint64_t index = 0) {
  SplitMix64 rng(derive_seed(seed, {static_cast<std::uint64_t>(StreamDomain::kNiches), index}));
  std::vector<SpeciesNiche> niches(n_species);
  for (auto& n : niches) {
    n.x_opt = uniform01(rng);
    n.y_opt = uniform01(rng);
  }
  return niches;
}

/// Configuration of the multi-species validation model: random optima and
/// both factors sampled on [0, 1].
inline ScenarioConfig complex_config(Index n_sites, std::size_t n_species, double sigma_noise,
                                     std::uint64_t seed, std::uint64_t niche_index = 0) {
  ScenarioConfig c;
  c.n_sites = n_sites;
  c.niches = draw_random_niches(n_species, seed, niche_index);
  c.sigma_noise = sigma_noise;
  c.y_max = 1.0;
  c.seed = seed;
  return c;
}

inline SyntheticDataset generate_complex_dataset(Index n_sites, std::size_t n_species,
                                                 double sigma_noise, std::uint64_t seed) {
  if (n_sites < 5) throw InputError("generate_complex_dataset: n_sites must be at least 5");
  return generate_dataset(complex_config(n_sites, n_species, sigma_noise, seed));
}

}  // namespace vpboot
