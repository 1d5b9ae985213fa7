// Compares the observed spread of the y share over fresh tables with the
// spread a single table's bootstrap predicts.

#include "vpboot.hpp"

#include <cstdio>

int main() {
  vpboot::ScenarioConfig config;
  config.seed = 7;
  config.n_sites = 50;
  config.sigma_noise = 0.1;
  config.niches[1].y_opt = 0.3;

  const auto outcome = vpboot::bootstrap_validation({{config, 0}}, 10).front();
  std::printf("observed:  mean %.4f  sd %.4f  relative error %.4f\n", outcome.observed_mean_r2,
              outcome.observed_sd, outcome.observed_relative_error);
  std::printf("bootstrap: relative error %.4f (mean of %zu tables)\n",
              *outcome.bootstrap_relative_error, outcome.bootstrap_table_errors.size());
}
