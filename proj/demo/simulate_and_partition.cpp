// Simulates one two-species table and prints its RDA and CCA partitions of
// the x and y factors.

#include "vpboot.hpp"

#include <cstdio>

int main() {
  vpboot::ScenarioConfig config;
  config.seed = 2024;
  config.sigma_noise = 0.05;
  const auto data = vpboot::generate_dataset(config);
  const auto& env = data.env.values();

  const auto rda = vpboot::varpart_two(data.table.values(), env.col(0), env.col(1), "x", "y");
  const auto cca = vpboot::varpart_two_cca(vpboot::log1p_transform(data.table.values()), env.col(0),
                                           env.col(1));
  std::printf("%-4s %10s %10s %10s %10s\n", "", "pure x", "shared", "pure y", "residual");
  for (auto [name, p] : {std::pair{"rda", rda}, std::pair{"cca", cca}})
    std::printf("%-4s %10.4f %10.4f %10.4f %10.4f\n", name, p.frac_pure_x, p.frac_shared,
                p.frac_pure_w, p.frac_residual);
}
