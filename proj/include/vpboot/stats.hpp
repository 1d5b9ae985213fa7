#pragma once

#include "vpboot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace vpboot {

struct PearsonResult {
  double r = 0.0;
  double t = 0.0;
  long df = 0;
};

/// Product-moment correlation with its t statistic on n - 2 degrees of freedom.
inline PearsonResult pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("pearson_r: length mismatch");
  if (xs.size() < 3) throw InputError("pearson_r: at least 3 pairs required");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericalError("pearson_r: zero variance");
  PearsonResult out;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  out.df = static_cast<long>(xs.size()) - 2;
  const double denom = 1.0 - out.r * out.r;
  out.t = denom > 0.0 ? out.r * std::sqrt(static_cast<double>(out.df) / denom)
                      : std::copysign(INFINITY, out.r);
  return out;
}

/// Ranks starting at 1; ties share their average rank.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman_rho(std::span<const double> xs, std::span<const double> ys) {
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson_r(rx, ry).r;
}

}  // namespace vpboot
