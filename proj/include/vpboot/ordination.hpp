#pragma once

#include "vpboot/errors.hpp"
#include "vpboot/linalg.hpp"
#include "vpboot/tables.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vpboot {

/// Unadjusted RDA fit of a response table on a predictor matrix.
struct LinearFit {
  double r2 = 0.0;
  Index rank = 0;
};

/// Fraction of the centred response sum of squares captured by the least-squares
/// fit on the centred predictors. A constant response table yields 0.
inline LinearFit rda_fit(const Matrix& y, const Matrix& x) {
  if (y.rows() != x.rows())
    throw InputError("rda_r2: response has " + std::to_string(y.rows()) +
                     " sites, predictors have " + std::to_string(x.rows()));
  if (y.rows() < 3) throw InputError("rda_r2: at least 3 sites required");
  const Matrix yc = center_columns(y);
  const Matrix xc = center_columns(x);
  const Matrix basis = column_space_basis(xc);
  const double total = ssq(yc);
  if (total == 0.0 || basis.cols() == 0) return {0.0, basis.cols()};
  const double fitted = (basis.transpose() * yc).squaredNorm();
  return {fitted / total, basis.cols()};
}

inline double rda_r2(const Matrix& y, const Matrix& x) { return rda_fit(y, x).r2; }

inline double rda_r2(const CommunityTable& y, const PredictorBlock& x) {
  if (y.site_ids() != x.site_ids())
    throw InputError("rda_r2: predictor block '" + x.name() + "' is not site-aligned");
  return rda_r2(y.values(), x.values());
}

/// Ezekiel adjustment 1 - (1 - r2)(n - 1)/(n - m - 1); `rank` is the predictor rank.
inline double adjusted_r2(double r2, Index n_sites, Index rank) {
  const Index df = n_sites - rank - 1;
  if (df < 1)
    throw NumericalError("insufficient residual degrees of freedom (n = " +
                         std::to_string(n_sites) + ", rank = " + std::to_string(rank) + ")");
  if (rank == 0) return r2;
  return 1.0 - (1.0 - r2) * static_cast<double>(n_sites - 1) / static_cast<double>(df);
}

inline double adjusted_rda_r2(const Matrix& y, const Matrix& x) {
  const LinearFit fit = rda_fit(y, x);
  return adjusted_r2(fit.r2, y.rows(), fit.rank);
}

/// Two-block variance partition. `r2_*` hold adjusted R² under RDA or raw
/// inertia proportions under CCA. Fractions may be negative.
struct PartitionResult {
  double frac_pure_x = 0.0;
  double frac_shared = 0.0;
  double frac_pure_w = 0.0;
  double frac_residual = 1.0;
  double r2_x = 0.0;
  double r2_w = 0.0;
  double r2_xw = 0.0;
};

/// Inclusion-exclusion of the three fitted values [a+b], [b+c], [a+b+c].
inline PartitionResult partition_from_fits(double r2_x, double r2_w, double r2_xw) {
  PartitionResult p;
  p.r2_x = r2_x;
  p.r2_w = r2_w;
  p.r2_xw = r2_xw;
  p.frac_pure_x = r2_xw - r2_w;
  p.frac_pure_w = r2_xw - r2_x;
  p.frac_shared = r2_x + r2_w - r2_xw;
  p.frac_residual = 1.0 - r2_xw;
  return p;
}

namespace detail {

inline double adjusted_for_block(const Matrix& y, const Matrix& x, const std::string& name) {
  try {
    return adjusted_rda_r2(y, x);
  } catch (const NumericalError& e) {
    throw NumericalError("block '" + name + "': " + e.what());
  }
}

}  // namespace detail

/// RDA variance partition with adjusted R² fractions.
inline PartitionResult varpart_two(const Matrix& y, const Matrix& x, const Matrix& w,
                                   const std::string& x_name = "X",
                                   const std::string& w_name = "W") {
  if (x.rows() != y.rows() || w.rows() != y.rows())
    throw InputError("varpart_two: response and predictor blocks are not row-aligned");
  const double ab = detail::adjusted_for_block(y, x, x_name);
  const double bc = detail::adjusted_for_block(y, w, w_name);
  const double abc = detail::adjusted_for_block(y, hcat(x, w), x_name + "+" + w_name);
  return partition_from_fits(ab, bc, abc);
}

inline PartitionResult varpart_two(const CommunityTable& y, const PredictorBlock& x,
                                   const PredictorBlock& w) {
  if (y.site_ids() != x.site_ids() || y.site_ids() != w.site_ids())
    throw InputError("varpart_two: blocks are not site-aligned with the community table");
  return varpart_two(y.values(), x.values(), w.values(), x.name(), w.name());
}

/// Chi-square standardised residuals of a contingency-style table.
struct ChiSquareDecomposition {
  Matrix residuals;    // (P_ij - r_i c_j) / sqrt(r_i c_j)
  Vector row_weights;  // r_i
  Vector col_weights;  // c_j
  double total_inertia = 0.0;
};

inline ChiSquareDecomposition chi_square_transform(const Matrix& y) {
  if (!y.allFinite() || (y.array() < 0.0).any())
    throw InputError("chi_square_transform: entries must be finite and non-negative");
  const double grand = y.sum();
  if (!(grand > 0.0)) throw InputError("chi_square_transform: grand total must be positive");
  const Vector row_sums = y.rowwise().sum();
  const Vector col_sums = y.colwise().sum().transpose();
  std::string empty_rows, empty_cols;
  for (Index i = 0; i < row_sums.size(); ++i)
    if (!(row_sums(i) > 0.0)) empty_rows += (empty_rows.empty() ? "" : ",") + std::to_string(i);
  for (Index j = 0; j < col_sums.size(); ++j)
    if (!(col_sums(j) > 0.0)) empty_cols += (empty_cols.empty() ? "" : ",") + std::to_string(j);
  if (!empty_rows.empty() || !empty_cols.empty())
    throw InputError("chi_square_transform: empty rows [" + empty_rows + "] columns [" +
                     empty_cols + "]");

  ChiSquareDecomposition d;
  d.row_weights = row_sums / grand;
  d.col_weights = col_sums / grand;
  const Vector sr = d.row_weights.array().sqrt();
  const Vector sc = d.col_weights.array().sqrt();
  d.residuals.resize(y.rows(), y.cols());
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i) {
      const double expected = d.row_weights(i) * d.col_weights(j);
      d.residuals(i, j) = (y(i, j) / grand - expected) / (sr(i) * sc(j));
    }
  d.total_inertia = d.residuals.squaredNorm();
  return d;
}

struct CcaFit {
  double total_inertia = 0.0;
  double constrained_inertia = 0.0;
  double proportion = 0.0;
  Index rank = 0;
};

/// Inertia of the chi-square residuals captured by the row-weighted,
/// weighted-centred predictors.
inline CcaFit cca_explained(const ChiSquareDecomposition& chi, const Matrix& x) {
  if (x.rows() != chi.residuals.rows())
    throw InputError("cca_explained: predictors have " + std::to_string(x.rows()) +
                     " sites, table has " + std::to_string(chi.residuals.rows()));
  CcaFit fit;
  fit.total_inertia = chi.total_inertia;
  const Matrix xc = center_columns(x, chi.row_weights);
  const Vector root = chi.row_weights.array().sqrt();
  const Matrix basis = column_space_basis(root.asDiagonal() * xc);
  fit.rank = basis.cols();
  if (fit.rank == 0 || chi.total_inertia == 0.0) return fit;
  fit.constrained_inertia = (basis.transpose() * chi.residuals).squaredNorm();
  fit.proportion = fit.constrained_inertia / fit.total_inertia;
  return fit;
}

inline CcaFit cca_explained(const Matrix& y, const Matrix& x) {
  return cca_explained(chi_square_transform(y), x);
}

/// CCA variance partition on raw inertia proportions.
inline PartitionResult varpart_two_cca(const Matrix& y, const Matrix& x, const Matrix& w) {
  if (x.rows() != y.rows() || w.rows() != y.rows())
    throw InputError("varpart_two_cca: response and predictor blocks are not row-aligned");
  const ChiSquareDecomposition chi = chi_square_transform(y);
  return partition_from_fits(cca_explained(chi, x).proportion, cca_explained(chi, w).proportion,
                             cca_explained(chi, hcat(x, w)).proportion);
}

/// ln(1 + y) elementwise.
inline Matrix log1p_transform(const Matrix& y) {
  if ((y.array() < 0.0).any()) {
    for (Index j = 0; j < y.cols(); ++j)
      for (Index i = 0; i < y.rows(); ++i)
        if (y(i, j) < 0.0)
          throw InputError("log1p_transform: negative entry at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
  }
  return y.unaryExpr([](double v) { return std::log1p(v); });
}

/// Drops species columns that sum to zero.
inline Matrix drop_empty_columns(const Matrix& y) {
  std::vector<Index> keep;
  for (Index j = 0; j < y.cols(); ++j)
    if (y.col(j).sum() > 0.0) keep.push_back(j);
  if (static_cast<Index>(keep.size()) == y.cols()) return y;
  Matrix out(y.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Index>(k)) = y.col(keep[k]);
  return out;
}

}  // namespace vpboot
