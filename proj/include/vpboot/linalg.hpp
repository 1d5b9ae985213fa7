#pragma once

// Dense least-squares primitives shared by the RDA and CCA paths.

#include "vpboot/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vpboot {

/// Relative singular-value cutoff used for rank decisions and pseudo-inverses.
inline constexpr double kRankTolerance = 1e-10;

/// Subtracts each column's mean. Columns whose entries are all identical
/// become exact zeros, so constant predictors never leak rounding residue
/// into a rank decision.
inline Matrix center_columns(const Matrix& m) {
  if (m.rows() < 1) throw InputError("center_columns: matrix has no rows");
  if (!m.allFinite()) throw InputError("center_columns: non-finite entry");
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    const auto col = m.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      out.col(j).setZero();
    } else {
      out.col(j) = col.array() - col.mean();
    }
  }
  return out;
}

/// Weighted variant: column means use the given weights (normalised).
inline Matrix center_columns(const Matrix& m, const Vector& weights) {
  if (m.rows() < 1) throw InputError("center_columns: matrix has no rows");
  if (weights.size() != m.rows()) throw InputError("center_columns: weight length mismatch");
  if (!m.allFinite()) throw InputError("center_columns: non-finite entry");
  const double total = weights.sum();
  Matrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) {
    const auto col = m.col(j);
    if (col.maxCoeff() == col.minCoeff()) {
      out.col(j).setZero();
    } else {
      out.col(j) = col.array() - col.dot(weights) / total;
    }
  }
  return out;
}

/// Orthonormal basis of the column space of `x`, truncated at
/// kRankTolerance x largest singular value. May have zero columns.
inline Matrix column_space_basis(const Matrix& x) {
  if (x.cols() == 0 || x.rows() == 0) return Matrix(x.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return Matrix(x.rows(), 0);
  const double cutoff = kRankTolerance * s(0);
  Index k = 0;
  while (k < s.size() && s(k) > cutoff) ++k;
  return svd.matrixU().leftCols(k);
}

/// Numerical rank of a (typically column-centred) matrix.
inline Index numerical_rank(const Matrix& m) { return column_space_basis(m).cols(); }

/// Orthogonal projection of every column of `y` onto span(x). With weights,
/// the projection is orthogonal under the inner product <a,b> = sum w_i a_i b_i.
inline Matrix fit_projection(const Matrix& y, const Matrix& x,
                             const std::optional<Vector>& weights = std::nullopt) {
  if (y.rows() != x.rows())
    throw InputError("fit_projection: Y has " + std::to_string(y.rows()) + " rows, X has " +
                     std::to_string(x.rows()));
  if (!weights) {
    const Matrix basis = column_space_basis(x);
    if (basis.cols() == 0) return Matrix::Zero(y.rows(), y.cols());
    return basis * (basis.transpose() * y);
  }
  const Vector& w = *weights;
  if (w.size() != y.rows()) throw InputError("fit_projection: weight length mismatch");
  if (!(w.array() > 0.0).all()) throw InputError("fit_projection: weights must be positive");
  const Vector root = w.array().sqrt();
  const Matrix basis = column_space_basis(root.asDiagonal() * x);
  if (basis.cols() == 0) return Matrix::Zero(y.rows(), y.cols());
  const Matrix yw = root.asDiagonal() * y;
  const Matrix fitted_w = basis * (basis.transpose() * yw);
  return root.cwiseInverse().asDiagonal() * fitted_w;
}

/// Sum of squared entries.
inline double ssq(const Matrix& m) { return m.squaredNorm(); }

/// Concatenates the columns of two row-aligned blocks.
inline Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw InputError("cannot concatenate blocks with " + std::to_string(a.rows()) + " and " +
                     std::to_string(b.rows()) + " rows");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

/// Gathers the given rows of a matrix.
inline Matrix take_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = m.row(rows[k]);
  return out;
}

}  // namespace vpboot
