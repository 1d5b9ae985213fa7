#pragma once

#include "vpboot/errors.hpp"
#include "vpboot/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace vpboot {

/// Sites x species matrix of non-negative abundances with labels.
class CommunityTable {
public:
  CommunityTable() = default;

  CommunityTable(std::vector<std::string> site_ids, std::vector<std::string> species_ids,
                 Matrix values)
      : site_ids_(std::move(site_ids)), species_ids_(std::move(species_ids)),
        values_(std::move(values)) {
    if (static_cast<Index>(site_ids_.size()) != values_.rows())
      throw InputError("community table: " + std::to_string(site_ids_.size()) +
                       " site labels for " + std::to_string(values_.rows()) + " rows");
    if (static_cast<Index>(species_ids_.size()) != values_.cols())
      throw InputError("community table: " + std::to_string(species_ids_.size()) +
                       " species labels for " + std::to_string(values_.cols()) + " columns");
    if (values_.rows() < 2) throw InputError("community table needs at least 2 sites");
    if (values_.cols() < 1) throw InputError("community table needs at least 1 species");
    for (Index j = 0; j < values_.cols(); ++j)
      for (Index i = 0; i < values_.rows(); ++i) {
        const double v = values_(i, j);
        if (!std::isfinite(v) || v < 0.0)
          throw InputError("community table: invalid abundance " + std::to_string(v) +
                           " at site '" + site_ids_[i] + "', species '" + species_ids_[j] +
                           "'");
      }
  }

  /// Builds a table with generated labels s1..sn / sp1..spp.
  static CommunityTable from_values(Matrix values) {
    std::vector<std::string> sites, species;
    for (Index i = 0; i < values.rows(); ++i) sites.push_back("s" + std::to_string(i + 1));
    for (Index j = 0; j < values.cols(); ++j) species.push_back("sp" + std::to_string(j + 1));
    return CommunityTable(std::move(sites), std::move(species), std::move(values));
  }

  const std::vector<std::string>& site_ids() const noexcept { return site_ids_; }
  const std::vector<std::string>& species_ids() const noexcept { return species_ids_; }
  const Matrix& values() const noexcept { return values_; }
  Index n_sites() const noexcept { return values_.rows(); }
  Index n_species() const noexcept { return values_.cols(); }

private:
  std::vector<std::string> site_ids_;
  std::vector<std::string> species_ids_;
  Matrix values_;
};

/// Named sites x variables matrix of finite predictors. A block may have zero
/// columns (an empty predictor set).
class PredictorBlock {
public:
  PredictorBlock() = default;

  PredictorBlock(std::string name, std::vector<std::string> site_ids,
                 std::vector<std::string> variable_ids, Matrix values)
      : name_(std::move(name)), site_ids_(std::move(site_ids)),
        variable_ids_(std::move(variable_ids)), values_(std::move(values)) {
    if (static_cast<Index>(site_ids_.size()) != values_.rows())
      throw InputError("predictor block '" + name_ + "': " + std::to_string(site_ids_.size()) +
                       " site labels for " + std::to_string(values_.rows()) + " rows");
    if (static_cast<Index>(variable_ids_.size()) != values_.cols())
      throw InputError("predictor block '" + name_ + "': " +
                       std::to_string(variable_ids_.size()) + " variable labels for " +
                       std::to_string(values_.cols()) + " columns");
    if (!values_.allFinite())
      throw InputError("predictor block '" + name_ + "' contains non-finite entries");
    rank_ = numerical_rank(center_columns(values_));
  }

  static PredictorBlock from_values(std::string name, Matrix values) {
    std::vector<std::string> sites, vars;
    for (Index i = 0; i < values.rows(); ++i) sites.push_back("s" + std::to_string(i + 1));
    for (Index j = 0; j < values.cols(); ++j) vars.push_back("v" + std::to_string(j + 1));
    return PredictorBlock(std::move(name), std::move(sites), std::move(vars), std::move(values));
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& site_ids() const noexcept { return site_ids_; }
  const std::vector<std::string>& variable_ids() const noexcept { return variable_ids_; }
  const Matrix& values() const noexcept { return values_; }
  Index n_sites() const noexcept { return values_.rows(); }
  Index n_variables() const noexcept { return values_.cols(); }
  /// Rank of the column-centred block.
  Index rank() const noexcept { return rank_; }

private:
  std::string name_;
  std::vector<std::string> site_ids_;
  std::vector<std::string> variable_ids_;
  Matrix values_;
  Index rank_ = 0;
};

/// Column concatenation of two row-aligned blocks; rank is recomputed.
inline PredictorBlock concat(const PredictorBlock& a, const PredictorBlock& b) {
  if (a.site_ids() != b.site_ids())
    throw InputError("blocks '" + a.name() + "' and '" + b.name() + "' are not site-aligned");
  std::vector<std::string> vars = a.variable_ids();
  vars.insert(vars.end(), b.variable_ids().begin(), b.variable_ids().end());
  return PredictorBlock(a.name() + "+" + b.name(), a.site_ids(), std::move(vars),
                        hcat(a.values(), b.values()));
}

}  // namespace vpboot
