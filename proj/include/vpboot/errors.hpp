#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace vpboot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Rejected input: malformed files, violated preconditions, misaligned tables.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical or degeneracy failure (e.g. no residual degrees of freedom).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace vpboot
