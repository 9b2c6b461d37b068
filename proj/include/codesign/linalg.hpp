#pragma once

#include <Eigen/Core>

namespace codesign {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest absolute entry of `a - a^T`, relative to max(1, |a|_max).
double relative_asymmetry(const Matrix& a);

/// Returns (a + a^T) / 2.
Matrix symmetrized(const Matrix& a);

}  // namespace codesign
