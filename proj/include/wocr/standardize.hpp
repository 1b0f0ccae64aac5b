#pragma once

#include <Eigen/Dense>
#include <tuple>

#include "wocr/errors.hpp"

namespace wocr {

/// Column-wise location/scale transform fitted on a training design, plus the
/// response mean. Kept with every fit so that coefficients and predictions can
/// be mapped back to the original units.
struct Standardizer {
  Eigen::VectorXd column_means;   // length p
  Eigen::VectorXd column_scales;  // length p, sample sd with divisor n-1
  double response_mean = 0.0;

  /// (X - mean) / scale, column-wise.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != column_means.size())
      throw DimensionMismatch("matrix has " + std::to_string(x.cols()) +
                              " columns, standardizer expects " +
                              std::to_string(column_means.size()));
    return (x.rowwise() - column_means.transpose()).array().rowwise() /
           column_scales.transpose().array();
  }

  /// Inverse of apply().
  Eigen::MatrixXd invert(const Eigen::MatrixXd& xs) const {
    if (xs.cols() != column_means.size())
      throw DimensionMismatch("matrix/standardizer column mismatch");
    return (xs.array().rowwise() * column_scales.transpose().array()).rowwise() +
           column_means.transpose().array();
  }
};

/// Centers y and standardizes each column of X to mean 0, sample sd 1
/// (divisor n-1). Constant columns are rejected.
inline std::tuple<Eigen::MatrixXd, Eigen::VectorXd, Standardizer> standardize(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const auto n = x.rows();
  const auto p = x.cols();
  if (y.size() != n)
    throw DimensionMismatch("length of y (" + std::to_string(y.size()) +
                            ") does not match rows of X (" + std::to_string(n) + ")");
  if (n < 2) throw DimensionMismatch("need at least 2 rows to standardize");

  Standardizer s;
  s.column_means = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - s.column_means.transpose();
  s.column_scales =
      (centered.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt();
  for (Eigen::Index j = 0; j < p; ++j)
    if (s.column_scales(j) <= 0.0) throw ConstantColumn(static_cast<int>(j));

  Eigen::MatrixXd xs =
      centered.array().rowwise() / s.column_scales.transpose().array();
  s.response_mean = y.mean();
  Eigen::VectorXd yc = y.array() - s.response_mean;
  return {std::move(xs), std::move(yc), std::move(s)};
}

}  // namespace wocr
