#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "wocr/components.hpp"
#include "wocr/rng.hpp"
#include "wocr/standardize.hpp"

namespace testutil {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::uint64_t seed) {
  wocr::Rng rng(seed);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.normal();
  return x;
}

inline Eigen::VectorXd random_vector(Eigen::Index size, std::uint64_t seed) {
  wocr::Rng rng(seed);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = rng.normal();
  return v;
}

struct Instance {
  Eigen::MatrixXd xs;
  Eigen::VectorXd yc;
  wocr::OrthoBasis basis;
};

/// Standardized random instance with a linear signal plus noise.
inline Instance random_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  wocr::Rng rng(seed);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rng.normal();
  Eigen::VectorXd beta(p);
  for (Eigen::Index j = 0; j < p; ++j) beta(j) = rng.normal();
  Eigen::VectorXd y = x * beta;
  for (Eigen::Index i = 0; i < n; ++i) y(i) += rng.normal();

  Instance inst;
  auto [xs, yc, std_] = wocr::standardize(x, y);
  inst.xs = std::move(xs);
  inst.yc = std::move(yc);
  inst.basis = wocr::extract_components(inst.xs, inst.yc);
  return inst;
}

/// Ridge fitted values by direct linear solve on the standardized data:
/// Xs (Xs^T Xs + lambda I)^-1 Xs^T yc. Independent of the component path.
inline Eigen::VectorXd ridge_direct_fitted(const Eigen::MatrixXd& xs,
                                           const Eigen::VectorXd& yc, double lambda) {
  const Eigen::Index p = xs.cols();
  const Eigen::MatrixXd gram =
      xs.transpose() * xs + lambda * Eigen::MatrixXd::Identity(p, p);
  return xs * gram.ldlt().solve(xs.transpose() * yc);
}

}  // namespace testutil
