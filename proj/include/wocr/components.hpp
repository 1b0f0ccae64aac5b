#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wocr/errors.hpp"

namespace wocr {

/// Thin SVD of a standardized design, X = U diag(d) V^T, truncated to the
/// numerical rank m, together with the component coefficients
/// gamma_j = <y, u_j>. Everything downstream (weights, criteria, fits) is a
/// function of (d, gamma) plus the factors themselves.
struct OrthoBasis {
  Eigen::MatrixXd u;      // n x m, orthonormal columns
  Eigen::VectorXd d;      // m, positive, non-increasing
  Eigen::MatrixXd v;      // p x m, orthonormal columns
  Eigen::VectorXd gamma;  // m, u^T y
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::Index m = 0;
};

inline constexpr double kDefaultRankTol = 1e-8;

/// Thin SVD of xs truncated at singular values <= rank_tol * d_1. A group of
/// singular values equal to within rank_tol * d_1 that straddles the cutoff is
/// kept whole, so the retained rank never depends on the basis chosen inside
/// the group.
inline OrthoBasis extract_components(const Eigen::MatrixXd& xs,
                                     const Eigen::VectorXd& yc,
                                     double rank_tol = kDefaultRankTol) {
  if (yc.size() != xs.rows())
    throw DimensionMismatch("length of y does not match rows of X");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) throw ZeroMatrix();

  const double cutoff = rank_tol * sv(0);
  Eigen::Index m = 0;
  while (m < sv.size() && sv(m) > cutoff) ++m;
  // pull in the rest of a tied group sitting on the cutoff
  while (m > 0 && m < sv.size() && sv(m) > 0.0 && sv(m - 1) - sv(m) <= cutoff) ++m;
  if (m == 0) throw ZeroMatrix();

  OrthoBasis basis;
  basis.n = xs.rows();
  basis.p = xs.cols();
  basis.m = m;
  basis.u = svd.matrixU().leftCols(m);
  basis.d = sv.head(m);
  basis.v = svd.matrixV().leftCols(m);
  basis.gamma = basis.u.transpose() * yc;
  return basis;
}

}  // namespace wocr
