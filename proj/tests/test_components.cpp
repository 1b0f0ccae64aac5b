#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "wocr/components.hpp"

using Catch::Approx;

namespace {

// Standardized design whose singular values are exactly `d`, built from a
// QR-orthonormalized random matrix pair.
wocr::OrthoBasis synthetic_basis_check(const Eigen::VectorXd& d, Eigen::Index n,
                                       std::uint64_t seed, Eigen::MatrixXd* out_xs,
                                       Eigen::VectorXd* out_yc) {
  const Eigen::Index m = d.size();
  Eigen::MatrixXd qu = Eigen::HouseholderQR<Eigen::MatrixXd>(
                           testutil::random_matrix(n, m, seed))
                           .householderQ() *
                       Eigen::MatrixXd::Identity(n, m);
  Eigen::MatrixXd qv = Eigen::HouseholderQR<Eigen::MatrixXd>(
                           testutil::random_matrix(m, m, seed + 1))
                           .householderQ() *
                       Eigen::MatrixXd::Identity(m, m);
  *out_xs = qu * d.asDiagonal() * qv.transpose();
  *out_yc = testutil::random_vector(n, seed + 2);
  return wocr::extract_components(*out_xs, *out_yc);
}

}  // namespace

TEST_CASE("SVD factors are orthonormal and reconstruct the design") {
  const auto inst = testutil::random_instance(50, 10, 7);
  const wocr::OrthoBasis& b = inst.basis;

  CHECK(b.m == 10);
  CHECK((b.u.transpose() * b.u - Eigen::MatrixXd::Identity(b.m, b.m))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((b.v.transpose() * b.v - Eigen::MatrixXd::Identity(b.m, b.m))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  const Eigen::MatrixXd rebuilt = b.u * b.d.asDiagonal() * b.v.transpose();
  CHECK((rebuilt - inst.xs).norm() / inst.xs.norm() < 1e-10);
  // X v_j = d_j u_j
  for (Eigen::Index j = 0; j < b.m; ++j)
    CHECK((inst.xs * b.v.col(j) - b.d(j) * b.u.col(j)).norm() < 1e-10);
}

TEST_CASE("singular values are positive and non-increasing, gamma = U^T y") {
  const auto inst = testutil::random_instance(30, 8, 17);
  const wocr::OrthoBasis& b = inst.basis;
  for (Eigen::Index j = 0; j < b.m; ++j) {
    CHECK(b.d(j) > 0.0);
    if (j > 0) CHECK(b.d(j) <= b.d(j - 1));
  }
  CHECK((b.gamma - b.u.transpose() * inst.yc).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("duplicated column drops the rank by one and keeps m stable") {
  Eigen::MatrixXd x = testutil::random_matrix(20, 2, 23);
  x.col(1) = x.col(0) * 2.0 + Eigen::VectorXd::Constant(20, 1.0);
  const Eigen::VectorXd y = testutil::random_vector(20, 24);
  auto [xs, yc, std_] = wocr::standardize(x, y);
  CHECK(wocr::extract_components(xs, yc).m == 1);

  // rank monotonicity: appending another duplicate never changes m
  const auto inst = testutil::random_instance(25, 4, 25);
  Eigen::MatrixXd wider(inst.xs.rows(), 5);
  wider << inst.xs, inst.xs.col(2);
  CHECK(wocr::extract_components(wider, inst.yc).m == inst.basis.m);
}

TEST_CASE("diagonal construction returns the planted singular values") {
  Eigen::VectorXd d(3);
  d << 3.0, 2.0, 1.0;
  Eigen::MatrixXd xs;
  Eigen::VectorXd yc;
  const wocr::OrthoBasis b = synthetic_basis_check(d, 12, 31, &xs, &yc);
  REQUIRE(b.m == 3);
  CHECK(b.d(0) == Approx(3.0).epsilon(1e-10));
  CHECK(b.d(1) == Approx(2.0).epsilon(1e-10));
  CHECK(b.d(2) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("projection is invariant under repeated singular values") {
  // two tied blocks: any orthonormal basis of the block spans the same space
  Eigen::VectorXd d(4);
  d << 2.0, 2.0, 2.0, 0.5;
  Eigen::MatrixXd xs;
  Eigen::VectorXd yc;
  const wocr::OrthoBasis b = synthetic_basis_check(d, 15, 37, &xs, &yc);
  REQUIRE(b.m == 4);

  const Eigen::VectorXd via_svd = b.u * (b.u.transpose() * yc);
  // independent projector through the pseudoinverse
  const Eigen::VectorXd via_pinv =
      xs * Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(xs).solve(yc);
  CHECK((via_svd - via_pinv).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Bessel: sum of gamma^2 never exceeds |y|^2, equality on full span") {
  const auto inst = testutil::random_instance(40, 6, 41);
  CHECK(inst.basis.gamma.squaredNorm() <= inst.yc.squaredNorm() + 1e-10);

  // centered design with p >= n-1 spans the whole centered subspace
  const auto full = testutil::random_instance(12, 20, 43);
  REQUIRE(full.basis.m == 11);
  CHECK(full.basis.gamma.squaredNorm() ==
        Approx(full.yc.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("rank tolerance truncates tiny singular values") {
  Eigen::MatrixXd xs;
  Eigen::VectorXd yc;

  // well below the default relative tolerance: dropped
  Eigen::VectorXd d(3);
  d << 4.0, 3.0, 1e-9;
  CHECK(synthetic_basis_check(d, 14, 47, &xs, &yc).m == 2);

  // a clear gap relative to a coarse tolerance: dropped
  d << 3.0, 2.0, 0.1;
  wocr::OrthoBasis b = synthetic_basis_check(d, 14, 49, &xs, &yc);
  REQUIRE(b.m == 3);
  CHECK(wocr::extract_components(xs, yc, 0.2).m == 2);

  // a value just under the cutoff but tied to a kept one stays in
  d << 3.0, 1.51, 1.49;
  b = synthetic_basis_check(d, 14, 51, &xs, &yc);
  CHECK(wocr::extract_components(xs, yc, 0.5).m == 3);
}

TEST_CASE("zero matrix is rejected") {
  const Eigen::MatrixXd xs = Eigen::MatrixXd::Zero(10, 3);
  const Eigen::VectorXd yc = testutil::random_vector(10, 53);
  CHECK_THROWS_AS(wocr::extract_components(xs, yc), wocr::ZeroMatrix);
}
