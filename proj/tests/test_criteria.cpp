#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "wocr/criteria.hpp"

using Catch::Approx;
using wocr::Ordering;
using wocr::WeightFamily;
using wocr::WeightSpec;

namespace {

Eigen::VectorXd random_unit_weights(Eigen::Index m, std::uint64_t seed) {
  wocr::Rng rng(seed);
  Eigen::VectorXd w(m);
  for (Eigen::Index j = 0; j < m; ++j) w(j) = rng.uniform();
  return w;
}

}  // namespace

TEST_CASE("closed-form SSE: null fit and full fit") {
  const auto inst = testutil::random_instance(30, 5, 101);
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(inst.basis.m);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(inst.basis.m);

  CHECK(wocr::sse_closed_form(inst.basis, zeros, inst.yc) ==
        Approx(inst.yc.squaredNorm()).epsilon(1e-12));
  // w = 1 is the least-squares fit on the component span
  const double ols = inst.yc.squaredNorm() - inst.basis.gamma.squaredNorm();
  CHECK(wocr::sse_closed_form(inst.basis, ones, inst.yc) ==
        Approx(ols).margin(1e-9));
}

TEST_CASE("closed-form SSE equals the direct residual") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testutil::random_instance(30, 5, 110 + seed);
    const Eigen::VectorXd w = random_unit_weights(inst.basis.m, 500 + seed);
    const Eigen::VectorXd fitted =
        inst.basis.u * (w.array() * inst.basis.gamma.array()).matrix();
    const double direct = (inst.yc - fitted).squaredNorm();
    CHECK(wocr::sse_closed_form(inst.basis, w, inst.yc) ==
          Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("projection-form SSE drops only the selected energy") {
  const auto inst = testutil::random_instance(25, 4, 131);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(inst.basis.m);
  w(0) = 1.0;
  w(2) = 1.0;
  const double expected = inst.yc.squaredNorm() -
                          inst.basis.gamma(0) * inst.basis.gamma(0) -
                          inst.basis.gamma(2) * inst.basis.gamma(2);
  CHECK(wocr::sse_projection_form(inst.basis, w, inst.yc) ==
        Approx(expected).epsilon(1e-12));
}

TEST_CASE("degrees of freedom: projection cases sum the weights") {
  const auto inst = testutil::random_instance(30, 6, 137);
  WeightSpec spec{WeightFamily::RidgeShrink, Ordering::SingularValue, {}};
  spec.params.lambda = 0.0;
  CHECK(wocr::degrees_of_freedom(spec, inst.basis) ==
        Approx(static_cast<double>(inst.basis.m)));

  spec.params.lambda = 3.0;
  const Eigen::VectorXd w = wocr::weights(spec, inst.basis);
  CHECK(wocr::degrees_of_freedom(spec, inst.basis) == Approx(w.sum()));

  // trace of the explicit hat matrix H = U diag(w) U^T
  const Eigen::MatrixXd h =
      inst.basis.u * w.asDiagonal() * inst.basis.u.transpose();
  CHECK(h.trace() == Approx(w.sum()).epsilon(1e-10));

  // gamma-ordered ridge with lambda = 0 also collapses to m
  spec.ordering = Ordering::GammaSquared;
  spec.params.lambda = 0.0;
  CHECK(wocr::degrees_of_freedom(spec, inst.basis) ==
        Approx(static_cast<double>(inst.basis.m)));
}

TEST_CASE("response-dependent DF matches the closed-form expansions") {
  const auto inst = testutil::random_instance(30, 5, 139);

  WeightSpec ridge{WeightFamily::RidgeShrink, Ordering::GammaSquared, {}};
  ridge.params.lambda = 2.5;
  double expect = 0.0;
  for (Eigen::Index j = 0; j < inst.basis.m; ++j) {
    const double g2 = inst.basis.gamma(j) * inst.basis.gamma(j);
    expect += (g2 * g2 + 3.0 * 2.5 * g2) / ((g2 + 2.5) * (g2 + 2.5));
  }
  CHECK(wocr::degrees_of_freedom(ridge, inst.basis) == Approx(expect).epsilon(1e-12));

  WeightSpec ex{WeightFamily::Expit, Ordering::GammaSquared, {}};
  ex.params.a = 1.2;
  ex.params.c = 0.8;
  const Eigen::VectorXd w = wocr::weights(ex, inst.basis);
  expect = 0.0;
  for (Eigen::Index j = 0; j < inst.basis.m; ++j) {
    const double g2 = inst.basis.gamma(j) * inst.basis.gamma(j);
    expect += w(j) * (2.0 * 1.2 * g2 + 1.0 - 2.0 * 1.2 * w(j) * g2);
  }
  CHECK(wocr::degrees_of_freedom(ex, inst.basis) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("response-dependent DF matches the finite-difference trace") {
  // df = tr(d yhat / d y) with yhat_i = sum_j w(gamma_j^2) gamma_j u_ij
  const auto inst = testutil::random_instance(40, 6, 149);
  WeightSpec spec{WeightFamily::Expit, Ordering::GammaSquared, {}};
  spec.params.a = 0.9;
  spec.params.c = 1.1;

  const auto fitted = [&](const Eigen::VectorXd& y) {
    wocr::OrthoBasis b = inst.basis;
    b.gamma = b.u.transpose() * y;
    const Eigen::VectorXd w = wocr::weights(spec, b);
    return Eigen::VectorXd(b.u * (w.array() * b.gamma.array()).matrix());
  };

  const double h = 1e-5 * inst.yc.norm();
  double trace = 0.0;
  for (Eigen::Index i = 0; i < inst.basis.n; ++i) {
    Eigen::VectorXd hi = inst.yc, lo = inst.yc;
    hi(i) += h;
    lo(i) -= h;
    trace += (fitted(hi)(i) - fitted(lo)(i)) / (2.0 * h);
  }
  CHECK(wocr::degrees_of_freedom(spec, inst.basis) ==
        Approx(trace).epsilon(1e-3));
}

TEST_CASE("GCV: direct value, SSE linearity, df monotonicity, sentinel") {
  CHECK(wocr::gcv(4.0, 0.0, 2) == Approx(1.0));
  CHECK(wocr::gcv(8.0, 3.0, 50) == Approx(2.0 * wocr::gcv(4.0, 3.0, 50)));

  double prev = wocr::gcv(5.0, 0.0, 100);
  for (double df = 5.0; df < 60.0; df += 5.0) {
    const double cur = wocr::gcv(5.0, df, 100);
    CHECK(cur > prev);
    prev = cur;
  }

  // +inf sentinel once n - df dips under max(1, 0.01 n)
  CHECK(std::isinf(wocr::gcv(1.0, 99.5, 100)));
  CHECK(std::isinf(wocr::gcv(1.0, 199.0, 200)));  // gap 1 < 2
  CHECK(std::isfinite(wocr::gcv(1.0, 197.0, 200)));
  CHECK_THROWS_AS(wocr::gcv(-1.0, 0.0, 10), wocr::NonpositiveSSE);
}

TEST_CASE("AIC: direct values and additive penalty") {
  CHECK(wocr::aic(1.0, 0.0, 25) == Approx(0.0));
  CHECK(wocr::aic(std::exp(1.0), 0.0, 10) == Approx(10.0));
  CHECK(wocr::aic(3.7, 4.0, 33) - wocr::aic(3.7, 3.0, 33) == Approx(2.0));
  CHECK(std::isfinite(wocr::aic(0.0, 2.0, 10)));  // floored, not -inf
  CHECK_THROWS_AS(wocr::aic(-0.1, 0.0, 10), wocr::NonpositiveSSE);
}

TEST_CASE("BIC: direct values and ln(n) penalty") {
  CHECK(wocr::bic(1.0, 3.0, 7) == Approx(3.0 * std::log(7.0)));
  CHECK(wocr::bic(5.1, 6.0, 42) - wocr::bic(5.1, 5.0, 42) ==
        Approx(std::log(42.0)));
  CHECK(std::isfinite(wocr::bic(0.0, 2.0, 10)));
  CHECK_THROWS_AS(wocr::bic(-0.1, 0.0, 10), wocr::NonpositiveSSE);
}

TEST_CASE("criterion dispatcher and names") {
  CHECK(wocr::criterion_value(wocr::Criterion::GCV, 4.0, 0.0, 2) == Approx(1.0));
  CHECK(wocr::criterion_value(wocr::Criterion::AIC, 1.0, 1.0, 9) == Approx(2.0));
  CHECK(wocr::criterion_value(wocr::Criterion::BIC, 1.0, 2.0, 9) ==
        Approx(2.0 * std::log(9.0)));
  CHECK(std::string(wocr::to_string(wocr::Criterion::GCV)) == "gcv");
  CHECK(wocr::criterion_from_string("bic") == wocr::Criterion::BIC);
  CHECK_FALSE(wocr::criterion_from_string("mse").has_value());
}

TEST_CASE("GCV and AIC grid argmins agree when m/n is small") {
  // n = 200, m = 10: the criteria differ by O(df/n) in the penalty weight
  const auto inst = testutil::random_instance(200, 10, 151);
  WeightSpec spec{WeightFamily::RidgeShrink, Ordering::SingularValue, {}};

  const double hi = 10.0 * inst.basis.d(0) * inst.basis.d(0);
  int best_gcv = 0, best_aic = 0;
  double min_gcv = std::numeric_limits<double>::infinity();
  double min_aic = min_gcv;
  const int grid_points = 100;
  for (int i = 0; i < grid_points; ++i) {
    spec.params.lambda = hi * i / (grid_points - 1.0);
    const Eigen::VectorXd w = wocr::weights(spec, inst.basis);
    const double sse = wocr::sse_closed_form(inst.basis, w, inst.yc);
    const double df = wocr::degrees_of_freedom(spec, inst.basis);
    const double g = wocr::gcv(sse, df, inst.basis.n);
    const double a = wocr::aic(sse, df, inst.basis.n);
    if (g < min_gcv) { min_gcv = g; best_gcv = i; }
    if (a < min_aic) { min_aic = a; best_aic = i; }
  }
  CHECK(std::abs(best_gcv - best_aic) <= 1);
}
