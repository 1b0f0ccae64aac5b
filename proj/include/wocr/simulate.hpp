#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "wocr/rng.hpp"

namespace wocr {

enum class Generator { ModelA, ModelB, ModelC };

inline const char* to_string(Generator g) {
  switch (g) {
    case Generator::ModelA: return "model-a";
    case Generator::ModelB: return "model-b";
    default: return "model-c";
  }
}

inline std::optional<Generator> generator_from_string(const std::string& name) {
  if (name == "model-a") return Generator::ModelA;
  if (name == "model-b") return Generator::ModelB;
  if (name == "model-c") return Generator::ModelC;
  return std::nullopt;
}

struct SimConfig {
  Generator generator = Generator::ModelA;
  Eigen::Index n = 500;
  Eigen::Index p = 50;
  double rho = 0.5;         // AR(1) correlation, ModelA only
  double sigma2 = 1.0;      // noise variance
  Eigen::VectorXd b;        // ModelA component coefficients; empty selects
                            // b_j = (m - j + 1) / 10 with m = min(n, p)
  int runs = 200;
  Eigen::Index test_size = 500;
  std::uint64_t seed = 0;
};

struct SimData {
  Eigen::MatrixXd x_train;
  Eigen::VectorXd y_train;
  Eigen::MatrixXd x_test;
  Eigen::VectorXd y_test;
};

namespace detail {

// Lower Cholesky factor of the AR(1) covariance rho^|i-j|.
inline Eigen::MatrixXd ar1_cholesky(Eigen::Index p, double rho) {
  Eigen::MatrixXd sigma(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      sigma(i, j) = std::pow(rho, std::abs(static_cast<double>(i - j)));
  return Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();
}

// Fills in a fixed element order so streams do not depend on Eigen storage.
inline Eigen::MatrixXd normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      z(i, j) = rng.normal();
  return z;
}

inline Eigen::MatrixXd uniform_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      z(i, j) = rng.uniform();
  return z;
}

inline Eigen::VectorXd friedman_mean(Generator g, const Eigen::MatrixXd& x) {
  if (x.cols() < 5)
    throw std::invalid_argument("models B and C need at least 5 covariates");
  const auto x1 = x.col(0).array(), x2 = x.col(1).array(), x3 = x.col(2).array(),
             x4 = x.col(3).array(), x5 = x.col(4).array();
  if (g == Generator::ModelB)
    return 0.1 * (4.0 * x1).exp() +
           4.0 / (1.0 + (-20.0 * (x2 - 0.5)).exp()) + 3.0 * x3 + 2.0 * x4 + x5;
  return 10.0 * (std::numbers::pi * x1 * x2).sin() + 20.0 * (x3 - 0.5).square() +
         10.0 * x4 + x5;
}

}  // namespace detail

/// One train/test draw. Model A: rows of X are N(0, AR1(rho)); the mean is a
/// combination of the realized training design's orthogonal components,
/// y = sum_j b_j u_j + eps, which both sets share through the fixed signal
/// beta = V diag(1/d) b. Models B/C: uniform[0,1] covariates with the two
/// nonlinear means; only the first five covariates matter. Deterministic
/// given (config.seed, run_index).
inline SimData generate(const SimConfig& config, int run_index) {
  if (config.n < 2 || config.p < 1 || config.test_size < 1)
    throw std::invalid_argument("simulation dimensions must be positive");
  if (config.rho < 0.0 || config.rho >= 1.0)
    throw std::invalid_argument("rho must be in [0, 1)");
  if (config.sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");

  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(run_index)));
  const double noise_sd = std::sqrt(config.sigma2);
  SimData data;

  if (config.generator == Generator::ModelA) {
    const Eigen::MatrixXd chol = detail::ar1_cholesky(config.p, config.rho);
    data.x_train = detail::normal_matrix(rng, config.n, config.p) * chol.transpose();
    data.x_test =
        detail::normal_matrix(rng, config.test_size, config.p) * chol.transpose();

    // components of the realized training design (raw, not re-standardized)
    Eigen::BDCSVD<Eigen::MatrixXd> svd(data.x_train,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index m = 0;
    while (m < sv.size() && sv(m) > 1e-12 * sv(0)) ++m;

    Eigen::VectorXd b = config.b;
    if (b.size() == 0) {
      b.resize(m);
      for (Eigen::Index j = 0; j < m; ++j)
        b(j) = static_cast<double>(m - j) / 10.0;
    }
    const Eigen::Index k = std::min(b.size(), m);
    const Eigen::VectorXd beta =
        svd.matrixV().leftCols(k) *
        (b.head(k).array() / sv.head(k).array()).matrix();

    data.y_train = data.x_train * beta;
    for (Eigen::Index i = 0; i < config.n; ++i) data.y_train(i) += noise_sd * rng.normal();
    data.y_test = data.x_test * beta;
    for (Eigen::Index i = 0; i < config.test_size; ++i)
      data.y_test(i) += noise_sd * rng.normal();
    return data;
  }

  data.x_train = detail::uniform_matrix(rng, config.n, config.p);
  data.x_test = detail::uniform_matrix(rng, config.test_size, config.p);
  data.y_train = detail::friedman_mean(config.generator, data.x_train);
  for (Eigen::Index i = 0; i < config.n; ++i) data.y_train(i) += noise_sd * rng.normal();
  data.y_test = detail::friedman_mean(config.generator, data.x_test);
  for (Eigen::Index i = 0; i < config.test_size; ++i)
    data.y_test(i) += noise_sd * rng.normal();
  return data;
}

}  // namespace wocr
