#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "wocr/components.hpp"
#include "wocr/errors.hpp"

namespace wocr {

/// Shape of the weight curve: the ridge-type shrinker s/(s + lambda) or the
/// logistic step expit{a (s - c)}.
enum class WeightFamily { RidgeShrink, Expit };

/// Statistic the components are ordered by: singular value d_j or the squared
/// response coefficient gamma_j^2.
enum class Ordering { SingularValue, GammaSquared };

/// Tuning parameters; only the fields demanded by the family are set.
struct TuningParams {
  std::optional<double> lambda;  // RidgeShrink, >= 0
  std::optional<double> a;       // Expit scale, > 0
  std::optional<double> c;       // Expit location, in the ordering statistic's units
};

struct WeightSpec {
  WeightFamily family = WeightFamily::RidgeShrink;
  Ordering ordering = Ordering::SingularValue;
  TuningParams params;
};

/// Logistic sigmoid with the argument clamped so exp never overflows.
inline double expit(double z) {
  if (z > 700.0) return 1.0;
  if (z < -700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-z));
}

/// Component weights w_j in [0,1].
///
/// RidgeShrink: w_j = s*_j / (s*_j + lambda) with s*_j = d_j^2 (singular-value
/// ordering) or gamma_j^2; lambda = 0 gives w = 1, the least-squares fit.
/// Expit: w_j = expit{a (s_j - c)} with s_j = d_j or gamma_j^2.
inline Eigen::VectorXd weights(const WeightSpec& spec, const OrthoBasis& basis) {
  Eigen::VectorXd w(basis.m);
  if (spec.family == WeightFamily::RidgeShrink) {
    if (!spec.params.lambda) throw MissingParam("lambda");
    const double lambda = *spec.params.lambda;
    for (Eigen::Index j = 0; j < basis.m; ++j) {
      if (lambda == 0.0) {
        w(j) = 1.0;
        continue;
      }
      const double s = spec.ordering == Ordering::SingularValue
                           ? basis.d(j) * basis.d(j)
                           : basis.gamma(j) * basis.gamma(j);
      w(j) = s / (s + lambda);
    }
  } else {
    if (!spec.params.a) throw MissingParam("a");
    if (!spec.params.c) throw MissingParam("c");
    const double a = *spec.params.a;
    const double c = *spec.params.c;
    for (Eigen::Index j = 0; j < basis.m; ++j) {
      const double s = spec.ordering == Ordering::SingularValue
                           ? basis.d(j)
                           : basis.gamma(j) * basis.gamma(j);
      w(j) = expit(a * (s - c));
    }
  }
  return w;
}

/// d w_j / d(gamma_j^2), needed for the response-dependent degrees of freedom.
/// Zero for singular-value ordering, where weights do not depend on y.
inline Eigen::VectorXd weight_derivs_wrt_gamma_sq(const WeightSpec& spec,
                                                  const OrthoBasis& basis) {
  Eigen::VectorXd dw = Eigen::VectorXd::Zero(basis.m);
  if (spec.ordering == Ordering::SingularValue) return dw;

  if (spec.family == WeightFamily::RidgeShrink) {
    if (!spec.params.lambda) throw MissingParam("lambda");
    const double lambda = *spec.params.lambda;
    if (lambda == 0.0) return dw;  // w is identically 1
    for (Eigen::Index j = 0; j < basis.m; ++j) {
      const double g2 = basis.gamma(j) * basis.gamma(j);
      dw(j) = lambda / ((g2 + lambda) * (g2 + lambda));
    }
  } else {
    if (!spec.params.a) throw MissingParam("a");
    if (!spec.params.c) throw MissingParam("c");
    const Eigen::VectorXd w = weights(spec, basis);
    dw = *spec.params.a * w.array() * (1.0 - w.array());
  }
  return dw;
}

}  // namespace wocr
