#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "wocr/components.hpp"
#include "wocr/errors.hpp"
#include "wocr/weights.hpp"

namespace wocr {

enum class Criterion { GCV, AIC, BIC };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::GCV: return "gcv";
    case Criterion::AIC: return "aic";
    default: return "bic";
  }
}

inline std::optional<Criterion> criterion_from_string(const std::string& name) {
  if (name == "gcv") return Criterion::GCV;
  if (name == "aic") return Criterion::AIC;
  if (name == "bic") return Criterion::BIC;
  return std::nullopt;
}

/// ||y||^2 - sum_j (2 w_j - w_j^2) gamma_j^2, the residual sum of squares of
/// the weighted fit. Equals ||y - U diag(w) U^T y||^2 without forming the
/// n x n hat matrix.
inline double sse_closed_form(const OrthoBasis& basis, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& yc) {
  if (w.size() != basis.m || yc.size() != basis.n)
    throw DimensionMismatch("weight/response length does not match basis");
  const double reduction =
      ((2.0 * w.array() - w.array().square()) * basis.gamma.array().square()).sum();
  return std::max(0.0, yc.squaredNorm() - reduction);
}

/// ||y||^2 - sum_j w_j gamma_j^2; the SSE when the hat matrix is idempotent,
/// used as the objective SSE for the component-selecting (hard-threshold)
/// variants where the weights approximate 0/1 indicators.
inline double sse_projection_form(const OrthoBasis& basis, const Eigen::VectorXd& w,
                                  const Eigen::VectorXd& yc) {
  if (w.size() != basis.m || yc.size() != basis.n)
    throw DimensionMismatch("weight/response length does not match basis");
  const double reduction = (w.array() * basis.gamma.array().square()).sum();
  return std::max(0.0, yc.squaredNorm() - reduction);
}

/// Degrees of freedom of the weighted fit. For singular-value ordering the
/// weights are fixed given X and DF = tr(H) = sum w_j. For gamma ordering the
/// weights depend on y and DF = sum_j (2 gamma_j^2 wdot_j + w_j), the trace of
/// d(yhat)/dy. The latter can slightly exceed m; it is reported as computed.
inline double degrees_of_freedom(const WeightSpec& spec, const OrthoBasis& basis) {
  const Eigen::VectorXd w = weights(spec, basis);
  if (spec.ordering == Ordering::SingularValue) return w.sum();
  const Eigen::VectorXd dw = weight_derivs_wrt_gamma_sq(spec, basis);
  return (2.0 * basis.gamma.array().square() * dw.array() + w.array()).sum();
}

namespace detail {
// Degenerate-DF margin: below this gap GCV's denominator is meaningless.
inline double df_guard(long n) { return std::max(1.0, 0.01 * static_cast<double>(n)); }
// Log floor keeping AIC/BIC finite on interpolating fits.
inline constexpr double kSseFloor = 1e-300;
}  // namespace detail

/// SSE / (n - df)^2. Returns +inf once n - df falls under the degeneracy
/// margin max(1, 0.01 n), so optimizers step around the singularity.
inline double gcv(double sse, double df, long n) {
  if (sse < 0.0) throw NonpositiveSSE(sse);
  const double gap = static_cast<double>(n) - df;
  if (gap < detail::df_guard(n)) return std::numeric_limits<double>::infinity();
  return sse / (gap * gap);
}

/// n ln(SSE) + 2 df.
inline double aic(double sse, double df, long n) {
  if (sse < 0.0) throw NonpositiveSSE(sse);
  return static_cast<double>(n) * std::log(std::max(sse, detail::kSseFloor)) + 2.0 * df;
}

/// n ln(SSE) + ln(n) df.
inline double bic(double sse, double df, long n) {
  if (sse < 0.0) throw NonpositiveSSE(sse);
  return static_cast<double>(n) * std::log(std::max(sse, detail::kSseFloor)) +
         std::log(static_cast<double>(n)) * df;
}

inline double criterion_value(Criterion which, double sse, double df, long n) {
  switch (which) {
    case Criterion::GCV: return gcv(sse, df, n);
    case Criterion::AIC: return aic(sse, df, n);
    default: return bic(sse, df, n);
  }
}

struct CriterionValue {
  double sse = 0.0;
  double df = 0.0;
  double value = 0.0;
  Criterion criterion = Criterion::GCV;
};

}  // namespace wocr
