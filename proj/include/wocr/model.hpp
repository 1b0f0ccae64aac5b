#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wocr/components.hpp"
#include "wocr/criteria.hpp"
#include "wocr/errors.hpp"
#include "wocr/standardize.hpp"
#include "wocr/tuner.hpp"
#include "wocr/weights.hpp"

namespace wocr {

/// The six weighted-components variants plus the two conventional baselines
/// they are benchmarked against (grid-searched ridge, CV-selected hard PCR).
enum class ModelVariant {
  RRd,         // ridge weights ordered by d, pre-tuned lambda
  RRgamma,     // ridge weights ordered by gamma^2
  PCRdC,       // expit threshold on d, fixed a, hard refit
  PCRgammaC,   // expit threshold on gamma^2, fixed a, hard refit
  PCRdAC,      // expit on d, both a and c free
  PCRgammaAC,  // expit on gamma^2, both a and c free
  RidgeGrid,   // baseline: GCV over a lambda grid
  PCRCV,       // baseline: hard PCR, k by V-fold cross-validation
};

inline const char* to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::RRd: return "rr-d";
    case ModelVariant::RRgamma: return "rr-gamma";
    case ModelVariant::PCRdC: return "pcr-d-c";
    case ModelVariant::PCRgammaC: return "pcr-gamma-c";
    case ModelVariant::PCRdAC: return "pcr-d-ac";
    case ModelVariant::PCRgammaAC: return "pcr-gamma-ac";
    case ModelVariant::RidgeGrid: return "ridge-grid";
    default: return "pcr-cv";
  }
}

inline std::optional<ModelVariant> variant_from_string(const std::string& name) {
  static const std::pair<const char*, ModelVariant> table[] = {
      {"rr-d", ModelVariant::RRd},
      {"rr-gamma", ModelVariant::RRgamma},
      {"pcr-d-c", ModelVariant::PCRdC},
      {"pcr-gamma-c", ModelVariant::PCRgammaC},
      {"pcr-d-ac", ModelVariant::PCRdAC},
      {"pcr-gamma-ac", ModelVariant::PCRgammaAC},
      {"ridge-grid", ModelVariant::RidgeGrid},
      {"pcr-cv", ModelVariant::PCRCV}};
  for (const auto& [key, value] : table)
    if (name == key) return value;
  return std::nullopt;
}

/// Suggested objective per variant: BIC for the component selectors, GCV
/// otherwise.
inline Criterion default_criterion(ModelVariant v) {
  return (v == ModelVariant::PCRdC || v == ModelVariant::PCRgammaC) ? Criterion::BIC
                                                                    : Criterion::GCV;
}

struct ModelSpec {
  ModelVariant variant = ModelVariant::RRd;
  std::optional<Criterion> criterion;  // defaults per variant
  double fixed_a = 50.0;               // expit scale for the hard-refit variants
  int subdivisions = 8;                // 1-D search brackets
  long budget_2d = 2000;               // objective evaluations for (a, c) search
  std::uint64_t seed = 0;
  double rank_tol = kDefaultRankTol;
  std::vector<double> lambda_grid;     // RidgeGrid; empty selects 0.01..200 step 0.01
  int cv_folds = 10;                   // PCRCV

  Criterion resolved_criterion() const {
    return criterion.value_or(default_criterion(variant));
  }
};

struct FitResult {
  ModelSpec spec;
  TuningParams params;
  Eigen::VectorXd w;              // final component weights
  Eigen::VectorXd beta_tilde;     // coefficients in standardized predictor space
  Eigen::VectorXd beta_original;  // coefficients in original units
  double intercept = 0.0;
  double sse = 0.0;
  double df = 0.0;
  double criterion_value = 0.0;   // tuning objective at the optimum
  double effective_components = 0.0;  // sum of weights
  int hard_components = 0;            // #{w_j >= 0.5}
  Standardizer standardizer;
  OrthoBasis basis;
  long tune_evaluations = 0;
  double tune_seconds = 0.0;      // tuning stage only, excludes the SVD
};

namespace detail {

inline WeightSpec base_weight_spec(ModelVariant v) {
  switch (v) {
    case ModelVariant::RRd:
    case ModelVariant::RidgeGrid:
      return {WeightFamily::RidgeShrink, Ordering::SingularValue, {}};
    case ModelVariant::RRgamma:
      return {WeightFamily::RidgeShrink, Ordering::GammaSquared, {}};
    case ModelVariant::PCRdC:
    case ModelVariant::PCRdAC:
      return {WeightFamily::Expit, Ordering::SingularValue, {}};
    case ModelVariant::PCRgammaC:
    case ModelVariant::PCRgammaAC:
      return {WeightFamily::Expit, Ordering::GammaSquared, {}};
    default:
      throw std::invalid_argument("variant has no parametric weight family");
  }
}

// The selector variants tuned by BIC use the idempotent-form SSE; everything
// else uses the exact closed form.
inline bool use_projection_sse(ModelVariant v, Criterion crit) {
  return crit == Criterion::BIC &&
         (v == ModelVariant::PCRdC || v == ModelVariant::PCRgammaC);
}

inline double tuning_objective(const WeightSpec& wspec, const OrthoBasis& basis,
                               const Eigen::VectorXd& yc, Criterion crit,
                               bool projection_sse) {
  const Eigen::VectorXd w = weights(wspec, basis);
  const double sse = projection_sse ? sse_projection_form(basis, w, yc)
                                    : sse_closed_form(basis, w, yc);
  const double df = degrees_of_freedom(wspec, basis);
  return criterion_value(crit, sse, df, basis.n);
}

inline Eigen::VectorXd hard_threshold_weights(const WeightSpec& wspec,
                                              const OrthoBasis& basis, double c) {
  Eigen::VectorXd w(basis.m);
  for (Eigen::Index j = 0; j < basis.m; ++j) {
    const double s = wspec.ordering == Ordering::SingularValue
                         ? basis.d(j)
                         : basis.gamma(j) * basis.gamma(j);
    w(j) = s >= c ? 1.0 : 0.0;
  }
  return w;
}

inline std::vector<double> default_lambda_grid() {
  std::vector<double> grid(20000);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = 0.01 * static_cast<double>(i + 1);
  return grid;
}

// V-fold CV selection of the hard-PCR component count; ties broken toward the
// smaller k. Fold assignment is a seeded shuffle, deterministic per seed.
inline int select_components_by_cv(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                   int folds, std::uint64_t seed, double rank_tol,
                                   double* cv_mse_at_best = nullptr) {
  const auto n = x.rows();
  folds = std::min<int>(folds, static_cast<int>(n));
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }

  Eigen::Index kmax = std::numeric_limits<Eigen::Index>::max();
  std::vector<double> fold_sse;  // accumulated per k after sizing
  std::vector<std::vector<double>> per_fold;
  per_fold.reserve(folds);

  for (int fold = 0; fold < folds; ++fold) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<int>(i % folds) == fold) test_rows.push_back(order[i]);
      else train_rows.push_back(order[i]);
    }
    Eigen::MatrixXd xtr(train_rows.size(), x.cols()), xte(test_rows.size(), x.cols());
    Eigen::VectorXd ytr(train_rows.size()), yte(test_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      xtr.row(i) = x.row(train_rows[i]);
      ytr(i) = y(train_rows[i]);
    }
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      xte.row(i) = x.row(test_rows[i]);
      yte(i) = y(test_rows[i]);
    }

    auto [xs, yc, std_] = standardize(xtr, ytr);
    const OrthoBasis basis = extract_components(xs, yc, rank_tol);
    kmax = std::min(kmax, basis.m);

    // test-side component scores: Xs_test V D^-1, column j is u_j evaluated
    // on the held-out rows
    const Eigen::MatrixXd scores =
        std_.apply(xte) * (basis.v * basis.d.cwiseInverse().asDiagonal());

    std::vector<double> sse_k(static_cast<std::size_t>(basis.m) + 1, 0.0);
    Eigen::VectorXd pred = Eigen::VectorXd::Constant(yte.size(), std_.response_mean);
    sse_k[0] = (yte - pred).squaredNorm();
    for (Eigen::Index k = 1; k <= basis.m; ++k) {
      pred += scores.col(k - 1) * basis.gamma(k - 1);
      sse_k[static_cast<std::size_t>(k)] = (yte - pred).squaredNorm();
    }
    per_fold.push_back(std::move(sse_k));
  }

  fold_sse.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (const auto& sse_k : per_fold)
    for (Eigen::Index k = 0; k <= kmax; ++k)
      fold_sse[static_cast<std::size_t>(k)] += sse_k[static_cast<std::size_t>(k)];

  int best_k = 0;
  for (Eigen::Index k = 1; k <= kmax; ++k)
    if (fold_sse[static_cast<std::size_t>(k)] < fold_sse[static_cast<std::size_t>(best_k)])
      best_k = static_cast<int>(k);
  if (cv_mse_at_best)
    *cv_mse_at_best = fold_sse[static_cast<std::size_t>(best_k)] / static_cast<double>(n);
  return best_k;
}

// Assembles the FitResult once the final weights are known.
inline FitResult finalize_fit(const ModelSpec& spec, const TuningParams& params,
                              OrthoBasis basis, Standardizer standardizer,
                              const Eigen::VectorXd& yc, const Eigen::VectorXd& w,
                              double criterion_at_optimum, bool response_dependent_df,
                              std::optional<double> df_override = std::nullopt) {
  FitResult fit;
  fit.spec = spec;
  fit.params = params;
  fit.w = w;
  fit.sse = sse_closed_form(basis, w, yc);
  if (df_override) {
    fit.df = *df_override;
  } else if (response_dependent_df) {
    WeightSpec ws = base_weight_spec(spec.variant);
    ws.params = params;
    fit.df = degrees_of_freedom(ws, basis);
  } else {
    fit.df = w.sum();
  }
  fit.criterion_value = criterion_at_optimum;
  fit.effective_components = w.sum();
  fit.hard_components = static_cast<int>((w.array() >= 0.5).count());

  // beta_tilde = V D^-1 diag(w) gamma, so Xs beta_tilde = sum w_j gamma_j u_j
  fit.beta_tilde =
      basis.v * (w.array() * basis.gamma.array() / basis.d.array()).matrix();
  fit.beta_original =
      fit.beta_tilde.array() / standardizer.column_scales.array();
  fit.intercept = standardizer.response_mean -
                  fit.beta_original.dot(standardizer.column_means);
  fit.standardizer = std::move(standardizer);
  fit.basis = std::move(basis);
  return fit;
}

}  // namespace detail

/// Fits the variant in `spec` to raw data: standardize, extract components,
/// tune the weight parameters against the variant's objective, then refit
/// (hard-thresholded for the selector variants, soft weights otherwise).
inline FitResult fit(const ModelSpec& spec, const Eigen::MatrixXd& x,
                     const Eigen::VectorXd& y) {
  auto [xs, yc, standardizer] = standardize(x, y);
  OrthoBasis basis = extract_components(xs, yc, spec.rank_tol);
  const Criterion crit = spec.resolved_criterion();
  const bool proj_sse = detail::use_projection_sse(spec.variant, crit);

  const auto t0 = std::chrono::steady_clock::now();
  TuningParams tuned;
  Eigen::VectorXd w_final;
  double objective_at_opt = 0.0;
  long evaluations = 0;
  std::optional<double> df_override;
  bool response_df = false;

  switch (spec.variant) {
    case ModelVariant::RRd:
    case ModelVariant::RRgamma: {
      WeightSpec ws = detail::base_weight_spec(spec.variant);
      SearchRange range = *default_ranges(ws, basis).lambda;
      range.subdivisions = spec.subdivisions;
      const auto res = minimize_1d(
          [&](double lambda) {
            ws.params.lambda = lambda;
            return detail::tuning_objective(ws, basis, yc, crit, proj_sse);
          },
          range);
      tuned.lambda = res.x;
      ws.params.lambda = res.x;
      w_final = weights(ws, basis);
      objective_at_opt = res.value;
      evaluations = res.evaluations;
      response_df = ws.ordering == Ordering::GammaSquared;
      break;
    }
    case ModelVariant::PCRdC:
    case ModelVariant::PCRgammaC: {
      WeightSpec ws = detail::base_weight_spec(spec.variant);
      ws.params.a = spec.fixed_a;
      SearchRange range = *default_ranges(ws, basis).c;
      range.subdivisions = spec.subdivisions;
      const auto res = minimize_1d(
          [&](double c) {
            ws.params.c = c;
            return detail::tuning_objective(ws, basis, yc, crit, proj_sse);
          },
          range);
      tuned.a = spec.fixed_a;
      tuned.c = res.x;
      // the tuned cutoff is applied as a hard threshold and the selected
      // components are refit as a plain projection
      w_final = detail::hard_threshold_weights(ws, basis, res.x);
      objective_at_opt = res.value;
      evaluations = res.evaluations;
      df_override = w_final.sum();
      break;
    }
    case ModelVariant::PCRdAC:
    case ModelVariant::PCRgammaAC: {
      WeightSpec ws = detail::base_weight_spec(spec.variant);
      const ParamRanges ranges = default_ranges(ws, basis);
      const auto res = minimize_2d(
          [&](double a, double c) {
            ws.params.a = a;
            ws.params.c = c;
            return detail::tuning_objective(ws, basis, yc, crit, proj_sse);
          },
          *ranges.a, *ranges.c, spec.budget_2d, spec.seed);
      tuned.a = res.x1;
      tuned.c = res.x2;
      ws.params = tuned;
      w_final = weights(ws, basis);
      objective_at_opt = res.value;
      evaluations = res.evaluations;
      response_df = ws.ordering == Ordering::GammaSquared;
      break;
    }
    case ModelVariant::RidgeGrid: {
      WeightSpec ws = detail::base_weight_spec(spec.variant);
      const std::vector<double> grid =
          spec.lambda_grid.empty() ? detail::default_lambda_grid() : spec.lambda_grid;
      double best_lambda = grid.front();
      double best_value = std::numeric_limits<double>::infinity();
      for (const double lambda : grid) {
        ws.params.lambda = lambda;
        const double value = detail::tuning_objective(ws, basis, yc, crit, proj_sse);
        ++evaluations;
        if (value < best_value) { best_value = value; best_lambda = lambda; }
      }
      if (std::isinf(best_value)) throw AllInfinite();
      tuned.lambda = best_lambda;
      ws.params.lambda = best_lambda;
      w_final = weights(ws, basis);
      objective_at_opt = best_value;
      break;
    }
    case ModelVariant::PCRCV: {
      double cv_mse = 0.0;
      const int k = detail::select_components_by_cv(x, y, spec.cv_folds, spec.seed,
                                                    spec.rank_tol, &cv_mse);
      w_final = Eigen::VectorXd::Zero(basis.m);
      w_final.head(std::min<Eigen::Index>(k, basis.m)).setOnes();
      objective_at_opt = cv_mse;
      df_override = w_final.sum();
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();

  FitResult result = detail::finalize_fit(spec, tuned, std::move(basis),
                                          std::move(standardizer), yc, w_final,
                                          objective_at_opt, response_df, df_override);
  result.tune_evaluations = evaluations;
  result.tune_seconds = std::chrono::duration<double>(t1 - t0).count();
  return result;
}

/// Fits with the tuning parameters supplied by the caller instead of running
/// the optimizer. The selector variants interpret params.c as the hard cutoff.
inline FitResult fit_with_params(const ModelSpec& spec, const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y, const TuningParams& params) {
  if (spec.variant == ModelVariant::PCRCV)
    throw std::invalid_argument("pcr-cv has no tuning parameters to inject");
  auto [xs, yc, standardizer] = standardize(x, y);
  OrthoBasis basis = extract_components(xs, yc, spec.rank_tol);
  const Criterion crit = spec.resolved_criterion();
  const bool proj_sse = detail::use_projection_sse(spec.variant, crit);

  WeightSpec ws = detail::base_weight_spec(spec.variant);
  ws.params = params;
  Eigen::VectorXd w_final;
  std::optional<double> df_override;
  bool response_df = false;
  if (spec.variant == ModelVariant::PCRdC || spec.variant == ModelVariant::PCRgammaC) {
    if (!params.c) throw MissingParam("c");
    w_final = detail::hard_threshold_weights(ws, basis, *params.c);
    df_override = w_final.sum();
  } else {
    w_final = weights(ws, basis);
    response_df = ws.ordering == Ordering::GammaSquared;
  }
  const double value = detail::tuning_objective(ws, basis, yc, crit, proj_sse);
  return detail::finalize_fit(spec, params, std::move(basis), std::move(standardizer),
                              yc, w_final, value, response_df, df_override);
}

/// Applies the fitted model to new rows: standardize with the training
/// transform, multiply by beta_tilde, add back the response mean.
inline Eigen::VectorXd predict(const FitResult& fit, const Eigen::MatrixXd& xnew) {
  return (fit.standardizer.apply(xnew) * fit.beta_tilde).array() +
         fit.standardizer.response_mean;
}

struct ComponentRow {
  int index = 0;  // 1-based component number
  double d = 0.0;
  double gamma = 0.0;
  double weight = 0.0;
};

/// Per-component diagnostics (singular value, response coefficient, final
/// weight), in component order.
inline std::vector<ComponentRow> component_report(const FitResult& fit) {
  std::vector<ComponentRow> rows;
  rows.reserve(static_cast<std::size_t>(fit.basis.m));
  for (Eigen::Index j = 0; j < fit.basis.m; ++j)
    rows.push_back({static_cast<int>(j + 1), fit.basis.d(j), fit.basis.gamma(j),
                    fit.w(j)});
  return rows;
}

}  // namespace wocr
