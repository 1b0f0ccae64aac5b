#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wocr/model.hpp"
#include "wocr/rng.hpp"
#include "wocr/simulate.hpp"

namespace wocr {

struct MethodSummary {
  std::string method;
  double average_mse = 0.0;
  double se_mse = 0.0;  // sd(mse) / sqrt(successful runs); 0 when < 2 runs
  double median_hard_components = 0.0;
  double median_effective_components = 0.0;
  int failed_runs = 0;
  double total_fit_seconds = 0.0;  // summed over runs; text table only
  std::vector<double> mse;         // per successful run, in run order
};

struct BenchReport {
  std::string protocol;          // "simulation" or "split"
  std::optional<SimConfig> sim;  // simulation protocol only
  Eigen::Index data_rows = 0;    // split protocol only
  Eigen::Index data_cols = 0;
  double train_ratio = 0.0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<MethodSummary> rows;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;  // measured; left out of the JSON form
};

namespace detail {

// Fixed-order pairwise summation: deterministic and better conditioned than a
// running sum on long campaigns.
inline double pairwise_sum(const double* v, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// One (run, method) cell of the campaign.
struct CellResult {
  bool ok = false;
  double mse = 0.0;
  double hard = 0.0;
  double effective = 0.0;
  double seconds = 0.0;
};

template <class RunData>
std::vector<CellResult> run_campaign(int runs, const std::vector<ModelSpec>& methods,
                                     RunData&& run_data, int threads,
                                     std::vector<std::string>& warnings) {
  const std::size_t n_methods = methods.size();
  std::vector<CellResult> cells(static_cast<std::size_t>(runs) * n_methods);
  std::vector<int> generate_failures(std::max(threads, 1), 0);

  auto worker = [&](int tid, int stride) {
    for (int r = tid; r < runs; r += stride) {
      SimData data;
      try {
        data = run_data(r);
      } catch (const std::exception&) {
        ++generate_failures[static_cast<std::size_t>(tid)];
        continue;  // whole run lost; every method cell stays !ok
      }
      for (std::size_t i = 0; i < n_methods; ++i) {
        CellResult& cell = cells[static_cast<std::size_t>(r) * n_methods + i];
        const auto cell_t0 = std::chrono::steady_clock::now();
        try {
          const FitResult fit_result = fit(methods[i], data.x_train, data.y_train);
          const Eigen::VectorXd pred = predict(fit_result, data.x_test);
          cell.mse = (pred - data.y_test).squaredNorm() /
                     static_cast<double>(data.y_test.size());
          cell.hard = fit_result.hard_components;
          cell.effective = fit_result.effective_components;
          cell.ok = true;
        } catch (const std::exception&) {
          // skip-and-flag: the aggregate counts this as a failed run
        }
        cell.seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - cell_t0)
                           .count();
      }
    }
  };

  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  const int lost = std::accumulate(generate_failures.begin(), generate_failures.end(), 0);
  if (lost > 0)
    warnings.push_back("data generation failed in " + std::to_string(lost) + " run(s)");
  return cells;
}

inline std::vector<MethodSummary> summarize(const std::vector<CellResult>& cells,
                                            const std::vector<ModelSpec>& methods,
                                            int runs) {
  const std::size_t n_methods = methods.size();
  std::vector<MethodSummary> rows(n_methods);
  for (std::size_t i = 0; i < n_methods; ++i) {
    MethodSummary& row = rows[i];
    row.method = to_string(methods[i].variant);
    std::vector<double> hard, effective;
    for (int r = 0; r < runs; ++r) {
      const CellResult& cell = cells[static_cast<std::size_t>(r) * n_methods + i];
      row.total_fit_seconds += cell.seconds;
      if (!cell.ok) continue;
      row.mse.push_back(cell.mse);
      hard.push_back(cell.hard);
      effective.push_back(cell.effective);
    }
    const auto k = row.mse.size();
    row.failed_runs = runs - static_cast<int>(k);
    if (k > 0) {
      row.average_mse = pairwise_sum(row.mse) / static_cast<double>(k);
      if (k > 1) {
        std::vector<double> sq(k);
        for (std::size_t r = 0; r < k; ++r) {
          const double dev = row.mse[r] - row.average_mse;
          sq[r] = dev * dev;
        }
        const double sd = std::sqrt(pairwise_sum(sq) / static_cast<double>(k - 1));
        row.se_mse = sd / std::sqrt(static_cast<double>(k));
      }
      row.median_hard_components = median(hard);
      row.median_effective_components = median(effective);
    }
  }
  return rows;
}

inline void flag_failures(BenchReport& report) {
  for (const auto& row : report.rows)
    if (row.failed_runs > 0)
      report.warnings.push_back(row.method + " failed in " +
                                std::to_string(row.failed_runs) + " run(s)");
}

}  // namespace detail

/// Runs the full simulation campaign: config.runs independent draws, every
/// method fit on each training set and scored by test MSE. Runs are
/// embarrassingly parallel; the aggregation order is fixed, so the report is
/// identical for any thread count.
inline BenchReport run_benchmark(const SimConfig& config,
                                 const std::vector<ModelSpec>& methods,
                                 int threads = 1) {
  if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
  const auto t0 = std::chrono::steady_clock::now();

  BenchReport report;
  report.protocol = "simulation";
  report.sim = config;
  report.runs = config.runs;
  report.seed = config.seed;

  const auto cells = detail::run_campaign(
      config.runs, methods, [&](int r) { return generate(config, r); }, threads,
      report.warnings);
  report.rows = detail::summarize(cells, methods, config.runs);
  detail::flag_failures(report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// Repeated random train/test splits of a fixed dataset (the real-data
/// protocol): per run, a seeded shuffle puts round(ratio * n) rows in the
/// training set and the rest in the test set.
inline BenchReport split_protocol(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                  double ratio, int runs,
                                  const std::vector<ModelSpec>& methods,
                                  std::uint64_t seed, int threads = 1) {
  if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("ratio must be in (0, 1)");
  if (x.rows() != y.size()) throw DimensionMismatch("split data rows mismatch");
  const auto t0 = std::chrono::steady_clock::now();

  const Eigen::Index n = x.rows();
  const auto n_train =
      static_cast<Eigen::Index>(std::lround(ratio * static_cast<double>(n)));
  if (n_train < 2 || n_train >= n)
    throw std::invalid_argument("ratio leaves an empty train or test set");

  BenchReport report;
  report.protocol = "split";
  report.data_rows = n;
  report.data_cols = x.cols();
  report.train_ratio = ratio;
  report.runs = runs;
  report.seed = seed;
  if (n_train < x.cols() + 2)
    report.warnings.push_back(
        "train split has fewer than p + 2 rows; full-rank baselines may degrade");

  auto split_run = [&](int r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(
          rng.integer(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[i], order[j]);
    }
    SimData data;
    data.x_train.resize(n_train, x.cols());
    data.y_train.resize(n_train);
    data.x_test.resize(n - n_train, x.cols());
    data.y_test.resize(n - n_train);
    for (Eigen::Index i = 0; i < n_train; ++i) {
      data.x_train.row(i) = x.row(order[static_cast<std::size_t>(i)]);
      data.y_train(i) = y(order[static_cast<std::size_t>(i)]);
    }
    for (Eigen::Index i = n_train; i < n; ++i) {
      data.x_test.row(i - n_train) = x.row(order[static_cast<std::size_t>(i)]);
      data.y_test(i - n_train) = y(order[static_cast<std::size_t>(i)]);
    }
    return data;
  };

  const auto cells =
      detail::run_campaign(runs, methods, split_run, threads, report.warnings);
  report.rows = detail::summarize(cells, methods, runs);
  detail::flag_failures(report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace wocr
