#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wocr/benchmark.hpp"
#include "wocr/errors.hpp"
#include "wocr/model.hpp"

namespace wocr {

// ---------------------------------------------------------------------------
// CSV: comma-separated, first row header, '.' decimal, no quoting. Rows with
// missing or extra cells are rejected with their 1-based location.
// ---------------------------------------------------------------------------

struct Csv {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows x columns
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  if (cell.empty()) throw CsvParseError(row, col, "empty cell");
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw CsvParseError(row, col, "not a number: '" + cell + "'");
  return value;
}

}  // namespace detail

inline Csv read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  Csv csv;
  std::vector<std::vector<double>> rows;

  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;  // blank line, e.g. trailing newline
    const std::vector<std::string> cells = detail::split_line(line);
    if (csv.columns.empty()) {
      for (std::size_t j = 0; j < cells.size(); ++j)
        if (cells[j].empty())
          throw CsvParseError(lineno, j + 1, "empty header name");
      csv.columns = cells;
      continue;
    }
    if (cells.size() != csv.columns.size())
      throw CsvParseError(lineno, std::min(cells.size(), csv.columns.size()) + 1,
                          "expected " + std::to_string(csv.columns.size()) +
                              " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      row[j] = detail::parse_cell(cells[j], lineno, j + 1);
    rows.push_back(std::move(row));
  }
  if (csv.columns.empty()) throw CsvParseError(1, 1, "missing header row");

  csv.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(csv.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      csv.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return csv;
}

inline Csv read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& columns,
                      const Eigen::MatrixXd& values) {
  for (std::size_t j = 0; j < columns.size(); ++j)
    out << (j ? "," : "") << columns[j];
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> predictors;  // column order of x
};

/// Splits a parsed CSV into response column (by name) and predictor matrix.
inline Dataset split_response(const Csv& csv, const std::string& response) {
  Eigen::Index y_col = -1;
  for (std::size_t j = 0; j < csv.columns.size(); ++j)
    if (csv.columns[j] == response) {
      y_col = static_cast<Eigen::Index>(j);
      break;
    }
  if (y_col < 0) {
    std::string names;
    for (const auto& c : csv.columns) names += (names.empty() ? "" : ", ") + c;
    throw std::runtime_error("response column '" + response +
                             "' not found; columns are: " + names);
  }
  Dataset data;
  data.y = csv.values.col(y_col);
  data.x.resize(csv.values.rows(), csv.values.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < csv.values.cols(); ++j) {
    if (j == y_col) continue;
    data.x.col(k) = csv.values.col(j);
    data.predictors.push_back(csv.columns[static_cast<std::size_t>(j)]);
    ++k;
  }
  return data;
}

// ---------------------------------------------------------------------------
// Fit artifact: the stable JSON form of a fit (schema 1). Everything needed
// to predict and to render diagnostics, without the n x m basis factors.
// ---------------------------------------------------------------------------

struct FitArtifact {
  int schema = 1;
  std::string variant;
  std::string criterion;
  TuningParams params;
  double sse = 0.0;
  double df = 0.0;
  double criterion_value = 0.0;
  double effective_components = 0.0;
  int hard_components = 0;
  Eigen::VectorXd beta_original;
  double intercept = 0.0;
  std::vector<std::string> column_names;
  Eigen::VectorXd means;
  Eigen::VectorXd scales;
  double response_mean = 0.0;
  Eigen::VectorXd weights;
  Eigen::VectorXd singular_values;
  Eigen::VectorXd gamma;
};

inline FitArtifact make_artifact(const FitResult& fit,
                                 std::vector<std::string> column_names) {
  FitArtifact art;
  art.variant = to_string(fit.spec.variant);
  art.criterion = to_string(fit.spec.resolved_criterion());
  art.params = fit.params;
  art.sse = fit.sse;
  art.df = fit.df;
  art.criterion_value = fit.criterion_value;
  art.effective_components = fit.effective_components;
  art.hard_components = fit.hard_components;
  art.beta_original = fit.beta_original;
  art.intercept = fit.intercept;
  art.column_names = std::move(column_names);
  art.means = fit.standardizer.column_means;
  art.scales = fit.standardizer.column_scales;
  art.response_mean = fit.standardizer.response_mean;
  art.weights = fit.w;
  art.singular_values = fit.basis.d;
  art.gamma = fit.basis.gamma;
  return art;
}

namespace detail {

inline nlohmann::ordered_json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline Eigen::VectorXd vec_from_json(const nlohmann::json& arr) {
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const auto& x : arr) v(i++) = x.get<double>();
  return v;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const FitArtifact& art) {
  nlohmann::ordered_json j;
  j["schema"] = art.schema;
  j["variant"] = art.variant;
  j["criterion"] = art.criterion;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (art.params.lambda) params["lambda"] = *art.params.lambda;
  if (art.params.a) params["a"] = *art.params.a;
  if (art.params.c) params["c"] = *art.params.c;
  j["params"] = std::move(params);
  j["sse"] = art.sse;
  j["df"] = art.df;
  j["criterion_value"] = art.criterion_value;
  j["effective_components"] = art.effective_components;
  j["hard_components"] = art.hard_components;
  j["beta_original"] = detail::vec_to_json(art.beta_original);
  j["intercept"] = art.intercept;
  j["column_names"] = art.column_names;
  j["standardizer"] = {{"means", detail::vec_to_json(art.means)},
                       {"scales", detail::vec_to_json(art.scales)},
                       {"response_mean", art.response_mean}};
  j["weights"] = detail::vec_to_json(art.weights);
  j["singular_values"] = detail::vec_to_json(art.singular_values);
  j["gamma"] = detail::vec_to_json(art.gamma);
  return j;
}

inline FitArtifact artifact_from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != 1)
    throw std::runtime_error("unsupported fit artifact schema");
  FitArtifact art;
  art.variant = j.at("variant").get<std::string>();
  art.criterion = j.at("criterion").get<std::string>();
  const auto& params = j.at("params");
  if (params.contains("lambda")) art.params.lambda = params.at("lambda").get<double>();
  if (params.contains("a")) art.params.a = params.at("a").get<double>();
  if (params.contains("c")) art.params.c = params.at("c").get<double>();
  art.sse = j.at("sse").get<double>();
  art.df = j.at("df").get<double>();
  art.criterion_value = j.at("criterion_value").get<double>();
  art.effective_components = j.at("effective_components").get<double>();
  art.hard_components = j.at("hard_components").get<int>();
  art.beta_original = detail::vec_from_json(j.at("beta_original"));
  art.intercept = j.at("intercept").get<double>();
  art.column_names = j.at("column_names").get<std::vector<std::string>>();
  const auto& std_ = j.at("standardizer");
  art.means = detail::vec_from_json(std_.at("means"));
  art.scales = detail::vec_from_json(std_.at("scales"));
  art.response_mean = std_.at("response_mean").get<double>();
  art.weights = detail::vec_from_json(j.at("weights"));
  art.singular_values = detail::vec_from_json(j.at("singular_values"));
  art.gamma = detail::vec_from_json(j.at("gamma"));
  return art;
}

/// Prediction from the serialized artifact: beta_original path. Columns of
/// xnew must follow art.column_names order.
inline Eigen::VectorXd predict(const FitArtifact& art, const Eigen::MatrixXd& xnew) {
  if (xnew.cols() != art.beta_original.size())
    throw DimensionMismatch("prediction matrix has " + std::to_string(xnew.cols()) +
                            " columns, model has " +
                            std::to_string(art.beta_original.size()));
  return ((xnew * art.beta_original).array() + art.intercept).matrix();
}

// ---------------------------------------------------------------------------
// Bench report serialization. The JSON form excludes wall-clock so identical
// (config, seed) invocations are byte-identical; timings go to the text table.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["protocol"] = report.protocol;
  if (report.sim) {
    j["generator"] = to_string(report.sim->generator);
    j["n"] = report.sim->n;
    j["p"] = report.sim->p;
    if (report.sim->generator == Generator::ModelA) {
      j["rho"] = report.sim->rho;
      j["b"] = detail::vec_to_json(report.sim->b);
    }
    j["sigma2"] = report.sim->sigma2;
    j["test_size"] = report.sim->test_size;
  } else {
    j["data_rows"] = report.data_rows;
    j["data_cols"] = report.data_cols;
    j["train_ratio"] = report.train_ratio;
  }
  j["runs"] = report.runs;
  j["seed"] = report.seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"method", row.method},
                    {"average_mse", row.average_mse},
                    {"se_mse", row.se_mse},
                    {"median_hard_components", row.median_hard_components},
                    {"median_effective_components", row.median_effective_components},
                    {"failed_runs", row.failed_runs}});
  }
  j["methods"] = std::move(rows);
  j["warnings"] = report.warnings;
  return j;
}

/// Aligned text rendering of a bench report (the comparison-table layout),
/// including the measured per-method fit time.
inline std::string to_table(const BenchReport& report) {
  std::ostringstream out;
  out << "protocol: " << report.protocol;
  if (report.sim)
    out << "  generator: " << to_string(report.sim->generator)
        << "  n: " << report.sim->n << "  p: " << report.sim->p;
  else
    out << "  rows: " << report.data_rows << "  cols: " << report.data_cols
        << "  train ratio: " << report.train_ratio;
  out << "  runs: " << report.runs << "  seed: " << report.seed << '\n';

  out << std::left << std::setw(14) << "method" << std::right << std::setw(12)
      << "avg MSE" << std::setw(12) << "SE" << std::setw(12) << "med comps"
      << std::setw(12) << "med eff" << std::setw(8) << "failed" << std::setw(12)
      << "seconds" << '\n';
  for (const auto& row : report.rows) {
    out << std::left << std::setw(14) << row.method << std::right << std::fixed
        << std::setprecision(4) << std::setw(12) << row.average_mse << std::setw(12)
        << row.se_mse << std::setprecision(1) << std::setw(12)
        << row.median_hard_components << std::setw(12)
        << row.median_effective_components << std::setw(8) << row.failed_runs
        << std::setprecision(3) << std::setw(12) << row.total_fit_seconds << '\n';
    out.unsetf(std::ios::fixed);
  }
  out << std::defaultfloat << std::setprecision(6);
  out << "total wall seconds: " << std::setprecision(3) << std::fixed
      << report.wall_seconds << '\n';
  out.unsetf(std::ios::fixed);
  for (const auto& warning : report.warnings) out << "warning: " << warning << '\n';
  return out.str();
}

/// One-fit summary for standard output.
inline std::string summary_text(const FitResult& fit) {
  std::ostringstream out;
  out << "variant: " << to_string(fit.spec.variant)
      << "  criterion: " << to_string(fit.spec.resolved_criterion()) << '\n';
  out << std::setprecision(6);
  if (fit.params.lambda) out << "lambda: " << *fit.params.lambda << '\n';
  if (fit.params.a) out << "a: " << *fit.params.a << '\n';
  if (fit.params.c) out << "c: " << *fit.params.c << '\n';
  out << "sse: " << fit.sse << "  df: " << fit.df
      << "  criterion value: " << fit.criterion_value << '\n';
  out << "components: " << fit.basis.m << "  effective: " << fit.effective_components
      << "  hard: " << fit.hard_components << '\n';
  return out.str();
}

/// Component diagnostics as an aligned table (index, d, gamma, weight).
inline std::string component_table(const FitArtifact& art) {
  std::ostringstream out;
  out << std::right << std::setw(5) << "j" << std::setw(14) << "d" << std::setw(14)
      << "gamma" << std::setw(10) << "weight" << '\n';
  for (Eigen::Index j = 0; j < art.singular_values.size(); ++j)
    out << std::setw(5) << j + 1 << std::fixed << std::setprecision(5)
        << std::setw(14) << art.singular_values(j) << std::setw(14) << art.gamma(j)
        << std::setprecision(4) << std::setw(10) << art.weights(j) << '\n'
        << std::defaultfloat;
  return out.str();
}

}  // namespace wocr
