#pragma once

#include <stdexcept>
#include <string>

namespace wocr {

/// Input dimensions do not line up (e.g. |y| != rows(X)).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A predictor column has zero sample variance and cannot be standardized.
class ConstantColumn : public std::invalid_argument {
 public:
  explicit ConstantColumn(int column)
      : std::invalid_argument("column " + std::to_string(column) +
                              " is constant (zero variance)"),
        column_(column) {}
  int column() const noexcept { return column_; }

 private:
  int column_;
};

/// The design matrix is identically zero; no components exist.
class ZeroMatrix : public std::runtime_error {
 public:
  ZeroMatrix() : std::runtime_error("design matrix has no nonzero singular values") {}
};

/// A tuning parameter required by the weight family is missing.
class MissingParam : public std::invalid_argument {
 public:
  explicit MissingParam(const std::string& name)
      : std::invalid_argument("missing tuning parameter: " + name) {}
};

/// SSE passed to a log-based criterion is negative.
class NonpositiveSSE : public std::invalid_argument {
 public:
  explicit NonpositiveSSE(double sse)
      : std::invalid_argument("SSE must be nonnegative, got " + std::to_string(sse)) {}
};

/// The objective evaluated to +inf at every probe point of a search.
class AllInfinite : public std::runtime_error {
 public:
  AllInfinite() : std::runtime_error("objective is infinite over the entire search range") {}
};

/// A CSV cell failed to parse; carries the 1-based location.
class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(std::size_t row, std::size_t col, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ", column " +
                           std::to_string(col) + ": " + what),
        row_(row),
        col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace wocr
