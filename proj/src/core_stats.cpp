#include "ebsvp/core_stats.hpp"

#include <string>
#include <utility>

#include "ebsvp/error.hpp"

namespace ebsvp {
namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }  // false for NaN

void require_variance_size(std::size_t n) {
  detail::require(n >= 2, "variance undefined for n<2");
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  detail::require(!values_.empty(), "sample must contain at least one value");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!in_unit_interval(values_[i])) {
      throw ParameterError("sample value at position " + std::to_string(i) +
                           " is outside [0,1]");
    }
  }
}

LossMatrix::LossMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  detail::require(rows >= 1 && cols >= 1, "loss matrix needs at least one row and one column");
  data_.assign(rows * cols, 0.0);
}

LossMatrix LossMatrix::from_columns(std::size_t rows, std::size_t cols, std::vector<double> data) {
  LossMatrix m(rows, cols);
  detail::require(data.size() == rows * cols, "column-major data size does not match dimensions");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!in_unit_interval(data[i])) {
      throw ParameterError("loss at row " + std::to_string(i % rows) + ", column " +
                           std::to_string(i / rows) + " is outside [0,1]");
    }
  }
  m.data_ = std::move(data);
  return m;
}

LossMatrix LossMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  detail::require(!rows.empty() && !rows.front().empty(), "loss matrix is empty");
  LossMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail::require(rows[i].size() == m.cols_,
                    "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                        " entries, expected " + std::to_string(m.cols_));
    for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

void LossMatrix::set(std::size_t row, std::size_t col, double value) {
  detail::require(row < rows_ && col < cols_, "loss matrix index out of range");
  if (!in_unit_interval(value)) {
    throw ParameterError("loss at row " + std::to_string(row) + ", column " +
                         std::to_string(col) + " is outside [0,1]");
  }
  data_[col * rows_ + row] = value;
}

std::span<const double> LossMatrix::column(std::size_t col) const {
  detail::require(col < cols_, "hypothesis index " + std::to_string(col) +
                                   " out of range (K=" + std::to_string(cols_) + ")");
  return std::span<const double>(data_).subspan(col * rows_, rows_);
}

double mean_of(std::span<const double> values) {
  detail::require(!values.empty(), "mean undefined for n=0");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double variance_of(std::span<const double> values) {
  require_variance_size(values.size());
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(values.size() - 1);
}

double pairwise_variance_of(std::span<const double> values) {
  require_variance_size(values.size());
  const std::size_t n = values.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = values[i] - values[j];
      sum += d * d;
    }
  }
  const double nd = static_cast<double>(n);
  return sum / (nd * (nd - 1.0));
}

double empirical_mean(const Sample& s) { return mean_of(s.values()); }

double sample_variance(const Sample& s) { return variance_of(s.values()); }

double sample_variance_pairwise(const Sample& s) { return pairwise_variance_of(s.values()); }

bool pairwise_moment_inequality_holds(const Sample& s) {
  const auto x = s.values();
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  double lhs = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = x[k] - x[j];
      row += d * d;
    }
    total += row;
    const double inner = row / nd;
    lhs += inner * inner;
  }
  lhs /= nd;
  const double rhs = total / (2.0 * nd * nd);
  return lhs <= rhs + 1e-12;
}

Sample column_sample(const LossMatrix& m, std::size_t j) {
  const auto col = m.column(j);
  return Sample(std::vector<double>(col.begin(), col.end()));
}

}  // namespace ebsvp
