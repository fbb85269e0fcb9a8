#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ebsvp {

/// An ordered, immutable collection of losses in [0,1].
///
/// Membership in [0,1] is checked strictly at construction; values are never
/// clamped. A sample of size one is valid (its mean is defined) but variance
/// queries on it fail.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// n x K table of losses in [0,1]: row = example, column = hypothesis.
/// Stored column-major so a hypothesis' losses are contiguous.
class LossMatrix {
 public:
  /// Zero-filled matrix. Both dimensions must be at least one.
  LossMatrix(std::size_t rows, std::size_t cols);

  /// Builds from row vectors; all rows must share the same length.
  static LossMatrix from_rows(const std::vector<std::vector<double>>& rows);
  /// Takes ownership of column-major data of size rows * cols.
  static LossMatrix from_columns(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t row, std::size_t col) const {
    return data_[col * rows_ + row];
  }
  /// Checked write; rejects values outside [0,1].
  void set(std::size_t row, std::size_t col, double value);

  /// Contiguous view of one column (no copy).
  std::span<const double> column(std::size_t col) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Raw-span kernels. These do not enforce [0,1]; the Sample overloads below are
// the checked entry points.
double mean_of(std::span<const double> values);
// Mean-centred two-pass form with the (n-1) divisor.
double variance_of(std::span<const double> values);
// Literal O(n^2) sum over pairs, (1/(n(n-1))) sum_{i<j} (x_i - x_j)^2.
double pairwise_variance_of(std::span<const double> values);

double empirical_mean(const Sample& s);
double sample_variance(const Sample& s);
double sample_variance_pairwise(const Sample& s);

/// Checks the fourth-moment inequality for points in [0,1]:
///   (1/n) sum_k ((1/n) sum_j (x_k - x_j)^2)^2 <= (1/(2n^2)) sum_{k,j} (x_k - x_j)^2
/// with an absolute slack of 1e-12.
bool pairwise_moment_inequality_holds(const Sample& s);

/// Copy of column j as a Sample.
Sample column_sample(const LossMatrix& m, std::size_t j);

}  // namespace ebsvp
