#pragma once

// Sample compression with variance penalisation.
//
// Every size-d index subset I of the sample trains a hypothesis; the
// hypothesis is scored on the complement I^c by
//   P_{I^c} + lambda * sqrt(V_{I^c})
// and the minimising subset is returned. lambda = 0 is the classical scheme.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <vector>

namespace ebsvp {

struct Example {
  std::vector<double> features;
  double label = 0.0;
};
using Dataset = std::vector<Example>;

/// Maps a data point to a loss in [0,1].
using LossEvaluator = std::function<double(const Example&)>;

/// Trains on the examples indexed by `subset` and returns the loss of the
/// trained hypothesis. Must be deterministic and pure: the same subset always
/// yields an evaluator with the same outputs.
using Trainer = std::function<LossEvaluator(const Dataset&, std::span<const std::size_t>)>;

/// Demo trainer: predicts the mean label of the training subset; the loss is
/// |label - prediction| clamped to [0,1].
Trainer subset_mean_trainer();

inline constexpr std::uint64_t kDefaultSubsetCap = 1'000'000;

/// Exact C(n, d), saturating at UINT64_MAX on overflow.
std::uint64_t subset_count(std::size_t n, std::size_t d);
/// ln C(n, d) via log-gamma.
double log_subset_count(std::size_t n, std::size_t d);

/// Lexicographic enumeration of all size-d subsets of {0, ..., n-1}.
class SubsetRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::vector<std::size_t>;
    using difference_type = std::ptrdiff_t;
    using pointer = const value_type*;
    using reference = const value_type&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_); }

   private:
    friend class SubsetRange;
    iterator(std::size_t n, std::size_t d);
    std::size_t n_ = 0;
    std::vector<std::size_t> current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(n_, d_); }
  iterator end() const { return iterator(); }
  std::uint64_t size() const noexcept { return count_; }

 private:
  friend SubsetRange enumerate_subsets(std::size_t, std::size_t, std::uint64_t);
  SubsetRange(std::size_t n, std::size_t d, std::uint64_t count) : n_(n), d_(d), count_(count) {}
  std::size_t n_;
  std::size_t d_;
  std::uint64_t count_;
};

/// Requires 1 <= d < n and C(n, d) <= cap; beyond the cap the error reports
/// the subset count instead of silently subsampling.
SubsetRange enumerate_subsets(std::size_t n, std::size_t d, std::uint64_t cap = kDefaultSubsetCap);

struct ComplementStatistics {
  double mean;
  double variance;
};

/// Mean and unbiased variance of the evaluator's losses on the indices not in
/// `subset` (which must be sorted and distinct). Requires n - d >= 2.
ComplementStatistics complement_statistics(const Dataset& data, std::span<const std::size_t> subset,
                                           const LossEvaluator& evaluator);

struct CompressionSelection {
  std::vector<std::size_t> chosen_subset;
  double objective;
  double complement_mean;
  double complement_variance;
  double lambda;
  std::uint64_t num_candidates;
};

/// Exhaustive compression-set selection. Ties go to the lexicographically
/// smallest subset. With lambda == 0 and n - d == 1 the variance is not
/// defined; complement_variance is then reported as 0.
CompressionSelection compress_select(const Dataset& data, const Trainer& trainer, std::size_t d,
                                     double lambda, std::uint64_t cap = kDefaultSubsetCap);

/// sqrt(2 ln(6 |C| / delta)), |C| = C(n, d).
double compression_lambda(std::size_t n, std::size_t d, double delta);

/// Excess risk of the selected hypothesis over any I* in C, given the true
/// variance of A_{X[I*]}'s loss:
///   sqrt(8 V* L / (n-d)) + 14 L / (3 (n-d-1)),  L = ln(6 |C| / delta).
double compression_excess_bound(std::size_t n, std::size_t d, double delta,
                                double reference_variance);

}  // namespace ebsvp
