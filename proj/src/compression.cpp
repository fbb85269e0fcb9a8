#include "ebsvp/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ebsvp/core_stats.hpp"
#include "ebsvp/error.hpp"

namespace ebsvp {
namespace {

using detail::require;

void require_subset_size(std::size_t n, std::size_t d) {
  require(d >= 1 && d < n, "compression set size must satisfy 1 <= d < n (got n=" +
                               std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

// Complement losses of `subset` (sorted) under `evaluator`.
std::vector<double> complement_losses(const Dataset& data, std::span<const std::size_t> subset,
                                      const LossEvaluator& evaluator) {
  std::vector<double> losses;
  losses.reserve(data.size() - subset.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (next < subset.size() && subset[next] == i) {
      ++next;
      continue;
    }
    losses.push_back(evaluator(data[i]));
  }
  return losses;
}

void require_valid_subset(std::size_t n, std::span<const std::size_t> subset) {
  for (std::size_t k = 0; k < subset.size(); ++k) {
    require(subset[k] < n, "subset index out of range");
    require(k == 0 || subset[k - 1] < subset[k], "subset indices must be sorted and distinct");
  }
}

}  // namespace

Trainer subset_mean_trainer() {
  return [](const Dataset& data, std::span<const std::size_t> subset) -> LossEvaluator {
    require(!subset.empty(), "subset-mean trainer needs a non-empty subset");
    double sum = 0.0;
    for (std::size_t i : subset) sum += data.at(i).label;
    const double prediction = sum / static_cast<double>(subset.size());
    return [prediction](const Example& x) {
      return std::clamp(std::abs(x.label - prediction), 0.0, 1.0);
    };
  };
}

std::uint64_t subset_count(std::size_t n, std::size_t d) {
  if (d > n) return 0;
  d = std::min(d, n - d);
  // Multiplicative formula; each partial product is itself a binomial
  // coefficient, so the division is exact.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::size_t k = 1; k <= d; ++k) {
    const std::uint64_t factor = n - d + k;
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(k));
    const std::uint64_t reduced = result / g;
    const std::uint64_t rest = factor / (k / g);
    if (reduced > kMax / rest) return kMax;
    result = reduced * rest;
  }
  return result;
}

double log_subset_count(std::size_t n, std::size_t d) {
  require(d <= n, "log_subset_count requires d <= n");
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  return std::lgamma(nd + 1.0) - std::lgamma(dd + 1.0) - std::lgamma(nd - dd + 1.0);
}

SubsetRange::iterator::iterator(std::size_t n, std::size_t d) : n_(n), current_(d), done_(false) {
  for (std::size_t k = 0; k < d; ++k) current_[k] = k;
}

SubsetRange::iterator& SubsetRange::iterator::operator++() {
  const std::size_t d = current_.size();
  std::size_t k = d;
  while (k > 0 && current_[k - 1] == n_ - d + (k - 1)) --k;
  if (k == 0) {
    done_ = true;
    current_.clear();
    return *this;
  }
  ++current_[k - 1];
  for (std::size_t j = k; j < d; ++j) current_[j] = current_[j - 1] + 1;
  return *this;
}

SubsetRange enumerate_subsets(std::size_t n, std::size_t d, std::uint64_t cap) {
  require_subset_size(n, d);
  const std::uint64_t count = subset_count(n, d);
  if (count > cap) {
    const std::string shown = count == std::numeric_limits<std::uint64_t>::max()
                                  ? "more than 1.8e19"
                                  : std::to_string(count);
    throw ParameterError("C(" + std::to_string(n) + "," + std::to_string(d) + ") = " + shown +
                         " subsets exceeds the enumeration cap of " + std::to_string(cap) +
                         "; use a smaller d or n, or raise the cap");
  }
  return SubsetRange(n, d, count);
}

ComplementStatistics complement_statistics(const Dataset& data, std::span<const std::size_t> subset,
                                           const LossEvaluator& evaluator) {
  require_valid_subset(data.size(), subset);
  require(data.size() - subset.size() >= 2, "complement statistics require n - d >= 2");
  const Sample losses(complement_losses(data, subset, evaluator));
  return {empirical_mean(losses), sample_variance(losses)};
}

CompressionSelection compress_select(const Dataset& data, const Trainer& trainer, std::size_t d,
                                     double lambda, std::uint64_t cap) {
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
  const std::size_t n = data.size();
  const SubsetRange subsets = enumerate_subsets(n, d, cap);
  require(lambda == 0.0 || n - d >= 2, "variance penalty requires n - d >= 2");

  CompressionSelection best{{}, std::numeric_limits<double>::infinity(), 0.0, 0.0, lambda,
                            subsets.size()};
  for (const auto& subset : subsets) {
    const LossEvaluator evaluator = trainer(data, subset);
    const Sample losses(complement_losses(data, subset, evaluator));
    const double mean = empirical_mean(losses);
    const double variance = losses.size() >= 2 ? sample_variance(losses) : 0.0;
    const double objective = mean + lambda * std::sqrt(variance);
    // Strict comparison keeps the first (lexicographically smallest) minimiser.
    if (objective < best.objective || best.chosen_subset.empty()) {
      best.chosen_subset = subset;
      best.objective = objective;
      best.complement_mean = mean;
      best.complement_variance = variance;
    }
  }
  return best;
}

double compression_lambda(std::size_t n, std::size_t d, double delta) {
  require_subset_size(n, d);
  detail::require_delta(delta);
  return std::sqrt(2.0 * (std::log(6.0) + log_subset_count(n, d) - std::log(delta)));
}

double compression_excess_bound(std::size_t n, std::size_t d, double delta,
                                double reference_variance) {
  require_subset_size(n, d);
  require(n - d >= 2, "compression bound requires n - d >= 2");
  detail::require_delta(delta);
  require(std::isfinite(reference_variance) && reference_variance >= 0.0,
          "reference variance must be finite and >= 0");
  const double l = std::log(6.0) + log_subset_count(n, d) - std::log(delta);
  const double m = static_cast<double>(n - d);
  return std::sqrt(8.0 * reference_variance * l / m) + 14.0 * l / (3.0 * (m - 1.0));
}

}  // namespace ebsvp
