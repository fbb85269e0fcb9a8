#pragma once

// One-sided confidence radii for the mean of [0,1]-valued losses.
//
// Every radius r is a confidence-dependent deviation: with probability at
// least 1 - delta, (true mean) - (empirical mean) <= r. Radii are never
// truncated at 1 so that monotonicity in n and delta survives for all inputs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

namespace ebsvp {

enum class BoundKind {
  Hoeffding,
  Bennett,
  EmpiricalBernstein,
  StdevUpper,
  StdevLower,
  UniformEB,
  FiniteClassHoeffding,
  FiniteClassEB,
};

std::string_view to_string(BoundKind kind);

struct ConfidenceRadius {
  double radius;
  double delta;
  std::size_t n;
  BoundKind kind;
};

/// Complexity of a hypothesis class: either its cardinality |F|, or a log
/// covering function n -> ln N_inf(1/n, F, 2n).
///
/// The log-cover callable must be pure and safe to invoke concurrently.
class ClassComplexity {
 public:
  using LogCover = std::function<double(std::size_t)>;

  static ClassComplexity finite(std::uint64_t cardinality);
  static ClassComplexity covering(LogCover log_cover);

  std::optional<std::uint64_t> cardinality() const noexcept { return cardinality_; }

  /// ln N_inf(1/n, F, 2n); ln|F| for finite classes. Throws if the
  /// user-supplied function returns a negative or non-finite value.
  double log_cover(std::size_t n) const;

  /// ln M(n) = ln 10 + log_cover(n).
  double log_m(std::size_t n) const;

 private:
  ClassComplexity() = default;
  std::optional<std::uint64_t> cardinality_;
  LogCover log_cover_;
};

ConfidenceRadius hoeffding_radius(std::size_t n, double delta);
ConfidenceRadius hoeffding_finite_class_radius(std::size_t n, double delta,
                                               std::uint64_t cardinality);

/// Requires the true variance of the loss.
ConfidenceRadius bennett_radius(std::size_t n, double delta, double variance);

/// sqrt(2 V_n ln(2/delta) / n) + 7 ln(2/delta) / (3(n-1)). Also valid for
/// independent, non-identically distributed draws.
ConfidenceRadius empirical_bernstein_radius(std::size_t n, double delta, double sample_variance);

/// Union bound over a finite class: delta replaced by delta/|F|.
ConfidenceRadius empirical_bernstein_finite_class_radius(std::size_t n, double delta,
                                                         double sample_variance,
                                                         std::uint64_t cardinality);

/// Uniform bound via covering numbers, valid for n >= 16:
/// sqrt(18 V_n t / n) + 15 t / (n-1) with t = ln(M(n)/delta), M(n) = 10 N_inf.
ConfidenceRadius empirical_bernstein_uniform_radius(std::size_t n, double delta,
                                                    double sample_variance,
                                                    const ClassComplexity& complexity);

/// Both return sqrt(2 ln(1/delta) / (n-1)); they differ only in which
/// side of sqrt(E V_n) vs sqrt(V_n) they bound.
ConfidenceRadius stdev_upper_radius(std::size_t n, double delta);
ConfidenceRadius stdev_lower_radius(std::size_t n, double delta);

// Tail bounds for the sample variance around its expectation EV.
//   lower: P{EV - V_n > s} <= exp(-(n-1) s^2 / (2 EV))      (0 when EV = 0)
//   upper: P{V_n - EV > s} <= exp(-(n-1) s^2 / (2 EV + s))
double variance_lower_tail_prob(std::size_t n, double s, double expected_variance);
double variance_upper_tail_prob(std::size_t n, double s, double expected_variance);

// Deviations s at which the tail bounds above equal delta.
double variance_lower_tail_deviation(std::size_t n, double delta, double expected_variance);
double variance_upper_tail_deviation(std::size_t n, double delta, double expected_variance);

}  // namespace ebsvp
