#include "ebsvp/bounds.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ebsvp/error.hpp"

namespace ebsvp {
namespace {

using detail::require;
using detail::require_delta;

void require_n(std::size_t n, std::size_t minimum, std::string_view what) {
  require(n >= minimum, std::string(what) + " requires n >= " + std::to_string(minimum));
}

void require_variance(double v, std::string_view name) {
  require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be finite and >= 0");
}

void require_cardinality(std::uint64_t cardinality) {
  require(cardinality >= 1, "class cardinality must be >= 1");
}

ConfidenceRadius make(double radius, double delta, std::size_t n, BoundKind kind) {
  assert(std::isfinite(radius) && radius >= 0.0);
  return ConfidenceRadius{radius, delta, n, kind};
}

// Empirical Bernstein radius with confidence term log_term = ln(2|F|/delta).
double eb_radius(std::size_t n, double sample_variance, double log_term) {
  const double nd = static_cast<double>(n);
  return std::sqrt(2.0 * sample_variance * log_term / nd) + 7.0 * log_term / (3.0 * (nd - 1.0));
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Hoeffding: return "hoeffding";
    case BoundKind::Bennett: return "bennett";
    case BoundKind::EmpiricalBernstein: return "empirical-bernstein";
    case BoundKind::StdevUpper: return "stdev-upper";
    case BoundKind::StdevLower: return "stdev-lower";
    case BoundKind::UniformEB: return "empirical-bernstein-uniform";
    case BoundKind::FiniteClassHoeffding: return "hoeffding-finite-class";
    case BoundKind::FiniteClassEB: return "empirical-bernstein-finite-class";
  }
  return "unknown";
}

ClassComplexity ClassComplexity::finite(std::uint64_t cardinality) {
  require_cardinality(cardinality);
  ClassComplexity c;
  c.cardinality_ = cardinality;
  return c;
}

ClassComplexity ClassComplexity::covering(LogCover log_cover) {
  require(static_cast<bool>(log_cover), "log-cover function is empty");
  ClassComplexity c;
  c.log_cover_ = std::move(log_cover);
  return c;
}

double ClassComplexity::log_cover(std::size_t n) const {
  if (cardinality_) return std::log(static_cast<double>(*cardinality_));
  const double value = log_cover_(n);
  require(std::isfinite(value) && value >= 0.0,
          "log-cover function returned a negative or non-finite value");
  return value;
}

double ClassComplexity::log_m(std::size_t n) const { return std::log(10.0) + log_cover(n); }

ConfidenceRadius hoeffding_radius(std::size_t n, double delta) {
  require_n(n, 1, "Hoeffding bound");
  require_delta(delta);
  const double r = std::sqrt(-std::log(delta) / (2.0 * static_cast<double>(n)));
  return make(r, delta, n, BoundKind::Hoeffding);
}

ConfidenceRadius hoeffding_finite_class_radius(std::size_t n, double delta,
                                               std::uint64_t cardinality) {
  require_n(n, 1, "finite-class Hoeffding bound");
  require_delta(delta);
  require_cardinality(cardinality);
  const double log_term = std::log(static_cast<double>(cardinality)) - std::log(delta);
  const double r = std::sqrt(log_term / (2.0 * static_cast<double>(n)));
  return make(r, delta, n, BoundKind::FiniteClassHoeffding);
}

ConfidenceRadius bennett_radius(std::size_t n, double delta, double variance) {
  require_n(n, 1, "Bennett bound");
  require_delta(delta);
  require_variance(variance, "variance");
  const double nd = static_cast<double>(n);
  const double l = -std::log(delta);
  const double r = std::sqrt(2.0 * variance * l / nd) + l / (3.0 * nd);
  return make(r, delta, n, BoundKind::Bennett);
}

ConfidenceRadius empirical_bernstein_radius(std::size_t n, double delta, double sample_variance) {
  require_n(n, 2, "empirical Bernstein bound");
  require_delta(delta);
  require_variance(sample_variance, "sample variance");
  return make(eb_radius(n, sample_variance, std::log(2.0) - std::log(delta)), delta, n,
              BoundKind::EmpiricalBernstein);
}

ConfidenceRadius empirical_bernstein_finite_class_radius(std::size_t n, double delta,
                                                         double sample_variance,
                                                         std::uint64_t cardinality) {
  require_n(n, 2, "finite-class empirical Bernstein bound");
  require_delta(delta);
  require_variance(sample_variance, "sample variance");
  require_cardinality(cardinality);
  const double log_term =
      std::log(2.0) + std::log(static_cast<double>(cardinality)) - std::log(delta);
  return make(eb_radius(n, sample_variance, log_term), delta, n, BoundKind::FiniteClassEB);
}

ConfidenceRadius empirical_bernstein_uniform_radius(std::size_t n, double delta,
                                                    double sample_variance,
                                                    const ClassComplexity& complexity) {
  require_n(n, 16, "uniform empirical Bernstein bound");
  require_delta(delta);
  require_variance(sample_variance, "sample variance");
  const double t = complexity.log_m(n) - std::log(delta);
  // M(n) >= 10 and delta < 1 give t > ln 10.
  if (!(t >= 1.0)) throw std::logic_error("uniform bound confidence term fell below 1");
  const double nd = static_cast<double>(n);
  const double r = std::sqrt(18.0 * sample_variance * t / nd) + 15.0 * t / (nd - 1.0);
  return make(r, delta, n, BoundKind::UniformEB);
}

namespace {

double stdev_radius(std::size_t n, double delta) {
  require_n(n, 2, "standard deviation bound");
  require_delta(delta);
  return std::sqrt(-2.0 * std::log(delta) / static_cast<double>(n - 1));
}

void require_tail_args(std::size_t n, double s, double expected_variance) {
  require_n(n, 2, "sample variance tail bound");
  require(std::isfinite(s) && s > 0.0, "deviation s must be > 0");
  require_variance(expected_variance, "expected variance");
}

}  // namespace

ConfidenceRadius stdev_upper_radius(std::size_t n, double delta) {
  return make(stdev_radius(n, delta), delta, n, BoundKind::StdevUpper);
}

ConfidenceRadius stdev_lower_radius(std::size_t n, double delta) {
  return make(stdev_radius(n, delta), delta, n, BoundKind::StdevLower);
}

double variance_lower_tail_prob(std::size_t n, double s, double expected_variance) {
  require_tail_args(n, s, expected_variance);
  if (expected_variance == 0.0) return 0.0;
  const double m = static_cast<double>(n - 1);
  return std::exp(-m * s * s / (2.0 * expected_variance));
}

double variance_upper_tail_prob(std::size_t n, double s, double expected_variance) {
  require_tail_args(n, s, expected_variance);
  const double m = static_cast<double>(n - 1);
  return std::exp(-m * s * s / (2.0 * expected_variance + s));
}

double variance_lower_tail_deviation(std::size_t n, double delta, double expected_variance) {
  require_n(n, 2, "sample variance tail bound");
  require_delta(delta);
  require_variance(expected_variance, "expected variance");
  const double m = static_cast<double>(n - 1);
  return std::sqrt(-2.0 * expected_variance * std::log(delta) / m);
}

double variance_upper_tail_deviation(std::size_t n, double delta, double expected_variance) {
  require_n(n, 2, "sample variance tail bound");
  require_delta(delta);
  require_variance(expected_variance, "expected variance");
  // Positive root of (n-1) s^2 - L s - 2 EV L = 0, L = ln(1/delta).
  const double m = static_cast<double>(n - 1);
  const double l = -std::log(delta);
  return (l + std::sqrt(l * l + 8.0 * m * expected_variance * l)) / (2.0 * m);
}

}  // namespace ebsvp
