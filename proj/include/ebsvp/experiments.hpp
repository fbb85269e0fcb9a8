#pragma once

// Monte Carlo experiments comparing ERM with sample variance penalisation,
// plus harnesses that check the coverage of every implemented bound.
//
// Every trial draws from its own RNG stream derived from (master_seed, trial),
// and per-trial results are reduced in trial order, so outputs are
// bit-identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ebsvp/core_stats.hpp"
#include "ebsvp/random.hpp"

namespace ebsvp {

inline constexpr std::uint64_t kDefaultSeed = 20090628;

// ---------------------------------------------------------------------------
// Normal tails and the ERM lower bound

/// P{Z > x} for standard normal Z, as erfc(x / sqrt 2) / 2. glibc's erfc is
/// accurate to a few ulp, well inside an absolute 1e-10 error budget.
double normal_upper_tail(double x);

/// Slud's normal-tail lower bound for B ~ Binomial(n, p):
/// returns P{Z > (t - np) / sqrt(np(1-p))}. Requires 0 < p <= 1/2 and
/// np <= t <= n(1-p). The bound holds for P{B >= t}; for integer t the
/// strict tail P{B > t} can fall below it (t = np = n/2 is the extreme case).
double slud_lower_bound(std::uint64_t n, double p, double t);

/// P{Z > sqrt(n) eps / sqrt(1/4 - eps^2)}: lower bound on the probability that
/// ERM picks the Bernoulli(1/2 + eps) hypothesis over the constant 1/2.
/// Requires eps in (0, 1/sqrt 8].
double erm_misselection_normal_tail(std::size_t n, double epsilon);

/// exp(-8 n eps^2), valid when additionally n >= eps^-2.
double erm_misselection_lower_bound(std::size_t n, double epsilon);

// ---------------------------------------------------------------------------
// Records

enum class Method { Erm, Svp };
std::string_view to_string(Method m);

struct ExperimentRecord {
  std::size_t sample_size;
  Method method;
  double lambda;
  double mean_excess_risk;
  std::size_t trials;
  std::uint64_t master_seed;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Parses "start:stop:step" (inclusive stop) or a single integer.
std::vector<std::size_t> parse_size_grid(std::string_view spec);

// ---------------------------------------------------------------------------
// Toy experiment: K coordinate hypotheses, coordinate k is a_k +/- b_k.

struct ToyDistribution {
  double bound;                // B
  std::vector<double> means;   // a_k in [B, 1-B]
  std::vector<double> stdevs;  // b_k in [0, B]

  double optimal_risk() const;  // min_k a_k
};

ToyDistribution generate_toy_distribution(double bound, std::size_t k, Rng& rng);

/// n x K loss matrix; entry (i,k) = a_k + s b_k, s = +/-1 equiprobable and
/// independent across i and k.
LossMatrix sample_toy(const ToyDistribution& dist, std::size_t n, Rng& rng);

struct ToyExperimentConfig {
  double bound = 0.25;
  std::size_t hypotheses = 500;
  std::vector<double> lambdas{0.0, 2.5};  // 0 is ERM
  std::vector<std::size_t> sizes;
  std::size_t trials = 1000;
  std::uint64_t master_seed = kDefaultSeed;
  unsigned threads = 0;
};

struct ToyExperimentResult {
  /// One record per (size, lambda), sizes outer, lambdas inner.
  std::vector<ExperimentRecord> records;
  /// Per-trial excess risks, trial-major with the same (size, lambda) layout.
  std::vector<double> excess;

  double trial_excess(std::size_t trial, std::size_t record) const {
    return excess[trial * records.size() + record];
  }
};

ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& config);

// ---------------------------------------------------------------------------
// Two hypotheses: c (constant 1/2, column 0) vs b (Bernoulli(1/2 + eps), column 1).

class EpsilonRule {
 public:
  static EpsilonRule constant(double epsilon);
  /// eps(n) = 1 / sqrt(8 n)
  static EpsilonRule scaling();

  double operator()(std::size_t n) const;
  bool is_scaling() const noexcept { return !constant_; }

 private:
  std::optional<double> constant_;
};

struct TwoHypothesisTask {
  double epsilon;
  std::size_t n;

  TwoHypothesisTask(double epsilon, std::size_t n);
  LossMatrix sample(Rng& rng) const;
};

struct TwoHypothesisConfig {
  EpsilonRule epsilon = EpsilonRule::scaling();
  std::vector<std::size_t> sizes;
  double lambda = 2.5;
  std::size_t trials = 50000;
  std::uint64_t master_seed = kDefaultSeed;
  unsigned threads = 0;
};

struct TwoHypothesisOutcome {
  ExperimentRecord record;
  double epsilon;
  std::size_t misselections;

  double misselection_rate() const {
    return static_cast<double>(misselections) / static_cast<double>(record.trials);
  }
};

/// Per size: an ERM outcome then an SVP outcome.
std::vector<TwoHypothesisOutcome> run_two_hypothesis_experiment(const TwoHypothesisConfig& config);

/// Monte Carlo check of the excess-risk certificate on the two-hypothesis task
/// (finite-class constants, |F| = 2, reference hypothesis c with variance 0).
struct CertificateCheck {
  std::size_t n;
  double epsilon;
  double delta;
  double lambda;
  double bound;
  std::size_t trials;
  std::size_t violations;

  double violation_rate() const {
    return static_cast<double>(violations) / static_cast<double>(trials);
  }
};

CertificateCheck run_certificate_check(std::size_t n, double delta, double epsilon,
                                       std::size_t trials, std::uint64_t master_seed,
                                       unsigned threads = 0);

// ---------------------------------------------------------------------------
// Coverage harness

class DistSpec {
 public:
  enum class Kind { Bernoulli, Uniform, Beta, ToyCoordinate };

  static DistSpec bernoulli(double p);
  static DistSpec uniform();
  static DistSpec beta(double alpha, double beta);
  /// a +/- b with equal probability; b = 0 gives a point mass.
  static DistSpec toy_coordinate(double a, double b);

  /// Accepts "bernoulli(p)", "uniform", "beta(a,b)", "toy(a,b)".
  static DistSpec parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const noexcept { return kind_; }
  double mean() const;
  double variance() const;
  double draw(Rng& rng) const;
  /// Fills `out` with independent draws. Not the same stream as repeated draw().
  void draw_many(Rng& rng, std::span<double> out) const;

 private:
  DistSpec(Kind kind, double first, double second) : kind_(kind), first_(first), second_(second) {}
  Kind kind_;
  double first_;
  double second_;
};

enum class CoverageBound {
  Hoeffding,
  Bennett,
  EmpiricalBernstein,
  StdevUpper,
  StdevLower,
  VarianceLowerTail,
  VarianceUpperTail,
};

std::string_view to_string(CoverageBound b);
CoverageBound parse_coverage_bound(std::string_view text);
const std::vector<CoverageBound>& all_coverage_bounds();

struct CoverageReport {
  CoverageBound bound;
  std::string dist;
  std::size_t n;
  double delta;
  std::size_t trials;
  std::size_t failures;
  double failure_rate;
  /// Binomial standard error at the nominal rate, sqrt(delta(1-delta)/trials).
  double stderr_nominal;

  double threshold() const { return delta + 3.0 * stderr_nominal; }
  bool within_threshold() const { return failure_rate <= threshold(); }
};

/// Fraction of trials in which the bound's failure event occurs:
///   hoeffding/bennett/empirical-bernstein: true mean > empirical mean + radius
///   stdev-upper: sqrt(EV) > sqrt(V_n) + r;  stdev-lower: sqrt(V_n) > sqrt(EV) + r
///   variance tails: EV - V_n > s(delta), resp. V_n - EV > s(delta)
/// EV is the analytic variance (V_n is unbiased). Requires trials >= 1000.
CoverageReport run_coverage(const DistSpec& dist, CoverageBound bound, std::size_t n, double delta,
                            std::size_t trials, std::uint64_t master_seed, unsigned threads = 0);

/// run_coverage for every (bound, delta) pair, bounds outer. All pairs are
/// evaluated on the same samples, so each report equals the matching
/// run_coverage call with the same seed.
std::vector<CoverageReport> run_coverage_grid(const DistSpec& dist,
                                              std::span<const CoverageBound> bounds,
                                              std::size_t n, std::span<const double> deltas,
                                              std::size_t trials, std::uint64_t master_seed,
                                              unsigned threads = 0);

// ---------------------------------------------------------------------------
// Sample compression on synthetic labels

/// Labels uniform on [low, high] within [0,1]. Risk and variance of the
/// absolute loss of a constant prediction are available in closed form.
struct LabelDistribution {
  double low = 0.0;
  double high = 1.0;

  double draw(Rng& rng) const;
  double absolute_loss_risk(double prediction) const;
  double absolute_loss_variance(double prediction) const;
};

struct CompressionCheckConfig {
  std::size_t n = 20;
  std::size_t d = 2;
  double delta = 0.1;
  std::optional<double> lambda;  // default: compression_lambda(n, d, delta)
  LabelDistribution labels;
  std::size_t replications = 5000;
  std::uint64_t master_seed = kDefaultSeed;
  unsigned threads = 0;
};

struct CompressionCheck {
  std::size_t n;
  std::size_t d;
  double delta;
  double lambda;
  std::size_t replications;
  std::size_t failures;
  double mean_excess_risk;
  double max_excess_risk;

  double failure_rate() const {
    return static_cast<double>(failures) / static_cast<double>(replications);
  }
};

/// Draws a dataset with n labels from `labels`.
std::vector<double> draw_labels(const LabelDistribution& labels, std::size_t n, Rng& rng);

/// Counts replications where risk(chosen) - min_I risk(I) exceeds
/// compression_excess_bound with V* the variance of the risk-optimal subset.
CompressionCheck run_compression_check(const CompressionCheckConfig& config);

}  // namespace ebsvp
