#include "ebsvp/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

#include "ebsvp/bounds.hpp"
#include "ebsvp/compression.hpp"
#include "ebsvp/error.hpp"
#include "ebsvp/learners.hpp"
#include "ebsvp/parallel.hpp"

namespace ebsvp {
namespace {

using detail::require;

const double kMaxEpsilon = 1.0 / std::sqrt(8.0);

void require_epsilon(double epsilon) {
  require(epsilon > 0.0 && epsilon <= kMaxEpsilon, "epsilon must lie in (0, 1/sqrt(8)]");
}

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  require(ec == std::errc() && ptr == last && !text.empty(),
          "invalid integer '" + std::string(text) + "' in size grid");
  return value;
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  require(ec == std::errc() && ptr == last && !text.empty(),
          "invalid number '" + std::string(text) + "'");
  return value;
}

double mean_of_flags(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double slud_lower_bound(std::uint64_t n, double p, double t) {
  require(n >= 1, "binomial tail bound requires n >= 1");
  require(p > 0.0 && p <= 0.5, "binomial tail bound requires 0 < p <= 1/2");
  const double nd = static_cast<double>(n);
  require(nd * p <= t && t <= nd * (1.0 - p), "binomial tail bound requires np <= t <= n(1-p)");
  return normal_upper_tail((t - nd * p) / std::sqrt(nd * p * (1.0 - p)));
}

double erm_misselection_normal_tail(std::size_t n, double epsilon) {
  require(n >= 1, "sample size must be >= 1");
  require_epsilon(epsilon);
  const double eta = std::sqrt(static_cast<double>(n)) * epsilon / std::sqrt(0.25 - epsilon * epsilon);
  return normal_upper_tail(eta);
}

double erm_misselection_lower_bound(std::size_t n, double epsilon) {
  require_epsilon(epsilon);
  const double nd = static_cast<double>(n);
  // n >= eps^-2, compared as n eps^2 >= 1 with rounding slack.
  require(nd * epsilon * epsilon >= 1.0 - 1e-12,
          "ERM misselection bound requires n >= epsilon^-2");
  return std::exp(-8.0 * nd * epsilon * epsilon);
}

std::string_view to_string(Method m) { return m == Method::Erm ? "erm" : "svp"; }

std::vector<std::size_t> parse_size_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 1) {
    const std::size_t n = parse_count(parts[0]);
    require(n >= 1, "sample sizes must be >= 1");
    return {n};
  }
  require(parts.size() == 3, "size grid must be 'start:stop:step' or a single integer");
  const std::size_t first = parse_count(parts[0]);
  const std::size_t last = parse_count(parts[1]);
  const std::size_t step = parse_count(parts[2]);
  require(first >= 1 && step >= 1 && first <= last,
          "size grid needs 1 <= start <= stop and step >= 1");
  std::vector<std::size_t> sizes;
  for (std::size_t n = first; n <= last; n += step) sizes.push_back(n);
  return sizes;
}

// --- toy experiment --------------------------------------------------------

double ToyDistribution::optimal_risk() const {
  return *std::min_element(means.begin(), means.end());
}

ToyDistribution generate_toy_distribution(double bound, std::size_t k, Rng& rng) {
  require(bound > 0.0 && bound < 0.5, "toy distribution requires 0 < B < 1/2");
  require(k >= 1, "toy distribution requires K >= 1");
  ToyDistribution dist{bound, std::vector<double>(k), std::vector<double>(k)};
  for (std::size_t i = 0; i < k; ++i) {
    dist.means[i] = bound + (1.0 - 2.0 * bound) * uniform01(rng);
    dist.stdevs[i] = bound * uniform01(rng);
  }
  return dist;
}

LossMatrix sample_toy(const ToyDistribution& dist, std::size_t n, Rng& rng) {
  require(n >= 1, "sample size must be >= 1");
  const std::size_t k = dist.means.size();
  std::vector<double> data(n * k);
  std::uint64_t bits = 0;
  int available = 0;
  for (std::size_t col = 0; col < k; ++col) {
    const double a = dist.means[col];
    const double b = dist.stdevs[col];
    // a - b >= 0 and a + b <= 1 hold exactly; min/max only absorb rounding.
    const double low = std::max(0.0, a - b);
    const double high = std::min(1.0, a + b);
    for (std::size_t row = 0; row < n; ++row) {
      if (available == 0) {
        bits = rng();
        available = 64;
      }
      data[col * n + row] = (bits & 1U) ? high : low;
      bits >>= 1;
      --available;
    }
  }
  return LossMatrix::from_columns(n, k, std::move(data));
}

ToyExperimentResult run_toy_experiment(const ToyExperimentConfig& config) {
  require(config.bound > 0.0 && config.bound < 0.5, "toy distribution requires 0 < B < 1/2");
  require(config.hypotheses >= 1, "toy experiment requires K >= 1");
  require(!config.lambdas.empty() && !config.sizes.empty(), "toy experiment needs lambdas and sizes");
  require(config.trials >= 1, "toy experiment needs at least one trial");
  for (double lambda : config.lambdas) {
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
  }
  for (std::size_t n : config.sizes) {
    require(n >= 1, "sample sizes must be >= 1");
    require(n >= 2 || *std::max_element(config.lambdas.begin(), config.lambdas.end()) == 0.0,
            "variance penalty requires n >= 2");
  }

  const std::size_t cells = config.sizes.size() * config.lambdas.size();
  ToyExperimentResult result;
  result.excess.assign(config.trials * cells, 0.0);

  parallel_for(config.trials, config.threads, [&](std::size_t trial) {
    Rng rng = make_rng(config.master_seed, trial);
    const ToyDistribution dist = generate_toy_distribution(config.bound, config.hypotheses, rng);
    const double optimum = dist.optimal_risk();
    double* out = result.excess.data() + trial * cells;
    for (std::size_t s = 0; s < config.sizes.size(); ++s) {
      const LossMatrix sample = sample_toy(dist, config.sizes[s], rng);
      const auto selections = svp_select_many(sample, config.lambdas);
      for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
        out[s * config.lambdas.size() + l] = dist.means[selections[l].index] - optimum;
      }
    }
  });

  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    for (std::size_t l = 0; l < config.lambdas.size(); ++l) {
      const std::size_t cell = s * config.lambdas.size() + l;
      double sum = 0.0;
      for (std::size_t t = 0; t < config.trials; ++t) sum += result.excess[t * cells + cell];
      const double lambda = config.lambdas[l];
      result.records.push_back(ExperimentRecord{
          config.sizes[s], lambda == 0.0 ? Method::Erm : Method::Svp, lambda,
          sum / static_cast<double>(config.trials), config.trials, config.master_seed});
    }
  }
  return result;
}

// --- two hypotheses ----------------------------------------------------------

EpsilonRule EpsilonRule::constant(double epsilon) {
  require_epsilon(epsilon);
  EpsilonRule rule;
  rule.constant_ = epsilon;
  return rule;
}

EpsilonRule EpsilonRule::scaling() { return EpsilonRule(); }

double EpsilonRule::operator()(std::size_t n) const {
  if (constant_) return *constant_;
  require(n >= 1, "sample size must be >= 1");
  return 1.0 / std::sqrt(8.0 * static_cast<double>(n));
}

TwoHypothesisTask::TwoHypothesisTask(double epsilon, std::size_t n) : epsilon(epsilon), n(n) {
  require_epsilon(epsilon);
  require(n >= 1, "sample size must be >= 1");
}

LossMatrix TwoHypothesisTask::sample(Rng& rng) const {
  LossMatrix m(n, 2);
  const double p = 0.5 + epsilon;
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, 0, 0.5);
    m.set(i, 1, uniform01(rng) < p ? 1.0 : 0.0);
  }
  return m;
}

std::vector<TwoHypothesisOutcome> run_two_hypothesis_experiment(const TwoHypothesisConfig& config) {
  require(!config.sizes.empty(), "two-hypothesis experiment needs sizes");
  require(config.trials >= 1, "two-hypothesis experiment needs at least one trial");
  require(std::isfinite(config.lambda) && config.lambda >= 0.0, "lambda must be finite and >= 0");

  std::vector<TwoHypothesisOutcome> outcomes;
  for (std::size_t n : config.sizes) {
    const TwoHypothesisTask task(config.epsilon(n), n);
    require(config.lambda == 0.0 || n >= 2, "variance penalty requires n >= 2");
    std::vector<double> erm_miss(config.trials, 0.0);
    std::vector<double> svp_miss(config.trials, 0.0);
    const std::uint64_t size_seed = derive_seed(config.master_seed, n);
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
      Rng rng = make_rng(size_seed, trial);
      const LossMatrix m = task.sample(rng);
      erm_miss[trial] = erm_select(m).index == 1 ? 1.0 : 0.0;
      svp_miss[trial] = svp_select(m, config.lambda).index == 1 ? 1.0 : 0.0;
    });
    for (const auto& [method, lambda, flags] :
         {std::tuple{Method::Erm, 0.0, &erm_miss}, std::tuple{Method::Svp, config.lambda, &svp_miss}}) {
      std::size_t count = 0;
      for (double f : *flags) count += f != 0.0;
      // Excess risk is eps on a misselection and 0 otherwise.
      outcomes.push_back(TwoHypothesisOutcome{
          ExperimentRecord{n, method, lambda, task.epsilon * mean_of_flags(*flags), config.trials,
                           config.master_seed},
          task.epsilon, count});
    }
  }
  return outcomes;
}

CertificateCheck run_certificate_check(std::size_t n, double delta, double epsilon,
                                       std::size_t trials, std::uint64_t master_seed,
                                       unsigned threads) {
  require(trials >= 1, "certificate check needs at least one trial");
  const TwoHypothesisTask task(epsilon, n);
  const auto complexity = ClassComplexity::finite(2);
  const ExcessRiskCertificate cert =
      svp_excess_risk_bound(n, delta, 0.0, complexity, CertificateMode::FiniteClass);
  std::vector<double> violated(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Rng rng = make_rng(master_seed, trial);
    const Selection sel = svp_select(task.sample(rng), cert.lambda);
    const double excess = sel.index == 1 ? task.epsilon : 0.0;
    violated[trial] = excess > cert.bound ? 1.0 : 0.0;
  });
  std::size_t violations = 0;
  for (double v : violated) violations += v != 0.0;
  return CertificateCheck{n, epsilon, delta, cert.lambda, cert.bound, trials, violations};
}

// --- coverage ----------------------------------------------------------------

DistSpec DistSpec::bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "bernoulli parameter must lie in [0,1]");
  return DistSpec(Kind::Bernoulli, p, 0.0);
}

DistSpec DistSpec::uniform() { return DistSpec(Kind::Uniform, 0.0, 0.0); }

DistSpec DistSpec::beta(double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta),
          "beta parameters must be positive");
  return DistSpec(Kind::Beta, alpha, beta);
}

DistSpec DistSpec::toy_coordinate(double a, double b) {
  require(b >= 0.0 && a - b >= 0.0 && a + b <= 1.0,
          "toy coordinate requires b >= 0 and a +/- b within [0,1]");
  return DistSpec(Kind::ToyCoordinate, a, b);
}

DistSpec DistSpec::parse(std::string_view text) {
  const auto open = text.find('(');
  const std::string_view name = text.substr(0, open);
  std::vector<double> args;
  if (open != std::string_view::npos) {
    require(text.back() == ')', "malformed distribution '" + std::string(text) + "'");
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t start = 0;
    while (true) {
      const auto comma = inner.find(',', start);
      std::string_view part = inner.substr(start, comma - start);
      while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
      while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
      args.push_back(parse_real(part));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  auto expect_args = [&](std::size_t count) {
    require(args.size() == count, "distribution '" + std::string(name) + "' takes " +
                                      std::to_string(count) + " parameter(s)");
  };
  if (name == "bernoulli") {
    expect_args(1);
    return bernoulli(args[0]);
  }
  if (name == "uniform") {
    expect_args(0);
    return uniform();
  }
  if (name == "beta") {
    expect_args(2);
    return beta(args[0], args[1]);
  }
  if (name == "toy" || name == "toy-coordinate") {
    expect_args(2);
    return toy_coordinate(args[0], args[1]);
  }
  throw ParameterError("unknown distribution '" + std::string(text) +
                       "' (expected bernoulli(p), uniform, beta(a,b) or toy(a,b))");
}

std::string DistSpec::to_string() const {
  switch (kind_) {
    case Kind::Bernoulli: return fmt::format("bernoulli({})", first_);
    case Kind::Uniform: return "uniform";
    case Kind::Beta: return fmt::format("beta({},{})", first_, second_);
    case Kind::ToyCoordinate: return fmt::format("toy({},{})", first_, second_);
  }
  return "unknown";
}

double DistSpec::mean() const {
  switch (kind_) {
    case Kind::Bernoulli: return first_;
    case Kind::Uniform: return 0.5;
    case Kind::Beta: return first_ / (first_ + second_);
    case Kind::ToyCoordinate: return first_;
  }
  return 0.0;
}

double DistSpec::variance() const {
  switch (kind_) {
    case Kind::Bernoulli: return first_ * (1.0 - first_);
    case Kind::Uniform: return 1.0 / 12.0;
    case Kind::Beta: {
      const double s = first_ + second_;
      return first_ * second_ / (s * s * (s + 1.0));
    }
    case Kind::ToyCoordinate: return second_ * second_;
  }
  return 0.0;
}

double DistSpec::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::Bernoulli: return uniform01(rng) < first_ ? 1.0 : 0.0;
    case Kind::Uniform: return uniform01(rng);
    case Kind::Beta: {
      std::gamma_distribution<double> ga(first_, 1.0);
      std::gamma_distribution<double> gb(second_, 1.0);
      const double x = ga(rng);
      const double y = gb(rng);
      return x / (x + y);
    }
    case Kind::ToyCoordinate:
      return (rng() >> 63) ? std::min(1.0, first_ + second_) : std::max(0.0, first_ - second_);
  }
  return 0.0;
}

void DistSpec::draw_many(Rng& rng, std::span<double> out) const {
  if (kind_ != Kind::Beta) {
    for (double& v : out) v = draw(rng);
    return;
  }
  std::gamma_distribution<double> ga(first_, 1.0);
  std::gamma_distribution<double> gb(second_, 1.0);
  for (double& v : out) {
    const double x = ga(rng);
    const double y = gb(rng);
    v = x / (x + y);
  }
}

std::string_view to_string(CoverageBound b) {
  switch (b) {
    case CoverageBound::Hoeffding: return "hoeffding";
    case CoverageBound::Bennett: return "bennett";
    case CoverageBound::EmpiricalBernstein: return "empirical-bernstein";
    case CoverageBound::StdevUpper: return "stdev-upper";
    case CoverageBound::StdevLower: return "stdev-lower";
    case CoverageBound::VarianceLowerTail: return "variance-lower-tail";
    case CoverageBound::VarianceUpperTail: return "variance-upper-tail";
  }
  return "unknown";
}

const std::vector<CoverageBound>& all_coverage_bounds() {
  static const std::vector<CoverageBound> kAll{
      CoverageBound::Hoeffding,         CoverageBound::Bennett,
      CoverageBound::EmpiricalBernstein, CoverageBound::StdevUpper,
      CoverageBound::StdevLower,        CoverageBound::VarianceLowerTail,
      CoverageBound::VarianceUpperTail};
  return kAll;
}

CoverageBound parse_coverage_bound(std::string_view text) {
  for (CoverageBound b : all_coverage_bounds()) {
    if (to_string(b) == text) return b;
  }
  throw ParameterError("unknown bound kind '" + std::string(text) + "'");
}

namespace {

struct CoverageCell {
  CoverageBound bound;
  double delta;
  double fixed;  // radius or deviation known before sampling
};

bool coverage_failure(const CoverageCell& c, std::size_t n, double true_mean, double true_variance,
                      double true_stdev, double mean, double variance) {
  switch (c.bound) {
    case CoverageBound::Hoeffding:
    case CoverageBound::Bennett:
      return true_mean > mean + c.fixed;
    case CoverageBound::EmpiricalBernstein:
      return true_mean > mean + empirical_bernstein_radius(n, c.delta, variance).radius;
    case CoverageBound::StdevUpper:
      return true_stdev > std::sqrt(variance) + c.fixed;
    case CoverageBound::StdevLower:
      return std::sqrt(variance) > true_stdev + c.fixed;
    case CoverageBound::VarianceLowerTail:
      return true_variance - variance > c.fixed;
    case CoverageBound::VarianceUpperTail:
      return variance - true_variance > c.fixed;
  }
  return false;
}

}  // namespace

std::vector<CoverageReport> run_coverage_grid(const DistSpec& dist,
                                              std::span<const CoverageBound> bounds,
                                              std::size_t n, std::span<const double> deltas,
                                              std::size_t trials, std::uint64_t master_seed,
                                              unsigned threads) {
  require(trials >= 1000, "coverage runs require at least 1000 trials");
  require(!bounds.empty() && !deltas.empty(), "coverage grid needs bounds and deltas");
  for (double delta : deltas) detail::require_delta(delta);
  bool needs_variance = false;
  for (CoverageBound bound : bounds) {
    const bool variance_based = bound != CoverageBound::Hoeffding && bound != CoverageBound::Bennett;
    require(n >= (variance_based ? 2u : 1u),
            std::string(to_string(bound)) + " coverage requires n >= " +
                (variance_based ? "2" : "1"));
    needs_variance = needs_variance || variance_based;
  }

  const double true_mean = dist.mean();
  const double true_variance = dist.variance();
  const double true_stdev = std::sqrt(true_variance);

  std::vector<CoverageCell> cells;
  for (CoverageBound bound : bounds) {
    for (double delta : deltas) {
      // Everything except the empirical Bernstein radius is known before sampling.
      double fixed = 0.0;
      switch (bound) {
        case CoverageBound::Hoeffding: fixed = hoeffding_radius(n, delta).radius; break;
        case CoverageBound::Bennett: fixed = bennett_radius(n, delta, true_variance).radius; break;
        case CoverageBound::EmpiricalBernstein: break;
        case CoverageBound::StdevUpper: fixed = stdev_upper_radius(n, delta).radius; break;
        case CoverageBound::StdevLower: fixed = stdev_lower_radius(n, delta).radius; break;
        case CoverageBound::VarianceLowerTail:
          fixed = variance_lower_tail_deviation(n, delta, true_variance);
          break;
        case CoverageBound::VarianceUpperTail:
          fixed = variance_upper_tail_deviation(n, delta, true_variance);
          break;
      }
      cells.push_back(CoverageCell{bound, delta, fixed});
    }
  }

  // failed[trial * cells + cell]; every cell sees the same samples.
  std::vector<unsigned char> failed(trials * cells.size(), 0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Rng rng = make_rng(master_seed, trial);
    std::vector<double> values(n);
    dist.draw_many(rng, values);
    const double mean = mean_of(values);
    const double variance = needs_variance ? variance_of(values) : 0.0;
    unsigned char* row = failed.data() + trial * cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row[c] = coverage_failure(cells[c], n, true_mean, true_variance, true_stdev, mean, variance);
    }
  });

  std::vector<CoverageReport> reports;
  const double td = static_cast<double>(trials);
  const std::string name = dist.to_string();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t failures = 0;
    for (std::size_t t = 0; t < trials; ++t) failures += failed[t * cells.size() + c];
    const double delta = cells[c].delta;
    reports.push_back(CoverageReport{cells[c].bound, name, n, delta, trials, failures,
                                     static_cast<double>(failures) / td,
                                     std::sqrt(delta * (1.0 - delta) / td)});
  }
  return reports;
}

CoverageReport run_coverage(const DistSpec& dist, CoverageBound bound, std::size_t n, double delta,
                            std::size_t trials, std::uint64_t master_seed, unsigned threads) {
  const CoverageBound bounds[] = {bound};
  const double deltas[] = {delta};
  return run_coverage_grid(dist, bounds, n, deltas, trials, master_seed, threads).front();
}

// --- compression -----------------------------------------------------------------

double LabelDistribution::draw(Rng& rng) const { return low + (high - low) * uniform01(rng); }

double LabelDistribution::absolute_loss_risk(double c) const {
  const double width = high - low;
  const double mid = 0.5 * (low + high);
  if (width == 0.0) return std::abs(low - c);
  if (c <= low) return mid - c;
  if (c >= high) return c - mid;
  return ((c - low) * (c - low) + (high - c) * (high - c)) / (2.0 * width);
}

double LabelDistribution::absolute_loss_variance(double c) const {
  const double width = high - low;
  const double mid = 0.5 * (low + high);
  const double second_moment = width * width / 12.0 + (mid - c) * (mid - c);
  const double risk = absolute_loss_risk(c);
  return std::max(0.0, second_moment - risk * risk);
}

std::vector<double> draw_labels(const LabelDistribution& labels, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (double& y : out) y = labels.draw(rng);
  return out;
}

CompressionCheck run_compression_check(const CompressionCheckConfig& config) {
  require(config.labels.low >= 0.0 && config.labels.high <= 1.0 &&
              config.labels.low <= config.labels.high,
          "label range must satisfy 0 <= low <= high <= 1");
  require(config.replications >= 1, "compression check needs at least one replication");
  require(config.n >= config.d + 2, "compression check requires n - d >= 2");
  const double lambda = config.lambda.value_or(compression_lambda(config.n, config.d, config.delta));
  // Validates n, d and the cap once before any work starts.
  const SubsetRange subsets = enumerate_subsets(config.n, config.d);
  const Trainer trainer = subset_mean_trainer();

  std::vector<double> excess(config.replications, 0.0);
  std::vector<unsigned char> failed(config.replications, 0);
  parallel_for(config.replications, config.threads, [&](std::size_t rep) {
    Rng rng = make_rng(config.master_seed, rep);
    Dataset data;
    for (double y : draw_labels(config.labels, config.n, rng)) data.push_back(Example{{}, y});

    const CompressionSelection chosen = compress_select(data, trainer, config.d, lambda);
    auto prediction = [&](const std::vector<std::size_t>& subset) {
      double sum = 0.0;
      for (std::size_t i : subset) sum += data[i].label;
      return sum / static_cast<double>(subset.size());
    };
    double best_risk = std::numeric_limits<double>::infinity();
    double best_prediction = 0.0;
    for (const auto& subset : subsets) {
      const double c = prediction(subset);
      const double risk = config.labels.absolute_loss_risk(c);
      if (risk < best_risk) {
        best_risk = risk;
        best_prediction = c;
      }
    }
    const double chosen_risk = config.labels.absolute_loss_risk(prediction(chosen.chosen_subset));
    const double bound = compression_excess_bound(
        config.n, config.d, config.delta, config.labels.absolute_loss_variance(best_prediction));
    excess[rep] = chosen_risk - best_risk;
    failed[rep] = excess[rep] > bound ? 1 : 0;
  });

  std::size_t failures = 0;
  double sum = 0.0;
  double max_excess = 0.0;
  for (std::size_t r = 0; r < config.replications; ++r) {
    failures += failed[r];
    sum += excess[r];
    max_excess = std::max(max_excess, excess[r]);
  }
  return CompressionCheck{config.n,
                          config.d,
                          config.delta,
                          lambda,
                          config.replications,
                          failures,
                          sum / static_cast<double>(config.replications),
                          max_excess};
}

}  // namespace ebsvp
