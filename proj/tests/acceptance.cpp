// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ebsvp/cli.hpp"
#include "ebsvp/core_stats.hpp"
#include "ebsvp/experiments.hpp"
#include "ebsvp/random.hpp"

using namespace ebsvp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome{false, ""};
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string timing = fmt::format("{:.2f}s", seconds);
  if (budget_seconds > 0.0 && seconds > budget_seconds) {
    timing += fmt::format(" over {:.0f}s budget", budget_seconds);
    outcome.pass = false;
  }
  if (!outcome.pass) ++failures;
  fmt::print("{} criterion {}: {} [{}] {}\n", outcome.pass ? "PASS" : "FAIL", id, title, timing,
             outcome.detail);
  std::fflush(stdout);
}

std::vector<double> random_unit_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform01(rng);
  return v;
}

// Exact P{B >= k} for B ~ Binomial(n, p).
double binomial_upper_tail(std::size_t n, double p, std::size_t k) {
  double total = 0.0;
  for (std::size_t j = k; j <= n; ++j) {
    const double nd = static_cast<double>(n);
    const double jd = static_cast<double>(j);
    total += std::exp(std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) +
                      jd * std::log(p) + (nd - jd) * std::log1p(-p));
  }
  return total;
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ebsvp");
  std::ostringstream out;
  std::ostringstream err;
  if (cli::run(args, out, err) != 0) throw std::runtime_error("cli failed: " + err.str());
  return out.str();
}

Outcome variance_identity() {
  Rng rng = make_rng(kDefaultSeed, 1);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 199);
    const Sample s(random_unit_vector(rng, n));
    worst = std::max(worst, std::abs(sample_variance(s) - sample_variance_pairwise(s)));
  }
  return {worst <= 1e-12, fmt::format("max |V - V_pair| = {:.3g}", worst)};
}

Outcome moment_inequality() {
  Rng rng = make_rng(kDefaultSeed, 2);
  int violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 49);
    if (!pairwise_moment_inequality_holds(Sample(random_unit_vector(rng, n)))) ++violations;
  }
  return {violations == 0, fmt::format("{} violations in 10000 vectors", violations)};
}

Outcome coverage() {
  const std::vector<DistSpec> dists{DistSpec::bernoulli(0.5), DistSpec::uniform(),
                                    DistSpec::beta(2.0, 5.0)};
  const std::vector<double> deltas{0.01, 0.05, 0.1};
  const auto& bounds = all_coverage_bounds();
  std::size_t cells = 0;
  std::size_t bad = 0;
  double worst_margin = -1.0;
  std::string worst;
  for (const auto& dist : dists) {
    for (std::size_t n : {30u, 100u, 300u}) {
      for (const auto& r : run_coverage_grid(dist, bounds, n, deltas, 20000, kDefaultSeed)) {
        ++cells;
        if (!r.within_threshold()) ++bad;
        const double margin = r.failure_rate - r.threshold();
        if (worst.empty() || margin > worst_margin) {
          worst_margin = margin;
          worst = fmt::format("{} {} n={} delta={} rate={:.4g}", to_string(r.bound), r.dist, r.n,
                              r.delta, r.failure_rate);
        }
      }
    }
  }
  return {bad == 0, fmt::format("{}/{} cells within threshold; tightest: {}", cells - bad, cells,
                                worst)};
}

Outcome toy_ordering() {
  ToyExperimentConfig config;
  config.bound = 0.25;
  config.hypotheses = 500;
  config.lambdas = {0.0, 2.5};
  config.sizes = parse_size_grid("50:500:50");
  config.trials = 1000;
  const auto result = run_toy_experiment(config);
  const std::size_t sizes = config.sizes.size();

  bool ordered = true;
  bool monotone = true;
  std::string detail;
  for (std::size_t s = 0; s < sizes; ++s) {
    const double erm = result.records[2 * s].mean_excess_risk;
    const double svp = result.records[2 * s + 1].mean_excess_risk;
    if (!(svp <= erm)) {
      ordered = false;
      detail += fmt::format(" n={} svp {:.5f} > erm {:.5f};", config.sizes[s], svp, erm);
    }
  }
  // Nonincreasing in n up to three standard errors of the paired difference.
  for (std::size_t method = 0; method < 2; ++method) {
    for (std::size_t s = 0; s + 1 < sizes; ++s) {
      const std::size_t a = 2 * s + method;
      const std::size_t b = 2 * (s + 1) + method;
      double sum = 0.0;
      double sq = 0.0;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const double diff = result.trial_excess(t, b) - result.trial_excess(t, a);
        sum += diff;
        sq += diff * diff;
      }
      const double trials = static_cast<double>(config.trials);
      const double mean = sum / trials;
      const double se = std::sqrt(std::max(0.0, sq / trials - mean * mean) / (trials - 1.0));
      if (mean > 3.0 * se) {
        monotone = false;
        detail += fmt::format(" {} rises from n={} to n={};", method ? "svp" : "erm",
                              config.sizes[s], config.sizes[s + 1]);
      }
    }
  }
  const double first_gap = result.records[0].mean_excess_risk - result.records[1].mean_excess_risk;
  const double last_gap = result.records[2 * sizes - 2].mean_excess_risk -
                          result.records[2 * sizes - 1].mean_excess_risk;
  return {ordered && monotone,
          fmt::format("svp <= erm at all {} sizes: {}; monotone: {}; gap n=50 {:.5f}, n=500 {:.5f}{}",
                      sizes, ordered, monotone, first_gap, last_gap, detail)};
}

Outcome rate_separation() {
  bool pass = true;
  std::string detail;
  TwoHypothesisConfig scaling;
  scaling.sizes = {128, 512, 2048};
  scaling.lambda = 2.5;
  scaling.trials = 50000;
  const auto outcomes = run_two_hypothesis_experiment(scaling);
  for (std::size_t i = 0; i < outcomes.size(); i += 2) {
    const auto& erm = outcomes[i];
    const auto& svp = outcomes[i + 1];
    const std::size_t n = erm.record.sample_size;
    const double rate = erm.misselection_rate();
    const double sigma = std::sqrt(rate * (1.0 - rate) / static_cast<double>(erm.record.trials));
    const double slud = slud_lower_bound(n, 0.5 - erm.epsilon, 0.5 * static_cast<double>(n));
    if (rate < slud - 3.0 * sigma) pass = false;
    if (n == 512 && !(svp.misselection_rate() <= rate / 10.0)) pass = false;
    // ERM misselects exactly when B = #zeros of b exceeds n/2 (ties go to the
    // constant). Exact tails show whether the slud comparison is attainable.
    const double strict = binomial_upper_tail(n, 0.5 - erm.epsilon, n / 2 + 1);
    const double inclusive = binomial_upper_tail(n, 0.5 - erm.epsilon, n / 2);
    detail += fmt::format(
        " n={}: erm {:.4f} (slud {:.4f}; exact P{{B>n/2}} {:.4f}, P{{B>=n/2}} {:.4f}) svp {:.5f};", n,
        rate, slud, strict, inclusive, svp.misselection_rate());
  }

  TwoHypothesisConfig fixed;
  fixed.epsilon = EpsilonRule::constant(0.1);
  fixed.sizes = {100, 200, 400};
  fixed.trials = 50000;
  for (const auto& o : run_two_hypothesis_experiment(fixed)) {
    if (o.record.method != Method::Erm) continue;
    const std::size_t n = o.record.sample_size;
    const double rate = o.misselection_rate();
    const double sigma = std::sqrt(rate * (1.0 - rate) / static_cast<double>(o.record.trials));
    const double bound = erm_misselection_lower_bound(n, 0.1);
    if (rate < bound - 3.0 * sigma) pass = false;
    detail += fmt::format(" eps=0.1 n={}: erm {:.5f} vs exp(-8n eps^2) {:.3g};", n, rate, bound);
  }
  return {pass, detail};
}

Outcome certificate() {
  const std::size_t n = 200;
  const double delta = 0.1;
  bool pass = true;
  std::string detail;
  for (double eps : {1.0 / std::sqrt(8.0 * n), 0.05, 0.1, 0.112, 0.15, 0.25, 1.0 / std::sqrt(8.0)}) {
    const auto check = run_certificate_check(n, delta, eps, 10000, kDefaultSeed);
    if (check.violation_rate() > delta) pass = false;
    detail += fmt::format(" eps={:.4f}: {:.4f};", eps, check.violation_rate());
  }
  const auto any = run_certificate_check(n, delta, 0.1, 1, kDefaultSeed);
  return {pass, fmt::format("bound {:.4f}, lambda {:.3f}, violation rates:{}", any.bound, any.lambda,
                            detail)};
}

Outcome compression() {
  CompressionCheckConfig config;
  config.n = 20;
  config.d = 2;
  config.delta = 0.1;
  config.replications = 5000;
  const auto check = run_compression_check(config);
  return {check.failure_rate() <= config.delta,
          fmt::format("failure rate {:.4f}, mean excess {:.4f}, max excess {:.4f}, lambda {:.3f}",
                      check.failure_rate(), check.mean_excess_risk, check.max_excess_risk,
                      check.lambda)};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"experiment", "toy", "--K", "100", "--sizes", "10:100:30", "--trials", "100", "--seed", "7"},
      {"experiment", "two-hypothesis", "--sizes", "64", "--sizes", "256", "--trials", "5000"},
      {"coverage", "--dist", "beta(2,5)", "--dist", "uniform", "--n", "30", "--delta", "0.05",
       "--trials", "2000"},
      {"compress-demo", "--n", "12", "--d", "2", "--replications", "300"},
  };
  std::size_t identical = 0;
  for (const auto& base : commands) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "1", "2", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--threads", threads});
      outputs.push_back(run_cli(args));
    }
    bool same = true;
    for (const auto& o : outputs) same = same && o == outputs.front();
    identical += same;
  }
  return {identical == commands.size(),
          fmt::format("{}/{} commands byte-identical across reruns and 1/2/8 threads", identical,
                      commands.size())};
}

}  // namespace

int main() {
  criterion(1, "sample variance equals its pairwise form", 1.0, variance_identity);
  criterion(2, "pairwise moment inequality on random vectors", 5.0, moment_inequality);
  criterion(3, "coverage of every bound", 120.0, coverage);
  criterion(4, "toy experiment: SVP below ERM, decreasing in n", 0.0, toy_ordering);
  criterion(5, "two-hypothesis rate separation", 120.0, rate_separation);
  criterion(6, "excess-risk certificate validity", 60.0, certificate);
  criterion(7, "compression bound validity", 60.0, compression);
  criterion(8, "determinism across reruns and thread counts", 0.0, determinism);
  fmt::print("{} of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
