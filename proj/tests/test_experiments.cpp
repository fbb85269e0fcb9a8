#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "ebsvp/error.hpp"
#include "ebsvp/experiments.hpp"
#include "ebsvp/io.hpp"
#include "ebsvp/learners.hpp"
#include "ebsvp/parallel.hpp"
#include "ebsvp/random.hpp"

using namespace ebsvp;

TEST_CASE("normal tail values") {
  CHECK(normal_upper_tail(0.0) == 0.5);
  CHECK(slud_lower_bound(100, 0.4, 40.0) == 0.5);
  CHECK(slud_lower_bound(100, 0.4, 50.0) == doctest::Approx(0.0206134166685818).epsilon(1e-10));
  CHECK(normal_upper_tail(2.04124145231932) == doctest::Approx(0.0206134166685818).epsilon(1e-10));
  CHECK(erm_misselection_normal_tail(512, 1.0 / 64.0) ==
        doctest::Approx(0.239642722311320).epsilon(1e-10));
  CHECK_THROWS_AS(slud_lower_bound(100, 0.6, 50.0), ParameterError);
  CHECK_THROWS_AS(slud_lower_bound(100, 0.4, 39.0), ParameterError);
  CHECK_THROWS_AS(slud_lower_bound(100, 0.4, 61.0), ParameterError);
}

TEST_CASE("ERM misselection lower bound") {
  CHECK(erm_misselection_lower_bound(100, 0.1) == doctest::Approx(3.35462627902512e-4).epsilon(1e-12));
  CHECK(erm_misselection_lower_bound(400, 0.1) == doctest::Approx(1.26641655490942e-14).epsilon(1e-12));
  CHECK_THROWS_AS(erm_misselection_lower_bound(99, 0.1), ParameterError);
  CHECK_THROWS_AS(erm_misselection_lower_bound(1000, 0.5), ParameterError);
  CHECK_NOTHROW(erm_misselection_normal_tail(10, 0.1));
}

TEST_CASE("slud bound holds against binomial simulation") {
  struct Case {
    std::uint64_t n;
    double p;
    double t;
  };
  const std::vector<Case> cases{{20, 0.5, 10},  {50, 0.3, 17},   {100, 0.4, 45},
                                {200, 0.25, 60}, {512, 0.484375, 256}, {30, 0.2, 12.5}};
  for (const auto& c : cases) {
    Rng rng = make_rng(41, c.n);
    std::binomial_distribution<std::uint64_t> binomial(c.n, c.p);
    const int trials = 40000;
    int at_least = 0;
    for (int i = 0; i < trials; ++i) at_least += static_cast<double>(binomial(rng)) >= c.t;
    const double rate = static_cast<double>(at_least) / trials;
    const double sigma = std::sqrt(rate * (1.0 - rate) / trials);
    CAPTURE(c.n);
    CHECK(slud_lower_bound(c.n, c.p, c.t) <= rate + 3.0 * sigma);
  }
}

TEST_CASE("the strict binomial tail can fall below the slud bound") {
  // B ~ Binomial(20, 1/2): P{B > 10} = (1 - P{B = 10}) / 2 < 1/2 = bound at t = np.
  double p10 = 1.0;
  for (int k = 1; k <= 10; ++k) p10 *= static_cast<double>(10 + k) / k;
  p10 /= std::pow(2.0, 20);
  CHECK((1.0 - p10) / 2.0 < slud_lower_bound(20, 0.5, 10.0));
}

TEST_CASE("size grids") {
  CHECK(parse_size_grid("50:500:50").size() == 10);
  CHECK(parse_size_grid("10:500:10").back() == 500);
  CHECK(parse_size_grid("7") == std::vector<std::size_t>{7});
  CHECK_THROWS_AS(parse_size_grid("0"), ParameterError);
  CHECK_THROWS_AS(parse_size_grid("5:1:1"), ParameterError);
  CHECK_THROWS_AS(parse_size_grid("1:5"), ParameterError);
  CHECK_THROWS_AS(parse_size_grid("a:b:c"), ParameterError);
}

TEST_CASE("seed derivation and parallel_for") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  for (unsigned threads : {1u, 2u, 7u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  }
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 4) throw ParameterError("boom");
                               }),
                  ParameterError);
}

TEST_CASE("toy distribution and samples") {
  Rng rng = make_rng(51, 0);
  const auto dist = generate_toy_distribution(0.25, 50, rng);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(dist.means[k] >= 0.25);
    CHECK(dist.means[k] <= 0.75);
    CHECK(dist.stdevs[k] >= 0.0);
    CHECK(dist.stdevs[k] <= 0.25);
  }
  const LossMatrix m = sample_toy(dist, 40, rng);
  for (std::size_t k = 0; k < 50; ++k) {
    for (std::size_t i = 0; i < 40; ++i) {
      const double d = std::abs(m(i, k) - dist.means[k]);
      CHECK(d == doctest::Approx(dist.stdevs[k]).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(generate_toy_distribution(0.5, 10, rng), ParameterError);
}

TEST_CASE("toy experiment is identical across thread counts") {
  ToyExperimentConfig config;
  config.hypotheses = 40;
  config.sizes = {10, 40};
  config.trials = 30;
  config.threads = 1;
  const auto serial = run_toy_experiment(config);
  config.threads = 4;
  const auto parallel = run_toy_experiment(config);
  CHECK(serial.records == parallel.records);
  CHECK(serial.excess == parallel.excess);
  REQUIRE(serial.records.size() == 4);
  CHECK(serial.records[0].method == Method::Erm);
  CHECK(serial.records[1].method == Method::Svp);
  for (const auto& r : serial.records) CHECK(r.mean_excess_risk >= 0.0);
}

TEST_CASE("noiseless toy problems are solved exactly") {
  // With B tiny all b_k are tiny but nonzero; use the sampler directly with b = 0.
  ToyDistribution dist{0.25, {0.6, 0.3, 0.5}, {0.0, 0.0, 0.0}};
  Rng rng = make_rng(52, 0);
  const LossMatrix m = sample_toy(dist, 3, rng);
  CHECK(erm_select(m).index == 1);
  CHECK(svp_select(m, 2.5).index == 1);
}

TEST_CASE("two-hypothesis task") {
  const TwoHypothesisTask task(0.1, 200);
  Rng rng = make_rng(61, 0);
  const LossMatrix m = task.sample(rng);
  CHECK(m.cols() == 2);
  CHECK(svp_objective(m.column(0), 2.5) == 0.5);
  for (double v : m.column(1)) CHECK((v == 0.0 || v == 1.0));

  TwoHypothesisConfig config;
  config.sizes = {64, 256};
  config.trials = 2000;
  config.threads = 1;
  const auto serial = run_two_hypothesis_experiment(config);
  config.threads = 3;
  const auto parallel = run_two_hypothesis_experiment(config);
  REQUIRE(serial.size() == 4);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].record == parallel[i].record);
    CHECK(serial[i].misselections == parallel[i].misselections);
  }
  CHECK(serial[0].record.method == Method::Erm);
  CHECK(serial[1].record.method == Method::Svp);
  CHECK(serial[1].misselections < serial[0].misselections);
  // Excess risk is eps times the misselection rate.
  CHECK(serial[0].record.mean_excess_risk ==
        doctest::Approx(serial[0].epsilon * serial[0].misselection_rate()));
}

TEST_CASE("large fixed epsilon drives both excess risks to zero") {
  TwoHypothesisConfig config;
  config.epsilon = EpsilonRule::constant(0.25);
  config.sizes = {400};
  config.trials = 2000;
  for (const auto& outcome : run_two_hypothesis_experiment(config)) {
    CHECK(outcome.misselections == 0);
  }
  CHECK_THROWS_AS(EpsilonRule::constant(0.4), ParameterError);
}

TEST_CASE("coverage on a point mass never fails") {
  const auto dist = DistSpec::toy_coordinate(0.3, 0.0);
  const auto report = run_coverage(dist, CoverageBound::EmpiricalBernstein, 20, 0.05, 1000, 7);
  CHECK(report.failures == 0);
  CHECK(report.within_threshold());
  CHECK_THROWS_AS(run_coverage(dist, CoverageBound::Hoeffding, 20, 0.05, 999, 7), ParameterError);
}

TEST_CASE("coverage grid matches individual runs") {
  const auto dist = DistSpec::bernoulli(0.5);
  const std::vector<CoverageBound> bounds{CoverageBound::Hoeffding, CoverageBound::EmpiricalBernstein,
                                          CoverageBound::VarianceUpperTail};
  const std::vector<double> deltas{0.05, 0.5};
  const auto grid = run_coverage_grid(dist, bounds, 30, deltas, 2000, 5, 2);
  REQUIRE(grid.size() == 6);
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      const auto single = run_coverage(dist, bounds[b], 30, deltas[d], 2000, 5, 1);
      CHECK(grid[b * deltas.size() + d].failures == single.failures);
      CHECK(single.within_threshold());
    }
  }
}

TEST_CASE("distribution specs") {
  CHECK(DistSpec::parse("bernoulli(0.5)").mean() == 0.5);
  CHECK(DistSpec::parse("uniform").variance() == doctest::Approx(1.0 / 12.0));
  CHECK(DistSpec::parse("beta(2,5)").kind() == DistSpec::Kind::Beta);
  CHECK(DistSpec::parse("toy(0.4,0.1)").variance() == doctest::Approx(0.01));
  CHECK_THROWS_AS(DistSpec::parse("gauss(0,1)"), ParameterError);
  CHECK_THROWS_AS(DistSpec::parse("bernoulli(2)"), ParameterError);
  CHECK_THROWS_AS(DistSpec::parse("beta(2)"), ParameterError);
  CHECK(parse_coverage_bound("stdev-lower") == CoverageBound::StdevLower);
  CHECK_THROWS_AS(parse_coverage_bound("chernoff"), ParameterError);
}

TEST_CASE("certificate check on the two-hypothesis task") {
  const auto check = run_certificate_check(200, 0.1, 0.1, 2000, 3);
  CHECK(check.bound == doctest::Approx(14.0 * std::log(120.0) / (3.0 * 199.0)).epsilon(1e-12));
  CHECK(check.violation_rate() <= 0.1);
}

TEST_CASE("compression check is reproducible and within its bound") {
  CompressionCheckConfig config;
  config.n = 12;
  config.d = 2;
  config.replications = 200;
  config.threads = 1;
  const auto serial = run_compression_check(config);
  config.threads = 3;
  const auto parallel = run_compression_check(config);
  CHECK(serial.failures == parallel.failures);
  CHECK(serial.mean_excess_risk == parallel.mean_excess_risk);
  CHECK(serial.failure_rate() <= 0.1);
  CHECK(serial.mean_excess_risk >= 0.0);
}

TEST_CASE("label distribution risk") {
  const LabelDistribution labels{0.0, 1.0};
  CHECK(labels.absolute_loss_risk(0.5) == doctest::Approx(0.25));
  CHECK(labels.absolute_loss_risk(0.0) == doctest::Approx(0.5));
  CHECK(labels.absolute_loss_variance(0.5) == doctest::Approx(1.0 / 48.0));
  CHECK(labels.absolute_loss_variance(0.0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("experiment CSV output") {
  std::vector<ExperimentRecord> records{{50, Method::Erm, 0.0, 0.0123456789012345, 1000, 7},
                                        {50, Method::Svp, 2.5, 0.01, 1000, 7}};
  std::ostringstream out;
  write_experiment_csv(out, records);
  CHECK(out.str() ==
        "n,method,lambda,mean_excess_risk,trials,seed\n"
        "50,erm,0,0.0123456789012,1000,7\n"
        "50,svp,2.5,0.01,1000,7\n");
}
