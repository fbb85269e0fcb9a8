#include "ebsvp/cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "ebsvp/bounds.hpp"
#include "ebsvp/compression.hpp"
#include "ebsvp/error.hpp"
#include "ebsvp/experiments.hpp"
#include "ebsvp/io.hpp"
#include "ebsvp/learners.hpp"

namespace ebsvp::cli {
namespace {

using detail::require;
using nlohmann::json;

// Human-readable numbers: 6 significant digits, trailing zeros kept.
std::string text_number(double v) { return fmt::format("{:#.6g}", v); }

void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw InputError("failed writing '" + path + "'");
}

struct SeedOptions {
  std::uint64_t seed = kDefaultSeed;
  bool entropy = false;

  void add_to(CLI::App& app) {
    app.add_option("--seed", seed, "Master seed (default is a fixed constant)");
    app.add_flag("--entropy", entropy, "Draw the master seed from std::random_device");
  }
  std::uint64_t resolve(std::ostream& err) const {
    if (!entropy) return seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed " << s << '\n';
    return s;
  }
};

// --- bound ---------------------------------------------------------------------

struct BoundArgs {
  std::string kind;
  std::size_t n = 0;
  std::optional<double> delta;
  std::optional<double> sample_variance;
  std::optional<double> variance;
  std::optional<std::uint64_t> cardinality;
  std::optional<double> log_cover;
  std::optional<double> deviation;
  std::optional<double> expected_variance;
  std::string format = "text";
};

const std::vector<std::string> kBoundKinds{
    "hoeffding",
    "hoeffding-finite-class",
    "bennett",
    "empirical-bernstein",
    "empirical-bernstein-finite-class",
    "empirical-bernstein-uniform",
    "stdev-upper",
    "stdev-lower",
    "variance-lower-tail",
    "variance-upper-tail",
};

template <typename T>
T need(const std::optional<T>& value, const std::string& kind, const char* flag) {
  require(value.has_value(), kind + " requires " + flag);
  return *value;
}

int run_bound(const BoundArgs& a, std::ostream& out) {
  const std::string& k = a.kind;
  if (k == "variance-lower-tail" || k == "variance-upper-tail") {
    const double s = need(a.deviation, k, "--s");
    const double ev = need(a.expected_variance, k, "--expected-variance");
    const double p = k == "variance-lower-tail" ? variance_lower_tail_prob(a.n, s, ev)
                                                : variance_upper_tail_prob(a.n, s, ev);
    if (a.format == "json") {
      out << json{{"kind", k}, {"n", a.n}, {"s", s}, {"expected_variance", ev}, {"probability", p}}
                 .dump()
          << '\n';
    } else {
      out << "kind " << k << "\nn " << a.n << "\nprobability " << text_number(p) << '\n';
    }
    return kExitOk;
  }

  const double delta = need(a.delta, k, "--delta");
  ConfidenceRadius r{};
  if (k == "hoeffding") {
    r = hoeffding_radius(a.n, delta);
  } else if (k == "hoeffding-finite-class") {
    r = hoeffding_finite_class_radius(a.n, delta, need(a.cardinality, k, "--cardinality"));
  } else if (k == "bennett") {
    r = bennett_radius(a.n, delta, need(a.variance, k, "--variance"));
  } else if (k == "empirical-bernstein") {
    r = empirical_bernstein_radius(a.n, delta, need(a.sample_variance, k, "--sample-variance"));
  } else if (k == "empirical-bernstein-finite-class") {
    r = empirical_bernstein_finite_class_radius(a.n, delta,
                                                need(a.sample_variance, k, "--sample-variance"),
                                                need(a.cardinality, k, "--cardinality"));
  } else if (k == "empirical-bernstein-uniform") {
    require(!(a.cardinality && a.log_cover), "pass either --cardinality or --log-cover, not both");
    const ClassComplexity complexity =
        a.cardinality ? ClassComplexity::finite(*a.cardinality)
                      : ClassComplexity::covering(
                            [l = a.log_cover.value_or(0.0)](std::size_t) { return l; });
    r = empirical_bernstein_uniform_radius(a.n, delta,
                                           need(a.sample_variance, k, "--sample-variance"),
                                           complexity);
  } else if (k == "stdev-upper") {
    r = stdev_upper_radius(a.n, delta);
  } else if (k == "stdev-lower") {
    r = stdev_lower_radius(a.n, delta);
  }

  if (a.format == "json") {
    out << json{{"kind", std::string(to_string(r.kind))},
                {"n", r.n},
                {"delta", r.delta},
                {"radius", r.radius}}
               .dump()
        << '\n';
  } else {
    out << "kind " << to_string(r.kind) << "\nn " << r.n << "\ndelta " << text_number(r.delta)
        << "\nradius " << text_number(r.radius) << '\n';
  }
  return kExitOk;
}

// --- select --------------------------------------------------------------------

struct SelectArgs {
  std::string input;
  double lambda = 0.0;
  double delta = 0.05;
  std::string format = "text";
};

int run_select(const SelectArgs& a, std::ostream& out) {
  require(std::isfinite(a.lambda) && a.lambda >= 0.0, "lambda must be finite and >= 0");
  detail::require_delta(a.delta);
  const LossMatrix m = read_loss_matrix_csv_file(a.input);
  const Selection sel = svp_select(m, a.lambda);
  const Sample chosen = column_sample(m, sel.index);
  const double mean = empirical_mean(chosen);

  std::optional<ConfidenceRadius> single;
  std::optional<ConfidenceRadius> uniform;
  if (m.rows() >= 2) {
    const double v = sample_variance(chosen);
    single = empirical_bernstein_radius(m.rows(), a.delta, v);
    uniform = empirical_bernstein_finite_class_radius(m.rows(), a.delta, v, m.cols());
  }

  if (a.format == "json") {
    json j{{"index", sel.index},          {"objective", sel.objective},
           {"tied_indices", sel.tied_indices}, {"lambda", sel.lambda},
           {"n", m.rows()},               {"hypotheses", m.cols()},
           {"empirical_mean", mean},      {"delta", a.delta}};
    j["eb_radius"] = single ? json(single->radius) : json(nullptr);
    j["eb_finite_class_radius"] = uniform ? json(uniform->radius) : json(nullptr);
    out << j.dump() << '\n';
    return kExitOk;
  }
  out << "index " << sel.index << '\n'
      << "objective " << text_number(sel.objective) << '\n'
      << "ties " << fmt::format("{}", fmt::join(sel.tied_indices, " ")) << '\n'
      << "lambda " << text_number(sel.lambda) << '\n'
      << "empirical_mean " << text_number(mean) << '\n';
  if (single) {
    out << "eb_radius " << text_number(single->radius) << '\n'
        << "eb_finite_class_radius " << text_number(uniform->radius) << '\n';
  } else {
    out << "eb_radius undefined (n < 2)\n";
  }
  return kExitOk;
}

// --- coverage ------------------------------------------------------------------

struct CoverageArgs {
  std::vector<std::string> bounds;
  std::vector<std::string> dists;
  std::vector<std::size_t> sizes;
  std::vector<double> deltas;
  std::size_t trials = 20000;
  SeedOptions seed;
  unsigned threads = 0;
  std::string out;
};

int run_coverage_cmd(const CoverageArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<CoverageBound> bounds;
  if (a.bounds.empty()) {
    bounds = all_coverage_bounds();
  } else {
    for (const auto& b : a.bounds) bounds.push_back(parse_coverage_bound(b));
  }
  std::vector<DistSpec> dists;
  for (const auto& d : a.dists) dists.push_back(DistSpec::parse(d));
  require(a.trials >= 1000, "coverage runs require at least 1000 trials");
  for (double delta : a.deltas) detail::require_delta(delta);
  for (std::size_t n : a.sizes) {
    for (CoverageBound b : bounds) {
      const bool variance_based = b != CoverageBound::Hoeffding && b != CoverageBound::Bennett;
      require(n >= (variance_based ? 2u : 1u),
              std::string(to_string(b)) + " coverage requires n >= " + (variance_based ? "2" : "1"));
    }
  }

  const std::uint64_t seed = a.seed.resolve(err);
  std::vector<CoverageReport> reports;
  for (const auto& d : dists) {
    for (std::size_t n : a.sizes) {
      const auto part = run_coverage_grid(d, bounds, n, a.deltas, a.trials, seed, a.threads);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  }
  with_output(a.out, out, [&](std::ostream& o) { write_coverage_csv(o, reports); });
  return kExitOk;
}

// --- experiment toy / two-hypothesis -------------------------------------------

std::vector<std::size_t> parse_grids(const std::vector<std::string>& specs) {
  std::vector<std::size_t> sizes;
  for (const auto& s : specs) {
    const auto part = parse_size_grid(s);
    sizes.insert(sizes.end(), part.begin(), part.end());
  }
  return sizes;
}

struct ToyArgs {
  double bound = 0.25;
  std::size_t hypotheses = 500;
  std::vector<double> lambdas{2.5};
  std::vector<std::string> sizes{"10:500:10"};
  std::size_t trials = 1000;
  bool full = false;
  SeedOptions seed;
  unsigned threads = 0;
  std::string out;
};

int run_toy_cmd(const ToyArgs& a, std::ostream& out, std::ostream& err) {
  ToyExperimentConfig config;
  config.bound = a.bound;
  config.hypotheses = a.hypotheses;
  config.lambdas = {0.0};
  for (double l : a.lambdas) {
    if (l != 0.0) config.lambdas.push_back(l);
  }
  config.sizes = parse_grids(a.sizes);
  config.trials = a.full ? 10000 : a.trials;
  config.threads = a.threads;
  require(config.bound > 0.0 && config.bound < 0.5, "toy distribution requires 0 < B < 1/2");
  config.master_seed = a.seed.resolve(err);
  const auto result = run_toy_experiment(config);
  with_output(a.out, out, [&](std::ostream& o) { write_experiment_csv(o, result.records); });
  return kExitOk;
}

struct TwoHypothesisArgs {
  std::optional<double> epsilon;
  std::vector<std::string> sizes{"128", "512", "2048"};
  double lambda = 2.5;
  std::size_t trials = 50000;
  SeedOptions seed;
  unsigned threads = 0;
  std::string out;
  std::string misselection_out;
};

int run_two_hypothesis_cmd(const TwoHypothesisArgs& a, std::ostream& out, std::ostream& err) {
  TwoHypothesisConfig config;
  config.epsilon = a.epsilon ? EpsilonRule::constant(*a.epsilon) : EpsilonRule::scaling();
  config.sizes = parse_grids(a.sizes);
  config.lambda = a.lambda;
  config.trials = a.trials;
  config.threads = a.threads;
  config.master_seed = a.seed.resolve(err);
  const auto outcomes = run_two_hypothesis_experiment(config);

  std::vector<ExperimentRecord> records;
  for (const auto& o : outcomes) records.push_back(o.record);
  with_output(a.out, out, [&](std::ostream& o) { write_experiment_csv(o, records); });
  if (!a.misselection_out.empty()) {
    with_output(a.misselection_out, out, [&](std::ostream& o) {
      o << "n,epsilon,method,lambda,misselections,trials,misselection_rate,normal_tail_bound\n";
      for (const auto& r : outcomes) {
        o << r.record.sample_size << ',' << format_csv_number(r.epsilon) << ','
          << to_string(r.record.method) << ',' << format_csv_number(r.record.lambda) << ','
          << r.misselections << ',' << r.record.trials << ','
          << format_csv_number(r.misselection_rate()) << ','
          << format_csv_number(erm_misselection_normal_tail(r.record.sample_size, r.epsilon))
          << '\n';
      }
    });
  }
  return kExitOk;
}

// --- compress-demo ---------------------------------------------------------------

struct CompressArgs {
  std::size_t n = 20;
  std::size_t d = 2;
  double delta = 0.1;
  std::optional<double> lambda;
  std::uint64_t cap = kDefaultSubsetCap;
  double label_low = 0.0;
  double label_high = 1.0;
  std::size_t replications = 0;
  SeedOptions seed;
  unsigned threads = 0;
  std::string out;
};

int run_compress_cmd(const CompressArgs& a, std::ostream& out, std::ostream& err) {
  require(a.label_low >= 0.0 && a.label_high <= 1.0 && a.label_low <= a.label_high,
          "label range must satisfy 0 <= low <= high <= 1");
  const LabelDistribution labels{a.label_low, a.label_high};
  // Checks 1 <= d < n and the enumeration cap before any sampling.
  const std::uint64_t candidates = enumerate_subsets(a.n, a.d, a.cap).size();
  const double lambda = a.lambda.value_or(compression_lambda(a.n, a.d, a.delta));
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
  const std::uint64_t seed = a.seed.resolve(err);

  if (a.replications > 0) {
    CompressionCheckConfig config;
    config.n = a.n;
    config.d = a.d;
    config.delta = a.delta;
    config.lambda = lambda;
    config.labels = labels;
    config.replications = a.replications;
    config.master_seed = seed;
    config.threads = a.threads;
    const CompressionCheck check = run_compression_check(config);
    with_output(a.out, out, [&](std::ostream& o) {
      o << "n,d,delta,lambda,replications,failures,failure_rate,mean_excess_risk,max_excess_risk\n"
        << check.n << ',' << check.d << ',' << format_csv_number(check.delta) << ','
        << format_csv_number(check.lambda) << ',' << check.replications << ',' << check.failures
        << ',' << format_csv_number(check.failure_rate()) << ','
        << format_csv_number(check.mean_excess_risk) << ','
        << format_csv_number(check.max_excess_risk) << '\n';
    });
    return kExitOk;
  }

  Rng rng = make_rng(seed, 0);
  Dataset data;
  for (double y : draw_labels(labels, a.n, rng)) data.push_back(Example{{}, y});
  const CompressionSelection sel = compress_select(data, subset_mean_trainer(), a.d, lambda, a.cap);
  double prediction = 0.0;
  for (std::size_t i : sel.chosen_subset) prediction += data[i].label;
  prediction /= static_cast<double>(sel.chosen_subset.size());
  with_output(a.out, out, [&](std::ostream& o) {
    o << "n " << a.n << "\nd " << a.d << "\ncandidates " << candidates << "\nlambda "
      << text_number(lambda) << "\nchosen_subset " << fmt::format("{}", fmt::join(sel.chosen_subset, " "))
      << "\nobjective " << text_number(sel.objective) << "\ncomplement_mean "
      << text_number(sel.complement_mean) << "\ncomplement_variance "
      << text_number(sel.complement_variance) << "\nprediction " << text_number(prediction)
      << "\nrisk " << text_number(labels.absolute_loss_risk(prediction)) << '\n';
  });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical Bernstein bounds, sample variance penalisation and experiments", "ebsvp"};
  app.require_subcommand(1);

  std::function<int()> action;

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Compute a confidence radius or tail probability");
  bound_cmd->add_option("--kind", bound.kind, "Bound kind")
      ->required()
      ->check(CLI::IsMember(kBoundKinds));
  bound_cmd->add_option("--n", bound.n, "Sample size")->required();
  bound_cmd->add_option("--delta", bound.delta, "Confidence parameter in (0,1)");
  bound_cmd->add_option("--sample-variance", bound.sample_variance, "Observed V_n");
  bound_cmd->add_option("--variance", bound.variance, "True variance (Bennett)");
  bound_cmd->add_option("--cardinality", bound.cardinality, "Finite class size |F|");
  bound_cmd->add_option("--log-cover", bound.log_cover, "Constant ln N_inf(1/n, F, 2n)");
  bound_cmd->add_option("--s", bound.deviation, "Deviation for variance tail kinds");
  bound_cmd->add_option("--expected-variance", bound.expected_variance, "E V_n for tail kinds");
  bound_cmd->add_option("--format", bound.format)->check(CLI::IsMember({"text", "json"}));
  bound_cmd->callback([&] { action = [&] { return run_bound(bound, out); }; });

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select", "Select a hypothesis from a loss-matrix CSV");
  select_cmd->add_option("--input", select.input, "Loss-matrix CSV")->required();
  select_cmd->add_option("--lambda", select.lambda, "Variance penalty (0 = ERM)");
  select_cmd->add_option("--delta", select.delta, "Confidence for the reported radii");
  select_cmd->add_option("--format", select.format)->check(CLI::IsMember({"text", "json"}));
  select_cmd->callback([&] { action = [&] { return run_select(select, out); }; });

  CoverageArgs coverage;
  auto* coverage_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of the bounds");
  coverage_cmd->add_option("--bound", coverage.bounds, "Bound kind (repeatable; default all)")
      ->take_all();
  coverage_cmd->add_option("--dist", coverage.dists, "bernoulli(p), uniform, beta(a,b), toy(a,b)")
      ->required();
  coverage_cmd->add_option("--n", coverage.sizes, "Sample size (repeatable)")->required();
  coverage_cmd->add_option("--delta", coverage.deltas, "Confidence (repeatable)")->required();
  coverage_cmd->add_option("--trials", coverage.trials);
  coverage_cmd->add_option("--threads", coverage.threads, "Worker threads (0 = all cores)");
  coverage_cmd->add_option("--out", coverage.out, "Output CSV (default stdout)");
  coverage.seed.add_to(*coverage_cmd);
  coverage_cmd->callback([&] { action = [&] { return run_coverage_cmd(coverage, out, err); }; });

  auto* experiment_cmd = app.add_subcommand("experiment", "ERM vs SVP experiments");
  experiment_cmd->require_subcommand(1);

  ToyArgs toy;
  auto* toy_cmd = experiment_cmd->add_subcommand("toy", "K coordinate hypotheses a_k +/- b_k");
  toy_cmd->add_option("--B", toy.bound, "Parameter B in (0, 1/2)");
  toy_cmd->add_option("--K", toy.hypotheses, "Number of hypotheses");
  toy_cmd->add_option("--lambda", toy.lambdas, "SVP lambda (repeatable; ERM always included)");
  toy_cmd->add_option("--sizes", toy.sizes, "start:stop:step (repeatable)");
  toy_cmd->add_option("--trials", toy.trials, "Random distributions per size");
  toy_cmd->add_flag("--full", toy.full, "Use 10000 distributions");
  toy_cmd->add_option("--threads", toy.threads, "Worker threads (0 = all cores)");
  toy_cmd->add_option("--out", toy.out, "Output CSV (default stdout)");
  toy.seed.add_to(*toy_cmd);
  toy_cmd->callback([&] { action = [&] { return run_toy_cmd(toy, out, err); }; });

  TwoHypothesisArgs two;
  auto* two_cmd = experiment_cmd->add_subcommand(
      "two-hypothesis", "Constant 1/2 vs Bernoulli(1/2 + eps)");
  two_cmd->add_option("--epsilon", two.epsilon, "Fixed eps (default eps(n) = 1/sqrt(8n))");
  two_cmd->add_option("--sizes", two.sizes, "start:stop:step or n (repeatable)");
  two_cmd->add_option("--lambda", two.lambda);
  two_cmd->add_option("--trials", two.trials);
  two_cmd->add_option("--threads", two.threads, "Worker threads (0 = all cores)");
  two_cmd->add_option("--out", two.out, "Output CSV (default stdout)");
  two_cmd->add_option("--misselection-out", two.misselection_out, "Misselection CSV");
  two.seed.add_to(*two_cmd);
  two_cmd->callback([&] { action = [&] { return run_two_hypothesis_cmd(two, out, err); }; });

  CompressArgs compress;
  auto* compress_cmd = app.add_subcommand("compress-demo", "Variance-penalised sample compression");
  compress_cmd->add_option("--n", compress.n);
  compress_cmd->add_option("--d", compress.d, "Compression set size");
  compress_cmd->add_option("--delta", compress.delta);
  compress_cmd->add_option("--lambda", compress.lambda, "Default sqrt(2 ln(6|C|/delta))");
  compress_cmd->add_option("--cap", compress.cap, "Maximum number of subsets to enumerate");
  compress_cmd->add_option("--label-low", compress.label_low);
  compress_cmd->add_option("--label-high", compress.label_high);
  compress_cmd->add_option("--replications", compress.replications,
                           "Run the bound check over this many datasets");
  compress_cmd->add_option("--threads", compress.threads, "Worker threads (0 = all cores)");
  compress_cmd->add_option("--out", compress.out, "Output file (default stdout)");
  compress.seed.add_to(*compress_cmd);
  compress_cmd->callback([&] { action = [&] { return run_compress_cmd(compress, out, err); }; });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParameter;
  }

  try {
    return action ? action() : kExitParameter;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace ebsvp::cli
