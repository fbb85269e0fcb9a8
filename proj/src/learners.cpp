#include "ebsvp/learners.hpp"

#include <cmath>
#include <string>

#include "ebsvp/error.hpp"

namespace ebsvp {
namespace {

using detail::require;

// Deterministic regardless of evaluation order: the exact minimum is found
// first, then the smallest index within the tie window is reported.
Selection select_min(std::span<const double> objectives, double lambda) {
  double best = objectives[0];
  for (double v : objectives) {
    if (v < best) best = v;
  }
  Selection sel{0, 0.0, {}, lambda};
  for (std::size_t j = 0; j < objectives.size(); ++j) {
    if (objectives[j] - best <= kTieTolerance) sel.tied_indices.push_back(j);
  }
  sel.index = sel.tied_indices.front();
  sel.objective = objectives[sel.index];
  return sel;
}

// ln(3 M(n) / delta) under the chosen constants.
double certificate_log_term(std::size_t n, double delta, const ClassComplexity& complexity,
                            CertificateMode mode) {
  detail::require_delta(delta);
  if (mode == CertificateMode::FiniteClass) {
    require(complexity.cardinality().has_value(),
            "finite-class certificate requires a finite hypothesis class");
    return std::log(6.0) + complexity.log_cover(n) - std::log(delta);
  }
  return std::log(3.0) + complexity.log_m(n) - std::log(delta);
}

}  // namespace

double svp_objective(std::span<const double> losses, double lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
  const double mean = mean_of(losses);
  if (lambda == 0.0) return mean;
  require(losses.size() >= 2, "variance penalty requires n >= 2");
  const double n = static_cast<double>(losses.size());
  return mean + lambda * std::sqrt(variance_of(losses) / n);
}

double svp_objective(const Sample& s, double lambda) { return svp_objective(s.values(), lambda); }

Selection erm_select(const LossMatrix& m) { return svp_select(m, 0.0); }

Selection svp_select(const LossMatrix& m, double lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
  require(lambda == 0.0 || m.rows() >= 2, "variance penalty requires n >= 2");
  std::vector<double> objectives(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) objectives[j] = svp_objective(m.column(j), lambda);
  return select_min(objectives, lambda);
}

std::vector<Selection> svp_select_many(const LossMatrix& m, std::span<const double> lambdas) {
  bool penalised = false;
  for (double lambda : lambdas) {
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
    penalised = penalised || lambda > 0.0;
  }
  require(!penalised || m.rows() >= 2, "variance penalty requires n >= 2");
  const double n = static_cast<double>(m.rows());
  std::vector<double> means(m.cols());
  std::vector<double> spreads(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    means[j] = mean_of(m.column(j));
    if (penalised) spreads[j] = std::sqrt(variance_of(m.column(j)) / n);
  }
  std::vector<Selection> out;
  std::vector<double> objectives(m.cols());
  for (double lambda : lambdas) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      objectives[j] = lambda == 0.0 ? means[j] : means[j] + lambda * spreads[j];
    }
    out.push_back(select_min(objectives, lambda));
  }
  return out;
}

double svp_lambda_prescription(std::size_t n, double delta, const ClassComplexity& complexity,
                               CertificateMode mode) {
  const double l = certificate_log_term(n, delta, complexity, mode);
  return std::sqrt((mode == CertificateMode::FiniteClass ? 2.0 : 18.0) * l);
}

ExcessRiskCertificate svp_excess_risk_bound(std::size_t n, double delta,
                                            double reference_variance,
                                            const ClassComplexity& complexity,
                                            CertificateMode mode) {
  require(n >= 2, "excess risk certificate requires n >= 2");
  require(std::isfinite(reference_variance) && reference_variance >= 0.0,
          "reference variance must be finite and >= 0");
  const double l = certificate_log_term(n, delta, complexity, mode);
  const double nd = static_cast<double>(n);
  double bound = 0.0;
  if (mode == CertificateMode::FiniteClass) {
    bound = std::sqrt(8.0 * reference_variance * l / nd) + 14.0 * l / (3.0 * (nd - 1.0));
  } else {
    bound = std::sqrt(32.0 * reference_variance * l / nd) + 22.0 * l / (nd - 1.0);
  }
  return ExcessRiskCertificate{bound, delta, svp_lambda_prescription(n, delta, complexity, mode),
                               reference_variance, n};
}

}  // namespace ebsvp
