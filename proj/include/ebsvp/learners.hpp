#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ebsvp/bounds.hpp"
#include "ebsvp/core_stats.hpp"

namespace ebsvp {

/// Result of minimising a selection criterion over the columns of a LossMatrix.
struct Selection {
  std::size_t index;
  double objective;
  /// All columns whose objective is within kTieTolerance of the minimum, ascending.
  /// `index` is always the first entry.
  std::vector<std::size_t> tied_indices;
  double lambda;

  friend bool operator==(const Selection&, const Selection&) = default;
};

inline constexpr double kTieTolerance = 1e-12;

/// Empirical mean plus lambda * sqrt(V_n / n). With lambda == 0 this is the
/// empirical mean and n == 1 is accepted.
double svp_objective(const Sample& s, double lambda);
double svp_objective(std::span<const double> losses, double lambda);

/// Empirical risk minimisation: argmin of column means.
Selection erm_select(const LossMatrix& m);

/// Sample variance penalisation: argmin of svp_objective over columns.
/// svp_select(m, 0) is identical to erm_select(m), tie metadata included.
Selection svp_select(const LossMatrix& m, double lambda);

/// svp_select for several lambdas, sharing one pass of column statistics.
/// Element i equals svp_select(m, lambdas[i]).
std::vector<Selection> svp_select_many(const LossMatrix& m, std::span<const double> lambdas);

/// Constants used by the excess-risk certificate.
///
/// CoveringNumber applies to any class with a log-cover function:
///   L = ln(3 M(n) / delta), lambda = sqrt(18 L),
///   bound = sqrt(32 V* L / n) + 22 L / (n-1).
/// FiniteClass replaces the uniform covering bound by the finite-class
/// empirical Bernstein bound (ln M := ln 2|F|):
///   L = ln(6 |F| / delta), lambda = sqrt(2 L),
///   bound = sqrt(8 V* L / n) + 14 L / (3 (n-1)).
enum class CertificateMode { CoveringNumber, FiniteClass };

struct ExcessRiskCertificate {
  double bound;
  double delta;
  double lambda;
  double reference_variance;
  std::size_t n;
};

/// Regularisation strength for which the excess-risk certificate holds.
double svp_lambda_prescription(std::size_t n, double delta, const ClassComplexity& complexity,
                               CertificateMode mode = CertificateMode::CoveringNumber);

/// With probability >= 1 - delta, the risk of svp_select(X, prescribed lambda)
/// exceeds the risk of any fixed reference hypothesis f* by at most `bound`,
/// where reference_variance is the true variance of f*'s loss.
ExcessRiskCertificate svp_excess_risk_bound(std::size_t n, double delta,
                                            double reference_variance,
                                            const ClassComplexity& complexity,
                                            CertificateMode mode = CertificateMode::CoveringNumber);

}  // namespace ebsvp
