#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ebsvp/core_stats.hpp"
#include "ebsvp/experiments.hpp"

namespace ebsvp {

/// Malformed or unreadable input data (exit code 1 in the CLI).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss-matrix CSV: header `h0,h1,...`, then one row of K values in [0,1]
/// per example. Blank lines are skipped; CRLF line endings are accepted.
/// Errors carry the offending line and column.
LossMatrix read_loss_matrix_csv(std::istream& in);
LossMatrix read_loss_matrix_csv_file(const std::string& path);

/// 12 significant digits, the precision used for all CSV outputs.
std::string format_csv_number(double value);
/// Quotes the field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

inline constexpr std::string_view kExperimentCsvHeader = "n,method,lambda,mean_excess_risk,trials,seed";
inline constexpr std::string_view kCoverageCsvHeader =
    "bound_kind,dist,n,delta,trials,failures,failure_rate,stderr";

void write_experiment_csv(std::ostream& out, std::span<const ExperimentRecord> records);
void write_coverage_csv(std::ostream& out, std::span<const CoverageReport> reports);

}  // namespace ebsvp
