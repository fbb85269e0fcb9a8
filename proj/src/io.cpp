#include "ebsvp/io.hpp"

#include <charconv>
#include <fstream>
#include <vector>

#include <fmt/format.h>

namespace ebsvp {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

LossMatrix read_loss_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (columns == 0 && std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split(line);
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c].empty()) {
        throw InputError(fmt::format("line {}: empty header field in column {}", line_no, c + 1));
      }
    }
    columns = header.size();
  }
  if (columns == 0) throw InputError("loss matrix CSV has no header row");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns) {
      throw InputError(fmt::format("line {}: expected {} values, found {}", line_no, columns,
                                   fields.size()));
    }
    std::vector<double> row(columns);
    for (std::size_t c = 0; c < columns; ++c) {
      const std::string_view f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw InputError(
            fmt::format("line {}, column {}: cannot parse '{}' as a number", line_no, c + 1, f));
      }
      if (!(row[c] >= 0.0 && row[c] <= 1.0)) {
        throw InputError(
            fmt::format("line {}, column {}: value {} is outside [0,1]", line_no, c + 1, f));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("loss matrix CSV has no data rows");
  return LossMatrix::from_rows(rows);
}

LossMatrix read_loss_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return read_loss_matrix_csv(in);
}

std::string format_csv_number(double value) { return fmt::format("{:.12g}", value); }

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_experiment_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  out << kExperimentCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.sample_size << ',' << to_string(r.method) << ',' << format_csv_number(r.lambda) << ','
        << format_csv_number(r.mean_excess_risk) << ',' << r.trials << ',' << r.master_seed << '\n';
  }
}

void write_coverage_csv(std::ostream& out, std::span<const CoverageReport> reports) {
  out << kCoverageCsvHeader << '\n';
  for (const auto& r : reports) {
    out << to_string(r.bound) << ',' << csv_field(r.dist) << ',' << r.n << ','
        << format_csv_number(r.delta) << ',' << r.trials << ',' << r.failures << ','
        << format_csv_number(r.failure_rate) << ',' << format_csv_number(r.stderr_nominal) << '\n';
  }
}

}  // namespace ebsvp
