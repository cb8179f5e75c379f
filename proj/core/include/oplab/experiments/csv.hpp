#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace oplab::experiments {

// printf "%.12g"; the fixed float format of every CSV this library writes.
std::string format_real(double value);

// Comma-separated text with a fixed header. Fields must not contain commas,
// quotes or newlines.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  const std::vector<std::string>& header() const { return header_; }
  const std::string& str() const { return text_; }

 private:
  std::vector<std::string> header_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a column; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

enum class ColumnType { Integer, Real, Text, OptionalInteger, OptionalReal };

using CsvSchema = std::vector<std::pair<std::string, ColumnType>>;

CsvSchema tradeoff_schema();
CsvSchema error_curve_schema();
CsvSchema control_schema();
CsvSchema ctrace_log_schema();

// Throws std::invalid_argument naming the first row and column that break the
// schema (header mismatch, wrong field count, unparsable value).
void validate_csv(std::string_view text, const CsvSchema& schema);

}  // namespace oplab::experiments
