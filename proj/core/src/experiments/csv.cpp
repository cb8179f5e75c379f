#include "oplab/experiments/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace oplab::experiments {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) { row(header_); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != header_.size()) throw std::invalid_argument("CsvWriter: wrong number of fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("CsvWriter: field needs quoting: " + fields[i]);
    }
    if (i) text_ += ',';
    text_ += fields[i];
  }
  text_ += '\n';
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("CsvTable: no column " + std::string(name));
}

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parses_integer(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parses_real(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (first) {
      table.header = split(line);
      first = false;
    } else {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

CsvSchema tradeoff_schema() {
  return {{"rule", ColumnType::Text},          {"n", ColumnType::OptionalInteger},
          {"alpha", ColumnType::OptionalReal}, {"lambda", ColumnType::OptionalReal},
          {"contraction_sup", ColumnType::Real}, {"contraction_nu", ColumnType::Real},
          {"bias_l2", ColumnType::Real},       {"root_variance", ColumnType::Real},
          {"seed", ColumnType::Integer},       {"mdp_id", ColumnType::Text}};
}

CsvSchema error_curve_schema() {
  return {{"env_steps", ColumnType::Integer}, {"l2_error", ColumnType::Real}, {"seed", ColumnType::Integer},
          {"rule", ColumnType::Text},         {"param", ColumnType::Real}};
}

CsvSchema control_schema() {
  return {{"round", ColumnType::Integer}, {"env_steps_total", ColumnType::Integer},
          {"suboptimality", ColumnType::Real}, {"rule", ColumnType::Text},
          {"param", ColumnType::Real},    {"seed", ColumnType::Integer}};
}

CsvSchema ctrace_log_schema() {
  return {{"episode", ColumnType::Integer}, {"phi", ColumnType::Real},        {"alpha", ColumnType::Real},
          {"c_hat", ColumnType::Real},      {"exact_c_nu", ColumnType::Real}, {"q_error_inf", ColumnType::Real}};
}

void validate_csv(std::string_view text, const CsvSchema& schema) {
  const CsvTable table = parse_csv(text);
  if (table.header.size() != schema.size()) throw std::invalid_argument("csv: header has wrong column count");
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (table.header[i] != schema[i].first) {
      throw std::invalid_argument("csv: expected column '" + schema[i].first + "', found '" + table.header[i] + "'");
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "csv row " + std::to_string(r + 2);
    if (row.size() != schema.size()) throw std::invalid_argument(where + ": wrong field count");
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const std::string& f = row[i];
      bool ok = true;
      switch (schema[i].second) {
        case ColumnType::Integer: ok = parses_integer(f); break;
        case ColumnType::Real: ok = parses_real(f); break;
        case ColumnType::Text: ok = !f.empty(); break;
        case ColumnType::OptionalInteger: ok = f.empty() || parses_integer(f); break;
        case ColumnType::OptionalReal: ok = f.empty() || parses_real(f); break;
      }
      if (!ok) throw std::invalid_argument(where + ": bad value '" + f + "' in column " + schema[i].first);
    }
  }
}

}  // namespace oplab::experiments
