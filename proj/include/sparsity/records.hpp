#pragma once

// Run records and their two file formats. Writers are hand-rolled so the
// byte layout is fixed: keys in insertion order, doubles with 17 significant
// digits, LF line endings.
//
// CSV:   "# config: k=v;k=v..." line, header row, one row per record.
// JSONL: one object per record, {"config": {...}, <fields in order>}.
// Lists inside a CSV cell are space separated; no cell contains a comma.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sparsity {

/// monostate renders as an empty CSV cell and JSON null.
using Value = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string key, Value v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
};

enum class OutputFormat { csv, jsonl };

std::string render_csv_cell(const Value& v);
std::string render_json_value(const Value& v);

/// Every record must have the same keys in the same order.
void write_records(std::ostream& out, OutputFormat format,
                   const std::map<std::string, std::string>& config,
                   const std::vector<Record>& records);

struct ParsedOutput {
  std::map<std::string, std::string> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells rendered as CSV text
};

/// Parses either format back into rows of cell strings; JSON values are
/// re-rendered with the CSV cell convention so both formats compare equal.
/// Throws ConfigError on schema violations (missing header, ragged rows,
/// key mismatch between lines, CR characters).
ParsedOutput parse_output(std::istream& in, OutputFormat format);

/// Writes the records, parses them back and compares cell by cell.
bool round_trips(OutputFormat format, const std::map<std::string, std::string>& config,
                 const std::vector<Record>& records);

}  // namespace sparsity
