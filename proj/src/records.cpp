#include "sparsity/records.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sparsity/error.hpp"
#include "sparsity/format.hpp"

namespace sparsity {

namespace {

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string config_line(const std::map<std::string, std::string>& config) {
  std::string line = "# config:";
  bool first = true;
  for (const auto& [k, v] : config) {
    line += first ? " " : ";";
    line += k + "=" + v;
    first = false;
  }
  return line;
}

}  // namespace

std::string render_csv_cell(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return fmt_double(x); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

std::string render_json_value(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(std::uint64_t x) const { return std::to_string(x); }
    std::string operator()(double x) const { return std::isfinite(x) ? fmt_double(x) : "null"; }
    std::string operator()(const std::string& s) const { return json_escape(s); }
  };
  return std::visit(Visitor{}, v);
}

void write_records(std::ostream& out, OutputFormat format,
                   const std::map<std::string, std::string>& config,
                   const std::vector<Record>& records) {
  for (const auto& r : records) {
    if (r.fields.size() != records.front().fields.size()) {
      throw std::logic_error("records with different column counts");
    }
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
      if (r.fields[i].first != records.front().fields[i].first) {
        throw std::logic_error("records with different column names");
      }
    }
  }
  if (format == OutputFormat::csv) {
    out << config_line(config) << '\n';
    if (records.empty()) return;
    std::string header;
    for (const auto& [k, v] : records.front().fields) header += (header.empty() ? "" : ",") + k;
    out << header << '\n';
    for (const auto& r : records) {
      std::string row;
      for (std::size_t i = 0; i < r.fields.size(); ++i) {
        const auto cell = render_csv_cell(r.fields[i].second);
        if (cell.find_first_of(",\n\r\"") != std::string::npos) {
          throw std::logic_error("CSV cell needs quoting: " + cell);
        }
        row += (i ? "," : "") + cell;
      }
      out << row << '\n';
    }
    return;
  }
  std::string cfg = "{";
  bool first = true;
  for (const auto& [k, v] : config) {
    cfg += (first ? "" : ",") + json_escape(k) + ":" + json_escape(v);
    first = false;
  }
  cfg += "}";
  for (const auto& r : records) {
    std::string line = "{\"config\":" + cfg;
    for (const auto& [k, v] : r.fields) line += "," + json_escape(k) + ":" + render_json_value(v);
    out << line << "}\n";
  }
}

ParsedOutput parse_output(std::istream& in, OutputFormat format) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find('\r') != std::string::npos) {
    throw Error(ErrorKind::ConfigError, "output contains CR characters");
  }
  ParsedOutput parsed;
  std::vector<std::string> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (format == OutputFormat::csv) {
    if (lines.empty() || lines[0].rfind("# config:", 0) != 0) {
      throw Error(ErrorKind::ConfigError, "CSV output must start with a '# config:' line");
    }
    const auto body = trim(std::string_view(lines[0]).substr(9));
    if (!body.empty()) {
      for (const auto& item : split(body, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "bad config item " + item);
        parsed.config[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    if (lines.size() == 1) return parsed;
    parsed.columns = split(lines[1], ',');
    for (std::size_t i = 2; i < lines.size(); ++i) {
      auto cells = split(lines[i], ',');
      if (cells.size() != parsed.columns.size()) {
        throw Error(ErrorKind::ConfigError, "ragged CSV row " + std::to_string(i + 1));
      }
      parsed.rows.push_back(std::move(cells));
    }
    return parsed;
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(i + 1) + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("config") || !obj["config"].is_object()) {
      throw Error(ErrorKind::ConfigError, "JSONL record without a config object");
    }
    std::map<std::string, std::string> cfg;
    for (const auto& [k, v] : obj["config"].items()) cfg[k] = v.get<std::string>();
    std::vector<std::string> cols, cells;
    for (const auto& [k, v] : obj.items()) {
      if (k == "config") continue;
      cols.push_back(k);
      if (v.is_null()) {
        cells.emplace_back();
      } else if (v.is_boolean()) {
        cells.emplace_back(v.get<bool>() ? "true" : "false");
      } else if (v.is_number_unsigned()) {
        cells.push_back(std::to_string(v.get<std::uint64_t>()));
      } else if (v.is_number_integer()) {
        cells.push_back(std::to_string(v.get<std::int64_t>()));
      } else if (v.is_number_float()) {
        cells.push_back(fmt_double(v.get<double>()));
      } else if (v.is_string()) {
        cells.push_back(v.get<std::string>());
      } else {
        throw Error(ErrorKind::ConfigError, "unsupported JSON value for key " + k);
      }
    }
    if (i == 0) {
      parsed.config = cfg;
      parsed.columns = cols;
    } else if (cfg != parsed.config || cols != parsed.columns) {
      throw Error(ErrorKind::ConfigError, "JSONL line " + std::to_string(i + 1) +
                                              " disagrees with the first line's keys or config");
    }
    parsed.rows.push_back(std::move(cells));
  }
  return parsed;
}

bool round_trips(OutputFormat format, const std::map<std::string, std::string>& config,
                 const std::vector<Record>& records) {
  std::stringstream ss;
  write_records(ss, format, config, records);
  const auto parsed = parse_output(ss, format);
  if (parsed.config != config || parsed.rows.size() != records.size()) return false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& fields = records[i].fields;
    if (parsed.rows[i].size() != fields.size()) return false;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (parsed.columns[j] != fields[j].first) return false;
      const auto& v = fields[j].second;
      std::string expected = render_csv_cell(v);
      if (const auto* d = std::get_if<double>(&v); d && !std::isfinite(*d) &&
                                                   format == OutputFormat::jsonl) {
        expected.clear();
      }
      if (parsed.rows[i][j] != expected) return false;
    }
  }
  return true;
}

}  // namespace sparsity
