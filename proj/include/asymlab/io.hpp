#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymlab/errors.hpp"

namespace asymlab {

/// RFC-4180 field quoting: fields holding a comma, quote, CR or LF are
/// wrapped in quotes with inner quotes doubled.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw ConsistencyError("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                             std::to_string(header.size()));
    rows.push_back(std::move(row));
  }
};

/// First line `# config: {...}` carries the run metadata as one-line JSON.
inline std::string render_csv(const CsvTable& t, const nlohmann::json& metadata) {
  std::ostringstream os;
  os << "# config: " << metadata.dump() << "\n";
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_field(fields[i]);
    }
    os << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

/// Parses what render_csv writes. Returns the metadata through `metadata`.
inline CsvTable parse_csv(const std::string& text, nlohmann::json* metadata = nullptr) {
  CsvTable t;
  std::size_t pos = 0;
  const std::string prefix = "# config: ";
  if (text.rfind(prefix, 0) == 0) {
    std::size_t eol = text.find('\n');
    if (metadata) *metadata = nlohmann::json::parse(text.substr(prefix.size(), eol - prefix.size()));
    pos = eol == std::string::npos ? text.size() : eol + 1;
  }
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (quoted) {
      if (ch == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      rec.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(rec));
      rec.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw ConsistencyError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ConsistencyError("csv: missing header");
  t.header = records.front();
  for (std::size_t i = 1; i < records.size(); ++i) t.add(records[i]);
  return t;
}

inline std::string render_json(const nlohmann::json& metadata, const nlohmann::json& data) {
  nlohmann::json doc;
  doc["metadata"] = metadata;
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

/// Writes to `path`, or to stdout when the path is empty or "-".
inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("write failed for '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace asymlab
