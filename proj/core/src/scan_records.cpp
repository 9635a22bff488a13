#include "berry/scan/records.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace berry::scan {

void RecordSet::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("RecordSet: row width " +
                                std::to_string(row.size()) +
                                " != column count " +
                                std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) {
    return std::to_string(*i);
  }
  return std::get<std::string>(cell);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string json_cell(const Cell& cell) {
  if (std::holds_alternative<std::string>(cell)) {
    return json_escape(std::get<std::string>(cell));
  }
  return format_cell(cell);
}

}  // namespace

std::string to_csv(const RecordSet& records) {
  std::ostringstream out;
  for (std::size_t c = 0; c < records.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(records.columns[c]);
  }
  out << '\n';
  for (const auto& row : records.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_escape(format_cell(row[c]));
    }
    out << '\n';
  }
  return out.str();
}

std::string to_json(const RecordSet& records) {
  std::ostringstream out;
  out << "[\n";
  for (std::size_t r = 0; r < records.rows.size(); ++r) {
    out << "  {";
    for (std::size_t c = 0; c < records.columns.size(); ++c) {
      if (c) out << ", ";
      out << json_escape(records.columns[c]) << ": "
          << json_cell(records.rows[r][c]);
    }
    out << (r + 1 < records.rows.size() ? "},\n" : "}\n");
  }
  out << "]\n";
  return out.str();
}

std::string to_dat(const RecordSet& records) {
  std::ostringstream out;
  out << '#';
  for (const auto& column : records.columns) out << ' ' << column;
  out << '\n';
  for (const auto& row : records.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ' ';
      std::string cell = format_cell(row[c]);
      if (cell.empty()) cell = "-";
      for (char& ch : cell) {
        if (ch == ' ') ch = '_';
      }
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for write");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace berry::scan
