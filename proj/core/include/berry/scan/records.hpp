#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace berry::scan {

using Cell = std::variant<double, long long, std::string>;

// Homogeneous tabular records with a fixed, documented column order.
struct RecordSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// Reals serialized with 17 significant digits (lossless round-trip).
std::string format_cell(const Cell& cell);

std::string to_csv(const RecordSet& records);
// JSON array of objects, keys in column order.
std::string to_json(const RecordSet& records);
// gnuplot-compatible: whitespace-separated columns, '#' header line.
std::string to_dat(const RecordSet& records);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// FNV-1a 64-bit, hex-encoded; used for manifest checksums.
std::string fnv1a_hex(const std::string& data);

}  // namespace berry::scan
