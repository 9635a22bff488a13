#pragma once

#include <string>
#include <vector>

#include "berry/scan/config.hpp"
#include "berry/scan/records.hpp"

namespace berry::scan {

inline constexpr const char* kToolVersion = "0.1.0";

struct DitherEntry {
  long long record_index;
  std::string parameter;
  double original;
  double perturbed;
};

struct ScanResult {
  RecordSet records;
  std::vector<DitherEntry> dither_log;
  std::vector<std::string> summary;  // human-readable result lines
  int failed_records = 0;
};

// Runs the configured subcommand. Grid points are dispatched to a worker
// pool; records come back in grid order regardless of worker count.
ScanResult run_scan(const ScanConfig& config);

// Runs and writes <out_dir>/records.{csv,json,dat} per config.formats plus
// manifest.json (written last). Returns the process exit code contract:
// 0 all records succeeded, 1 some record failed.
int run_scan_to_files(const ScanConfig& config);

}  // namespace berry::scan
