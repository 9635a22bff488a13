#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace berry::scan {

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  enum class Spacing { Linear, Log } spacing = Spacing::Linear;

  std::vector<double> values() const;
};

// Fully resolved scan configuration. Accepted on disk either as sectioned
// key = value text or as JSON with the same dotted keys nested as objects.
struct ScanConfig {
  std::string subcommand;

  // family selection ("two-level-real", "spin-half", "xy-qubit(k)") or a
  // matrix-expression file.
  std::string family = "spin-half";
  std::string family_file;

  int modes = 101;  // M; the chain has N = 2M+1 sites
  int band = 0;
  int workers = 1;

  double tol = 1e-9;
  double region_tol = 1e-12;

  // Scalar parameters for single-point subcommands.
  double lambda = 0.0;
  double gamma = 1.0;

  // grid.<axis>.{start,stop,count,spacing}
  std::map<std::string, GridSpec> grids;

  // Schedules for `scaling` and `detect-qpt`.
  std::vector<int> M_schedule;
  std::vector<double> gamma_schedule;
  std::vector<double> radii;

  // Geometry for wilson / curvature / stone-bisect / detect-qpt.
  std::vector<double> center;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  double radius = 1.0;
  int axis_u = 0;
  int axis_v = 1;
  int mu = 0;
  int nu = 1;
  double plaquette_h = 1e-3;
  double stop_diameter = 1e-4;
  int surface_loops = 33;

  // Shrinking-loop verdict thresholds (detect-qpt).
  double detect_phase_tol = 0.1;
  double detect_spread_tol = 0.02;
  double detect_tail_fraction = 0.5;

  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};
};

// Parses key = value text (with optional [section] headers contributing a
// dotted prefix) or JSON (detected by a leading '{'). A manifest.json is
// also accepted: its embedded "config" object is used. Unknown keys and
// out-of-range values throw ConfigError with the field path.
ScanConfig parse_config(const std::string& text);

ScanConfig load_config_file(const std::string& path);

// Serializes a config to JSON with stable key order (manifest embedding and
// byte-identical reruns rely on this).
std::string config_to_json(const ScanConfig& config);

void validate(const ScanConfig& config);

}  // namespace berry::scan
