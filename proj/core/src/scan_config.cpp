#include "berry/scan/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "berry/errors.hpp"

namespace berry::scan {

using json = nlohmann::ordered_json;

std::vector<double> GridSpec::values() const {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    if (spacing == Spacing::Linear) {
      out.push_back(start + f * (stop - start));
    } else {
      out.push_back(start * std::pow(stop / start, f));
    }
  }
  return out;
}

namespace {

const std::set<std::string> kSubcommands = {
    "xy-phase", "xy-scan", "scaling",      "wilson",
    "curvature", "stone-bisect", "detect-qpt"};

double to_double(const std::string& key, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      std::size_t pos = 0;
      const double d = std::stod(s, &pos);
      if (pos == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(key, "expected a number");
}

long long to_int(const std::string& key, const json& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError(key, "expected an integer");
  return static_cast<long long>(d);
}

std::string to_str(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError(key, "expected a string");
}

std::vector<double> to_double_list(const std::string& key, const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(to_double(key, e));
    return out;
  }
  if (v.is_string()) {
    std::istringstream in(v.get<std::string>());
    std::string item;
    while (std::getline(in, item, ',')) {
      out.push_back(to_double(key, json(item)));
    }
    return out;
  }
  out.push_back(to_double(key, v));
  return out;
}

std::vector<std::string> to_str_list(const std::string& key, const json& v) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(to_str(key, e));
    return out;
  }
  std::istringstream in(to_str(key, v));
  std::string item;
  while (std::getline(in, item, ',')) {
    // trim
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, json>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else {
    out.emplace_back(prefix, node);
  }
}

// Parses "key = value" lines with optional [section] headers; sections
// contribute a dotted key prefix. '#' starts a comment.
std::vector<std::pair<std::string, json>> parse_key_values(
    const std::string& text) {
  std::vector<std::pair<std::string, json>> out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("", "line " + std::to_string(line_no) +
                                  ": unterminated section header");
      }
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) +
                                ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      if (b2 == std::string::npos) return std::string();
      const auto e2 = s.find_last_not_of(" \t");
      return s.substr(b2, e2 - b2 + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    }
    if (!section.empty()) key = section + "." + key;
    out.emplace_back(key, json(value));
  }
  return out;
}

GridSpec& grid_for(ScanConfig& config, const std::string& axis) {
  return config.grids[axis];
}

void apply_key(ScanConfig& c, const std::string& key, const json& v) {
  if (key == "subcommand") {
    c.subcommand = to_str(key, v);
  } else if (key == "family") {
    c.family = to_str(key, v);
  } else if (key == "family_file") {
    c.family_file = to_str(key, v);
  } else if (key == "modes") {
    c.modes = static_cast<int>(to_int(key, v));
  } else if (key == "band") {
    c.band = static_cast<int>(to_int(key, v));
  } else if (key == "workers") {
    c.workers = static_cast<int>(to_int(key, v));
  } else if (key == "tol") {
    c.tol = to_double(key, v);
  } else if (key == "region_tol") {
    c.region_tol = to_double(key, v);
  } else if (key == "lambda") {
    c.lambda = to_double(key, v);
  } else if (key == "gamma") {
    c.gamma = to_double(key, v);
  } else if (key.rfind("grid.", 0) == 0) {
    const std::string rest = key.substr(5);
    const std::size_t dot = rest.find('.');
    if (dot == std::string::npos) {
      throw ConfigError(key, "expected grid.<axis>.<field>");
    }
    const std::string axis = rest.substr(0, dot);
    const std::string field = rest.substr(dot + 1);
    GridSpec& grid = grid_for(c, axis);
    if (field == "start") {
      grid.start = to_double(key, v);
    } else if (field == "stop") {
      grid.stop = to_double(key, v);
    } else if (field == "count") {
      grid.count = static_cast<int>(to_int(key, v));
    } else if (field == "spacing") {
      const std::string s = to_str(key, v);
      if (s == "linear") {
        grid.spacing = GridSpec::Spacing::Linear;
      } else if (s == "log") {
        grid.spacing = GridSpec::Spacing::Log;
      } else {
        throw ConfigError(key, "spacing must be 'linear' or 'log'");
      }
    } else {
      throw ConfigError(key, "unknown grid field");
    }
  } else if (key == "schedule.M") {
    c.M_schedule.clear();
    for (double d : to_double_list(key, v)) {
      if (d != std::floor(d)) throw ConfigError(key, "M values must be integers");
      c.M_schedule.push_back(static_cast<int>(d));
    }
  } else if (key == "schedule.gamma") {
    c.gamma_schedule = to_double_list(key, v);
  } else if (key == "schedule.radii") {
    c.radii = to_double_list(key, v);
  } else if (key == "geometry.center") {
    c.center = to_double_list(key, v);
  } else if (key == "geometry.box_lo") {
    c.box_lo = to_double_list(key, v);
  } else if (key == "geometry.box_hi") {
    c.box_hi = to_double_list(key, v);
  } else if (key == "geometry.radius") {
    c.radius = to_double(key, v);
  } else if (key == "geometry.axis_u") {
    c.axis_u = static_cast<int>(to_int(key, v));
  } else if (key == "geometry.axis_v") {
    c.axis_v = static_cast<int>(to_int(key, v));
  } else if (key == "geometry.mu") {
    c.mu = static_cast<int>(to_int(key, v));
  } else if (key == "geometry.nu") {
    c.nu = static_cast<int>(to_int(key, v));
  } else if (key == "geometry.plaquette_h") {
    c.plaquette_h = to_double(key, v);
  } else if (key == "geometry.stop_diameter") {
    c.stop_diameter = to_double(key, v);
  } else if (key == "geometry.surface_loops") {
    c.surface_loops = static_cast<int>(to_int(key, v));
  } else if (key == "detect.phase_tol") {
    c.detect_phase_tol = to_double(key, v);
  } else if (key == "detect.spread_tol") {
    c.detect_spread_tol = to_double(key, v);
  } else if (key == "detect.tail_fraction") {
    c.detect_tail_fraction = to_double(key, v);
  } else if (key == "output.dir") {
    c.out_dir = to_str(key, v);
  } else if (key == "output.formats") {
    c.formats = to_str_list(key, v);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

}  // namespace

void validate(const ScanConfig& c) {
  if (kSubcommands.find(c.subcommand) == kSubcommands.end()) {
    throw ConfigError("subcommand",
                      "unknown subcommand '" + c.subcommand + "'");
  }
  if (c.modes < 1) throw ConfigError("modes", "must be >= 1");
  if (c.band < 0) throw ConfigError("band", "must be >= 0");
  if (c.workers < 1) throw ConfigError("workers", "must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("tol", "must be > 0");
  if (!(c.region_tol > 0.0)) throw ConfigError("region_tol", "must be > 0");
  if (c.gamma < 0.0) throw ConfigError("gamma", "must be >= 0");
  for (const auto& [axis, grid] : c.grids) {
    const std::string prefix = "grid." + axis;
    if (grid.count < 1) throw ConfigError(prefix + ".count", "must be >= 1");
    if (grid.spacing == GridSpec::Spacing::Log &&
        (grid.start <= 0.0 || grid.stop <= 0.0)) {
      throw ConfigError(prefix + ".spacing",
                        "log spacing requires positive endpoints");
    }
    if (axis == "gamma" && (grid.start < 0.0 || grid.stop < 0.0)) {
      throw ConfigError(prefix + ".start", "gamma must be >= 0");
    }
  }
  for (double g : c.gamma_schedule) {
    if (g < 0.0) throw ConfigError("schedule.gamma", "gamma must be >= 0");
  }
  for (int m : c.M_schedule) {
    if (m < 1) throw ConfigError("schedule.M", "M must be >= 1");
  }
  for (double r : c.radii) {
    if (!(r > 0.0)) throw ConfigError("schedule.radii", "radii must be > 0");
  }
  for (const std::string& f : c.formats) {
    if (f != "csv" && f != "json" && f != "dat") {
      throw ConfigError("output.formats", "unknown format '" + f + "'");
    }
  }
}

ScanConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, json>> entries;
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json root;
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("bad JSON: ") + e.what());
    }
    // A manifest embeds the config under "config".
    if (root.contains("config") && root["config"].is_object()) {
      root = root["config"];
    }
    flatten(root, "", entries);
  } else {
    entries = parse_key_values(text);
  }
  ScanConfig config;
  for (const auto& [key, value] : entries) apply_key(config, key, value);
  validate(config);
  return config;
}

ScanConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

json double_list(const std::vector<double>& v) {
  json arr = json::array();
  for (double d : v) arr.push_back(d);
  return arr;
}

}  // namespace

std::string config_to_json(const ScanConfig& c) {
  json root;
  root["subcommand"] = c.subcommand;
  root["family"] = c.family;
  if (!c.family_file.empty()) root["family_file"] = c.family_file;
  root["modes"] = c.modes;
  root["band"] = c.band;
  root["workers"] = c.workers;
  root["tol"] = c.tol;
  root["region_tol"] = c.region_tol;
  root["lambda"] = c.lambda;
  root["gamma"] = c.gamma;
  if (!c.grids.empty()) {
    json grids;
    for (const auto& [axis, grid] : c.grids) {
      json g;
      g["start"] = grid.start;
      g["stop"] = grid.stop;
      g["count"] = grid.count;
      g["spacing"] =
          grid.spacing == GridSpec::Spacing::Linear ? "linear" : "log";
      grids[axis] = g;
    }
    root["grid"] = grids;
  }
  json schedule;
  if (!c.M_schedule.empty()) {
    json arr = json::array();
    for (int m : c.M_schedule) arr.push_back(m);
    schedule["M"] = arr;
  }
  if (!c.gamma_schedule.empty()) schedule["gamma"] = double_list(c.gamma_schedule);
  if (!c.radii.empty()) schedule["radii"] = double_list(c.radii);
  if (!schedule.empty()) root["schedule"] = schedule;
  json geometry;
  if (!c.center.empty()) geometry["center"] = double_list(c.center);
  if (!c.box_lo.empty()) geometry["box_lo"] = double_list(c.box_lo);
  if (!c.box_hi.empty()) geometry["box_hi"] = double_list(c.box_hi);
  geometry["radius"] = c.radius;
  geometry["axis_u"] = c.axis_u;
  geometry["axis_v"] = c.axis_v;
  geometry["mu"] = c.mu;
  geometry["nu"] = c.nu;
  geometry["plaquette_h"] = c.plaquette_h;
  geometry["stop_diameter"] = c.stop_diameter;
  geometry["surface_loops"] = c.surface_loops;
  root["geometry"] = geometry;
  json output;
  output["dir"] = c.out_dir;
  output["formats"] = c.formats;
  root["output"] = output;
  json detect;
  detect["phase_tol"] = c.detect_phase_tol;
  detect["spread_tol"] = c.detect_spread_tol;
  detect["tail_fraction"] = c.detect_tail_fraction;
  root["detect"] = detect;
  return root.dump(2);
}

}  // namespace berry::scan
