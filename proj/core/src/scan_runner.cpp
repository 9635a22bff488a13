#include "berry/scan/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <thread>

#include <json.hpp>

#include "berry/detector.hpp"
#include "berry/errors.hpp"
#include "berry/expression.hpp"

namespace berry::scan {

namespace {

using json = nlohmann::ordered_json;

struct Task {
  std::vector<std::vector<Cell>> rows;  // usually one; empty on hard failure
  std::optional<DitherEntry> dither;
  bool failed = false;
};

// Deterministic worker pool: task i writes slot i, so assembly order is
// independent of scheduling.
template <typename Fn>
std::vector<Task> parallel_map(int n, int workers, Fn fn) {
  std::vector<Task> out(n);
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        out[i] = fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

HamiltonianFamily resolve_family(const ScanConfig& config) {
  if (!config.family_file.empty()) {
    return load_family_file(config.family_file);
  }
  return family_from_id(config.family, config.modes);
}

ParameterPoint resolve_center(const ScanConfig& config, int dim) {
  if (config.center.empty()) return ParameterPoint(dim, 0.0);
  if (static_cast<int>(config.center.size()) != dim) {
    throw ConfigError("geometry.center",
                      "expected " + std::to_string(dim) + " coordinates");
  }
  return config.center;
}

double dither_lambda(double lambda) {
  return lambda + 1e-12 * std::max(1.0, std::abs(lambda));
}

std::string error_text(const std::exception& e) { return e.what(); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- xy-phase

ScanResult run_xy_phase(const ScanConfig& config) {
  ScanResult result;
  result.records.columns = {"k",       "x_k",        "eps_k", "Lambda_k",
                            "cos_theta_k", "phi_k",  "error"};
  const xy::ModeGrid grid(config.modes);

  double lambda = config.lambda;
  xy::ModeSpectrum spectrum =
      xy::dispersion(xy::XYPoint(lambda, config.gamma), grid);
  bool any_undefined = false;
  for (int k = 1; k <= grid.M; ++k) {
    any_undefined = any_undefined || !spectrum.mode_defined(k);
  }
  if (any_undefined) {
    const double perturbed = dither_lambda(lambda);
    result.dither_log.push_back({-1, "lambda", lambda, perturbed});
    lambda = perturbed;
    spectrum = xy::dispersion(xy::XYPoint(lambda, config.gamma), grid);
  }

  for (int k = 1; k <= grid.M; ++k) {
    std::vector<Cell> row{static_cast<long long>(k), spectrum.x[k - 1],
                          spectrum.eps[k - 1], spectrum.lambda_k[k - 1],
                          Cell{}, Cell{}, std::string()};
    if (spectrum.mode_defined(k)) {
      row[4] = spectrum.cos_theta[k - 1];
      row[5] = xy::mode_berry_phase(spectrum, k);
    } else {
      row[4] = std::string();
      row[5] = std::string();
      row[6] = std::string("undefined angle: Lambda_k = 0");
      ++result.failed_records;
    }
    result.records.add_row(std::move(row));
  }

  try {
    const xy::XYPoint point(lambda, config.gamma);
    const double total = xy::total_berry_phase(point, grid);
    result.summary.push_back("phi_total = " +
                             format_cell(Cell{total}));
    result.summary.push_back(
        "phi_mod_2pi = " +
        format_cell(Cell{xy::total_berry_phase_mod(point, grid)}));
    result.summary.push_back("phi_intensive = " +
                             format_cell(Cell{total / grid.M}));
    result.summary.push_back(
        "gap = " + format_cell(Cell{xy::excitation_gap(point, grid)}));
    result.summary.push_back(
        "region = " +
        xy::to_string(xy::classify_region(point, config.region_tol)));
  } catch (const std::exception& e) {
    result.summary.push_back(std::string("summary unavailable: ") + e.what());
  }
  return result;
}

// ----------------------------------------------------------------- xy-scan

ScanResult run_xy_scan(const ScanConfig& config) {
  GridSpec lambda_grid{-2.0, 2.0, 41, GridSpec::Spacing::Linear};
  GridSpec gamma_grid{0.0, 1.0, 21, GridSpec::Spacing::Linear};
  if (auto it = config.grids.find("lambda"); it != config.grids.end()) {
    lambda_grid = it->second;
  }
  if (auto it = config.grids.find("gamma"); it != config.grids.end()) {
    gamma_grid = it->second;
  }
  const std::vector<double> lambdas = lambda_grid.values();
  const std::vector<double> gammas = gamma_grid.values();
  const int n = static_cast<int>(lambdas.size() * gammas.size());
  const int M = config.modes;
  const double region_tol = config.region_tol;

  auto tasks = parallel_map(n, config.workers, [&](int i) {
    const double lambda = lambdas[i / gammas.size()];
    const double gamma = gammas[i % gammas.size()];
    Task task;
    auto compute = [&](double lam) -> std::vector<Cell> {
      const xy::XYPoint point(lam, gamma);
      const xy::ModeGrid grid(M);
      const double total = xy::total_berry_phase(point, grid);
      return {lambda,
              gamma,
              total,
              std::fmod(total, kTwoPi),
              total / M,
              xy::excitation_gap(point, grid),
              xy::to_string(xy::classify_region(point, region_tol)),
              std::string()};
    };
    try {
      task.rows.push_back(compute(lambda));
    } catch (const UndefinedAngleError&) {
      const double perturbed = dither_lambda(lambda);
      task.dither = DitherEntry{i, "lambda", lambda, perturbed};
      try {
        task.rows.push_back(compute(perturbed));
      } catch (const std::exception& e) {
        task.failed = true;
        task.rows.push_back({lambda, gamma, std::string(), std::string(),
                             std::string(), std::string(), std::string(),
                             error_text(e)});
      }
    } catch (const std::exception& e) {
      task.failed = true;
      task.rows.push_back({lambda, gamma, std::string(), std::string(),
                           std::string(), std::string(), std::string(),
                           error_text(e)});
    }
    return task;
  });

  ScanResult result;
  result.records.columns = {"lambda",        "gamma", "phi_total",
                            "phi_mod_2pi",   "phi_intensive",
                            "gap",           "region", "error"};
  for (auto& task : tasks) {
    if (task.failed) ++result.failed_records;
    if (task.dither) result.dither_log.push_back(*task.dither);
    for (auto& row : task.rows) result.records.add_row(std::move(row));
  }
  result.summary.push_back(
      std::to_string(result.records.rows.size()) + " records, " +
      std::to_string(result.failed_records) + " failed");
  return result;
}

// ----------------------------------------------------------------- scaling

ScanResult run_scaling(const ScanConfig& config) {
  std::vector<int> M_schedule = config.M_schedule;
  if (M_schedule.empty()) {
    for (int m = 4; m <= (1 << 16); m *= 4) M_schedule.push_back(m);
  }
  std::vector<double> gamma_schedule = config.gamma_schedule;
  if (gamma_schedule.empty()) {
    GridSpec spec{1e-1, 1e-8, 8, GridSpec::Spacing::Log};
    gamma_schedule = spec.values();
  }
  const double lambda = config.lambda;
  const bool equatorial = lambda > -1.0 && lambda < 1.0;
  const int gcount = static_cast<int>(gamma_schedule.size());
  const int n = static_cast<int>(M_schedule.size()) * gcount;

  auto tasks = parallel_map(n, config.workers, [&](int i) {
    const int M = M_schedule[i / gcount];
    const double gamma = gamma_schedule[i % gcount];
    Task task;
    auto compute = [&](double lam) -> std::vector<Cell> {
      const xy::XYPoint point(lam, gamma);
      const xy::ModeGrid grid(M);
      const double total = xy::total_berry_phase(point, grid);
      std::vector<Cell> row{static_cast<long long>(M), gamma, total,
                            total / M};
      if (equatorial) {
        const auto k0 = xy::equatorial_mode(lam, grid);
        row.push_back(
            xy::mode_berry_phase(xy::dispersion(point, grid), *k0));
      }
      row.push_back(std::string());
      return row;
    };
    try {
      task.rows.push_back(compute(lambda));
    } catch (const UndefinedAngleError&) {
      const double perturbed = dither_lambda(lambda);
      task.dither = DitherEntry{i, "lambda", lambda, perturbed};
      try {
        task.rows.push_back(compute(perturbed));
      } catch (const std::exception& e) {
        task.failed = true;
        std::vector<Cell> row{static_cast<long long>(M), gamma,
                              std::string(), std::string()};
        if (equatorial) row.push_back(std::string());
        row.push_back(error_text(e));
        task.rows.push_back(std::move(row));
      }
    }
    return task;
  });

  ScanResult result;
  result.records.columns = {"M", "gamma", "phi_total", "phi_intensive"};
  if (equatorial) result.records.columns.push_back("phi_k0");
  result.records.columns.push_back("error");
  for (auto& task : tasks) {
    if (task.failed) ++result.failed_records;
    if (task.dither) result.dither_log.push_back(*task.dither);
    for (auto& row : task.rows) result.records.add_row(std::move(row));
  }
  result.summary.push_back("lambda = " + format_cell(Cell{lambda}));
  if (!equatorial) {
    result.summary.push_back(
        "no equatorial mode (lambda outside (-1, 1)); phi_k0 column absent");
  }
  return result;
}

// ------------------------------------------------------------------ wilson

ScanResult run_wilson(const ScanConfig& config) {
  const HamiltonianFamily family = resolve_family(config);
  const ParameterPoint center = resolve_center(config, family.manifold_dim());
  const Loop loop = Loop::coordinate_circle(center, config.radius,
                                            config.axis_u, config.axis_v);
  WilsonOptions opts;
  opts.tol = config.tol;

  ScanResult result;
  result.records.columns = {"family",         "band",
                            "radius",         "principal",
                            "unwrapped",      "segments_used",
                            "refinement_error", "error"};
  try {
    const BerryPhaseResult phase =
        wilson_loop_phase(family, loop, config.band, opts);
    result.records.add_row({family.name(),
                            static_cast<long long>(config.band),
                            config.radius, phase.principal, phase.unwrapped,
                            static_cast<long long>(phase.segments_used),
                            phase.refinement_error, std::string()});
    result.summary.push_back("principal = " +
                             format_cell(Cell{phase.principal}));
  } catch (const std::exception& e) {
    ++result.failed_records;
    result.records.add_row({family.name(),
                            static_cast<long long>(config.band),
                            config.radius, std::string(), std::string(),
                            std::string(), std::string(), error_text(e)});
  }
  return result;
}

// --------------------------------------------------------------- curvature

ScanResult run_curvature(const ScanConfig& config) {
  const HamiltonianFamily family = resolve_family(config);
  const int dim = family.manifold_dim();
  const ParameterPoint base = resolve_center(config, dim);

  // Optional grids keyed by coordinate index ("grid.0", "grid.1", ...).
  std::vector<std::pair<int, std::vector<double>>> axes;
  for (const auto& [name, grid] : config.grids) {
    int axis = -1;
    try {
      std::size_t pos = 0;
      axis = std::stoi(name, &pos);
      if (pos != name.size()) axis = -1;
    } catch (const std::exception&) {
    }
    if (axis < 0 || axis >= dim) {
      throw ConfigError("grid." + name,
                        "curvature grids are keyed by coordinate index 0.." +
                            std::to_string(dim - 1));
    }
    axes.emplace_back(axis, grid.values());
  }
  int n = 1;
  for (const auto& [axis, values] : axes) {
    n *= static_cast<int>(values.size());
  }

  auto point_at = [&](int i) {
    ParameterPoint p = base;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
      const int count = static_cast<int>(it->second.size());
      p[it->first] = it->second[i % count];
      i /= count;
    }
    return p;
  };

  const int mu = config.mu, nu = config.nu, band = config.band;
  const double h = config.plaquette_h;
  auto tasks = parallel_map(n, config.workers, [&](int i) {
    const ParameterPoint p = point_at(i);
    Task task;
    std::vector<Cell> row;
    for (double c : p) row.push_back(c);
    try {
      const CurvatureSample sample =
          curvature_sum_over_states(family, p, mu, nu, band);
      const double plaquette =
          curvature_plaquette(family, p, mu, nu, band, h);
      row.insert(row.end(), {sample.F_value, sample.gap, sample.bound,
                             plaquette, std::string()});
    } catch (const std::exception& e) {
      task.failed = true;
      row.insert(row.end(), {std::string(), std::string(), std::string(),
                             std::string(), error_text(e)});
    }
    task.rows.push_back(std::move(row));
    return task;
  });

  ScanResult result;
  for (int c = 0; c < dim; ++c) {
    result.records.columns.push_back("c" + std::to_string(c));
  }
  result.records.columns.insert(
      result.records.columns.end(),
      {"F_value", "gap", "bound", "plaquette", "error"});
  for (auto& task : tasks) {
    if (task.failed) ++result.failed_records;
    for (auto& row : task.rows) result.records.add_row(std::move(row));
  }
  return result;
}

// ------------------------------------------------------------ stone-bisect

ScanResult run_stone_bisect(const ScanConfig& config) {
  const HamiltonianFamily family = resolve_family(config);
  ParameterPoint lo = config.box_lo.empty() ? ParameterPoint{-1.0, -1.0, -1.0}
                                            : config.box_lo;
  ParameterPoint hi = config.box_hi.empty() ? ParameterPoint{1.0, 1.0, 1.0}
                                            : config.box_hi;
  BisectionOptions opts;
  opts.stop_diameter = config.stop_diameter;
  opts.surface_loops = config.surface_loops;

  ScanResult result;
  result.records.columns = {"kind", "depth",   "axis", "cut",
                            "kept_half", "winding", "x",    "y",
                            "z",    "diameter", "error"};
  try {
    const BisectionReport report =
        stone_bisection(family, lo, hi, config.band, opts);
    for (const BisectionStep& step : report.steps) {
      result.records.add_row({std::string("step"),
                              static_cast<long long>(step.depth),
                              static_cast<long long>(step.axis), step.cut,
                              static_cast<long long>(step.kept_half),
                              static_cast<long long>(step.winding),
                              std::string(), std::string(), std::string(),
                              std::string(), std::string()});
    }
    result.records.add_row(
        {std::string("result"), static_cast<long long>(report.depth),
         std::string(), std::string(), std::string(),
         static_cast<long long>(report.initial_winding),
         report.located_point[0], report.located_point[1],
         report.located_point[2], report.box_diameter, std::string()});
    result.summary.push_back(
        "located degeneracy near (" +
        format_cell(Cell{report.located_point[0]}) + ", " +
        format_cell(Cell{report.located_point[1]}) + ", " +
        format_cell(Cell{report.located_point[2]}) + "), box diameter " +
        format_cell(Cell{report.box_diameter}));
    result.summary.push_back("initial winding = " +
                             std::to_string(report.initial_winding));
  } catch (const std::exception& e) {
    ++result.failed_records;
    result.records.add_row({std::string("error"), std::string(),
                            std::string(), std::string(), std::string(),
                            std::string(), std::string(), std::string(),
                            std::string(), std::string(), error_text(e)});
    result.summary.push_back(std::string("bisection failed: ") + e.what());
  }
  return result;
}

// -------------------------------------------------------------- detect-qpt

ScanResult run_detect_qpt(const ScanConfig& config) {
  const HamiltonianFamily family = resolve_family(config);
  const ParameterPoint center = resolve_center(config, family.manifold_dim());
  std::vector<double> radii = config.radii;
  if (radii.empty()) {
    for (int r = 1; r <= 10; ++r) radii.push_back(std::pow(2.0, -r));
  }
  const LoopSequence sequence = LoopSequence::shrinking_circles(
      center, radii, config.axis_u, config.axis_v);
  WilsonOptions opts;
  opts.tol = config.tol;
  const int n = static_cast<int>(radii.size());

  auto tasks = parallel_map(n, config.workers, [&](int r) {
    Task task;
    try {
      const BerryPhaseResult phase =
          wilson_loop_phase(family, sequence.generator(r), config.band, opts);
      task.rows.push_back({static_cast<long long>(r), radii[r],
                           phase.principal, phase.unwrapped,
                           static_cast<long long>(phase.segments_used),
                           std::string()});
    } catch (const std::exception& e) {
      task.failed = true;
      task.rows.push_back({static_cast<long long>(r), radii[r],
                           std::string(), std::string(), std::string(),
                           error_text(e)});
    }
    return task;
  });

  ScanResult result;
  result.records.columns = {"r",         "radius",        "principal",
                            "unwrapped", "segments_used", "error"};
  std::vector<double> phases;
  bool all_ok = true;
  for (auto& task : tasks) {
    if (task.failed) {
      ++result.failed_records;
      all_ok = false;
    } else {
      phases.push_back(std::get<double>(task.rows[0][2]));
    }
    for (auto& row : task.rows) result.records.add_row(std::move(row));
  }

  if (all_ok && static_cast<int>(phases.size()) >= 4) {
    const SequenceVerdict verdict = classify_sequence(
        phases, config.detect_phase_tol, config.detect_tail_fraction,
        config.detect_spread_tol);
    result.summary.push_back("classification = " +
                             to_string(verdict.classification));
    result.summary.push_back("fitted_limit = " +
                             format_cell(Cell{verdict.fitted_limit}));
    result.summary.push_back("tail_spread = " +
                             format_cell(Cell{verdict.tail_spread}));
    try {
      result.summary.push_back(
          "area_scaling_slope = " +
          format_cell(Cell{area_scaling_slope(phases, radii)}));
    } catch (const std::exception&) {
      // slope undefined when phases vanish exactly
    }
  } else {
    result.summary.push_back(
        "classification unavailable (failed or too few loop phases)");
  }
  return result;
}

}  // namespace

ScanResult run_scan(const ScanConfig& config) {
  validate(config);
  if (config.subcommand == "xy-phase") return run_xy_phase(config);
  if (config.subcommand == "xy-scan") return run_xy_scan(config);
  if (config.subcommand == "scaling") return run_scaling(config);
  if (config.subcommand == "wilson") return run_wilson(config);
  if (config.subcommand == "curvature") return run_curvature(config);
  if (config.subcommand == "stone-bisect") return run_stone_bisect(config);
  if (config.subcommand == "detect-qpt") return run_detect_qpt(config);
  throw ConfigError("subcommand", "unknown subcommand " + config.subcommand);
}

int run_scan_to_files(const ScanConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ScanResult result = run_scan(config);

  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  json checksums;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(config.out_dir) / name).string();
    write_file(path, content);
    checksums[name] = fnv1a_hex(content);
  };
  for (const std::string& format : config.formats) {
    if (format == "csv") emit("records.csv", to_csv(result.records));
    if (format == "json") emit("records.json", to_json(result.records));
    if (format == "dat") emit("records.dat", to_dat(result.records));
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["subcommand"] = config.subcommand;
  manifest["config"] = json::parse(config_to_json(config));
  json dither = json::array();
  for (const DitherEntry& entry : result.dither_log) {
    json e;
    e["record_index"] = entry.record_index;
    e["parameter"] = entry.parameter;
    e["original"] = entry.original;
    e["perturbed"] = entry.perturbed;
    dither.push_back(e);
  }
  manifest["dither_log"] = dither;
  manifest["summary"] = result.summary;
  manifest["wall_clock_seconds"] = seconds;
  manifest["checksums"] = checksums;
  write_file((fs::path(config.out_dir) / "manifest.json").string(),
             manifest.dump(2) + "\n");

  for (const std::string& line : result.summary) {
    std::cout << line << '\n';
  }
  return result.failed_records == 0 ? 0 : 1;
}

}  // namespace berry::scan
