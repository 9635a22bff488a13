// berryscan: parameter sweeps, Berry phase evaluation, and degeneracy
// detection for parametrized Hamiltonian families.
//
// Exit codes: 0 success, 1 some records failed, 2 configuration error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berry/errors.hpp"
#include "berry/scan/config.hpp"
#include "berry/scan/runner.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<double> tol;
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::optional<int> modes;
  std::optional<int> band;
  std::optional<std::string> family;
  std::optional<std::string> family_file;
  std::optional<double> radius;
  std::optional<std::vector<double>> center;
  std::optional<std::vector<double>> box_lo;
  std::optional<std::vector<double>> box_hi;
  std::optional<double> stop_diameter;
  std::optional<std::vector<std::string>> formats;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Config file (key = value sections, JSON, or a previous "
                  "run's manifest.json)");
  cmd->add_option("--out", flags.out_dir, "Output directory");
  cmd->add_option("--workers", flags.workers, "Worker thread count");
  cmd->add_option("--tol", flags.tol, "Phase refinement tolerance");
  cmd->add_option("--lambda", flags.lambda, "Transverse field lambda");
  cmd->add_option("--gamma", flags.gamma, "Anisotropy gamma (>= 0)");
  cmd->add_option("--modes", flags.modes,
                  "Positive mode count M (chain has N = 2M+1 sites)");
  cmd->add_option("--band", flags.band, "Tracked band index (0 = ground)");
  cmd->add_option("--family", flags.family,
                  "Family id: two-level-real | spin-half | xy-qubit(k)");
  cmd->add_option("--family-file", flags.family_file,
                  "Matrix-expression family file (see docs/family-format.md)");
  cmd->add_option("--radius", flags.radius, "Loop radius");
  cmd->add_option("--center", flags.center, "Loop/point center coordinates")
      ->expected(-1);
  cmd->add_option("--box-lo", flags.box_lo, "Bisection box lower corner")
      ->expected(-1);
  cmd->add_option("--box-hi", flags.box_hi, "Bisection box upper corner")
      ->expected(-1);
  cmd->add_option("--stop-diameter", flags.stop_diameter,
                  "Bisection stop diameter");
  cmd->add_option("--formats", flags.formats,
                  "Output formats (csv, json, dat)")
      ->expected(-1);
}

berry::scan::ScanConfig build_config(const std::string& subcommand,
                                     const CommonFlags& flags) {
  berry::scan::ScanConfig config;
  if (flags.config_path) {
    config = berry::scan::load_config_file(*flags.config_path);
  }
  config.subcommand = subcommand;
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.tol) config.tol = *flags.tol;
  if (flags.lambda) config.lambda = *flags.lambda;
  if (flags.gamma) config.gamma = *flags.gamma;
  if (flags.modes) config.modes = *flags.modes;
  if (flags.band) config.band = *flags.band;
  if (flags.family) config.family = *flags.family;
  if (flags.family_file) config.family_file = *flags.family_file;
  if (flags.radius) config.radius = *flags.radius;
  if (flags.center) config.center = *flags.center;
  if (flags.box_lo) config.box_lo = *flags.box_lo;
  if (flags.box_hi) config.box_hi = *flags.box_hi;
  if (flags.stop_diameter) config.stop_diameter = *flags.stop_diameter;
  if (flags.formats) config.formats = *flags.formats;
  berry::scan::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "berryscan: Berry phases, Berry curvature, spectral gaps, and "
      "quantum-critical-point detection for parametrized Hamiltonians"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"xy-phase", "Per-mode XY-chain spectrum and Berry phases at a point"},
      {"xy-scan", "XY-chain phase/gap/region sweep over a (lambda, gamma) "
                  "grid"},
      {"scaling", "Order-of-limits (M, gamma) table of XY phases"},
      {"wilson", "Wilson-loop Berry phase of a circle for a family"},
      {"curvature", "Berry curvature, gap, and bound at points of a family"},
      {"stone-bisect", "Locate a degeneracy by successive surface bisection"},
      {"detect-qpt", "Shrinking-loop criticality detector"},
  };

  std::vector<CommonFlags> flag_sets(subcommands.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < subcommands.size(); ++i) {
    CLI::App* cmd =
        app.add_subcommand(subcommands[i].first, subcommands[i].second);
    add_common_flags(cmd, flag_sets[i]);
    cmds.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (cmds[i]->parsed()) {
        const berry::scan::ScanConfig config =
            build_config(subcommands[i].first, flag_sets[i]);
        return berry::scan::run_scan_to_files(config);
      }
    }
  } catch (const berry::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
