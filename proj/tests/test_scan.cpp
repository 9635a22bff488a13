#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <json.hpp>

#include "berry/errors.hpp"
#include "berry/scan/config.hpp"
#include "berry/scan/records.hpp"
#include "berry/scan/runner.hpp"

using namespace berry;
using namespace berry::scan;

namespace {
namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("GridSpec linear and log values") {
  GridSpec lin{-2.0, 2.0, 41, GridSpec::Spacing::Linear};
  const auto lv = lin.values();
  REQUIRE(lv.size() == 41);
  CHECK(lv.front() == -2.0);
  CHECK(lv.back() == 2.0);
  CHECK(lv[30] == 1.0);  // -2 + (30/40) * 4 is exact
  CHECK(lv[20] == 0.0);

  GridSpec log{1e-1, 1e-8, 8, GridSpec::Spacing::Log};
  const auto gv = log.values();
  REQUIRE(gv.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(gv[i] == doctest::Approx(std::pow(10.0, -1 - i)).epsilon(1e-12));
  }
  // Geometric: constant ratio.
  for (int i = 1; i < 8; ++i) {
    CHECK(gv[i] / gv[i - 1] == doctest::Approx(0.1).epsilon(1e-12));
  }

  GridSpec single{3.0, 9.0, 1, GridSpec::Spacing::Linear};
  CHECK(single.values() == std::vector<double>{3.0});
}

TEST_CASE("key = value config parsing with sections") {
  const ScanConfig c = parse_config(R"(# a comment
subcommand = xy-scan
modes = 31
workers = 4
lambda = 0.25

[grid.lambda]
start = -1.5
stop = 1.5
count = 7

[grid.gamma]
start = 1e-4
stop = 1
count = 5
spacing = log

[output]
dir = /tmp/somewhere
formats = csv, dat
)");
  CHECK(c.subcommand == "xy-scan");
  CHECK(c.modes == 31);
  CHECK(c.workers == 4);
  CHECK(c.lambda == 0.25);
  REQUIRE(c.grids.count("lambda") == 1);
  CHECK(c.grids.at("lambda").count == 7);
  CHECK(c.grids.at("gamma").spacing == GridSpec::Spacing::Log);
  CHECK(c.out_dir == "/tmp/somewhere");
  CHECK(c.formats == std::vector<std::string>{"csv", "dat"});
}

TEST_CASE("JSON config and manifest-embedded config parse identically") {
  const std::string json_text = R"({
    "subcommand": "xy-phase",
    "lambda": 0.3,
    "gamma": 0.05,
    "modes": 11
  })";
  const ScanConfig a = parse_config(json_text);
  CHECK(a.subcommand == "xy-phase");
  CHECK(a.gamma == 0.05);
  const std::string manifest = R"({
    "tool_version": "0.1.0",
    "config": )" + json_text + R"(,
    "summary": []
  })";
  const ScanConfig b = parse_config(manifest);
  CHECK(b.modes == a.modes);
  CHECK(b.lambda == a.lambda);
}

TEST_CASE("config errors carry the field path") {
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      parse_config(text);
      FAIL_CHECK("expected ConfigError for field " << field);
    } catch (const ConfigError& e) {
      CHECK(e.field == field);
    }
  };
  expect_field("subcommand = xy-phase\ngamma = -0.5\n", "gamma");
  expect_field("subcommand = xy-phase\nnot_a_key = 1\n", "not_a_key");
  expect_field("subcommand = frobnicate\n", "subcommand");
  expect_field("subcommand = xy-phase\nmodes = 0\n", "modes");
  expect_field("subcommand = xy-phase\ntol = 0\n", "tol");
  expect_field("subcommand = xy-phase\nmodes = 2.5\n", "modes");
  expect_field(
      "subcommand = xy-scan\n[grid.gamma]\nstart = 0\nstop = 1\ncount = 3\n"
      "spacing = log\n",
      "grid.gamma.spacing");
  expect_field(
      "subcommand = xy-scan\n[grid.lambda]\ncount = 0\n", "grid.lambda.count");
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("no equals sign"), ConfigError);
}

TEST_CASE("config survives a JSON round trip") {
  const ScanConfig a = parse_config(
      "subcommand = scaling\nlambda = 0.3\nworkers = 2\n"
      "[schedule]\nM = 4,16,64\ngamma = 1e-1,1e-2,1e-3\n");
  const ScanConfig b = parse_config(config_to_json(a));
  CHECK(b.subcommand == a.subcommand);
  CHECK(b.lambda == a.lambda);
  CHECK(b.workers == a.workers);
  CHECK(b.M_schedule == a.M_schedule);
  CHECK(b.gamma_schedule == a.gamma_schedule);
  CHECK(b.tol == a.tol);
  CHECK(config_to_json(a) == config_to_json(b));
}

TEST_CASE("cell formatting is lossless for doubles") {
  CHECK(format_cell(Cell{0.1}) == "0.10000000000000001");
  CHECK(format_cell(Cell{1.0}) == "1");
  CHECK(format_cell(Cell{static_cast<long long>(-7)}) == "-7");
  CHECK(format_cell(Cell{std::string("abc")}) == "abc");
  const double pi = std::numbers::pi;
  CHECK(std::stod(format_cell(Cell{pi})) == pi);
}

TEST_CASE("CSV, JSON and dat serialization") {
  RecordSet records;
  records.columns = {"name", "value", "note"};
  records.add_row({std::string("a"), 0.5, std::string("plain")});
  records.add_row({std::string("b,c"), static_cast<long long>(2),
                   std::string()});
  const std::string csv = to_csv(records);
  CHECK(csv ==
        "name,value,note\n"
        "a,0.5,plain\n"
        "\"b,c\",2,\n");

  const auto parsed = nlohmann::json::parse(to_json(records));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0]["name"] == "a");
  CHECK(parsed[0]["value"] == 0.5);
  CHECK(parsed[1]["name"] == "b,c");
  CHECK(parsed[1]["value"] == 2);

  const std::string dat = to_dat(records);
  CHECK(dat.rfind("# name value note\n", 0) == 0);
  CHECK(dat.find("b,c 2 -") != std::string::npos);

  RecordSet empty;
  empty.columns = {"x"};
  CHECK(to_csv(empty) == "x\n");
  CHECK(nlohmann::json::parse(to_json(empty)).empty());
}

TEST_CASE("fnv1a is deterministic and content sensitive") {
  CHECK(fnv1a_hex("abc") == fnv1a_hex("abc"));
  CHECK(fnv1a_hex("abc") != fnv1a_hex("abd"));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("run_scan xy-phase produces per-mode records") {
  ScanConfig config;
  config.subcommand = "xy-phase";
  config.lambda = 0.0;
  config.gamma = 1.0;
  config.modes = 5;
  const ScanResult result = run_scan(config);
  CHECK(result.failed_records == 0);
  CHECK(result.records.rows.size() == 5);
  CHECK(result.dither_log.empty());
  bool found_total = false;
  for (const auto& line : result.summary) {
    if (line.rfind("phi_total = ", 0) == 0) {
      found_total = true;
      const double total = std::stod(line.substr(12));
      CHECK(total == doctest::Approx(std::numbers::pi * 5.5).epsilon(1e-13));
    }
  }
  CHECK(found_total);
}

TEST_CASE("exact degeneracy is dithered and logged") {
  ScanConfig config;
  config.subcommand = "xy-phase";
  config.modes = 1;
  config.gamma = 0.0;
  // lambda = cos(x_1) exactly: Lambda_1 = 0.
  config.lambda = std::cos(2.0 * std::numbers::pi / 3.0);
  const ScanResult result = run_scan(config);
  REQUIRE(result.dither_log.size() == 1);
  CHECK(result.dither_log[0].parameter == "lambda");
  CHECK(result.dither_log[0].original == config.lambda);
  CHECK(result.dither_log[0].perturbed != config.lambda);
  CHECK(std::abs(result.dither_log[0].perturbed - config.lambda) < 1e-11);
  CHECK(result.failed_records == 0);
  CHECK(result.records.rows.size() == 1);
}

TEST_CASE("xy-scan records are identical for 1 and 8 workers") {
  ScanConfig config;
  config.subcommand = "xy-scan";
  config.modes = 31;
  config.grids["lambda"] = GridSpec{-2.0, 2.0, 9, GridSpec::Spacing::Linear};
  config.grids["gamma"] = GridSpec{0.0, 1.0, 5, GridSpec::Spacing::Linear};

  config.workers = 1;
  const ScanResult serial = run_scan(config);
  config.workers = 8;
  const ScanResult parallel = run_scan(config);

  CHECK(serial.records.rows.size() == 45);
  CHECK(to_csv(serial.records) == to_csv(parallel.records));
  CHECK(to_json(serial.records) == to_json(parallel.records));
  CHECK(serial.dither_log.size() == parallel.dither_log.size());
}

TEST_CASE("scaling subcommand emits the order-of-limits table") {
  ScanConfig config;
  config.subcommand = "scaling";
  config.lambda = 0.3;
  config.M_schedule = {11, 101};
  config.gamma_schedule = {1e-1, 1e-8};
  const ScanResult result = run_scan(config);
  CHECK(result.failed_records == 0);
  REQUIRE(result.records.rows.size() == 4);
  REQUIRE(result.records.columns.size() == 6);
  CHECK(result.records.columns[4] == "phi_k0");
  // M = 101, gamma = 1e-1: equatorial phase near pi.
  const double phi_k0 = std::get<double>(result.records.rows[2][4]);
  CHECK(phi_k0 == doctest::Approx(std::numbers::pi).epsilon(0.05));
}

TEST_CASE("run_scan_to_files writes records, manifest, and reruns "
          "byte-identically") {
  TempDir dir_a("berry_scan_test_a"), dir_b("berry_scan_test_b");
  ScanConfig config;
  config.subcommand = "xy-scan";
  config.modes = 21;
  config.grids["lambda"] = GridSpec{-1.0, 1.0, 5, GridSpec::Spacing::Linear};
  config.grids["gamma"] = GridSpec{0.0, 1.0, 3, GridSpec::Spacing::Linear};
  config.formats = {"csv", "json", "dat"};
  config.out_dir = dir_a.path.string();
  config.workers = 1;
  CHECK(run_scan_to_files(config) == 0);
  for (const char* name :
       {"records.csv", "records.json", "records.dat", "manifest.json"}) {
    CHECK(fs::exists(dir_a.path / name));
  }

  const auto manifest =
      nlohmann::json::parse(read_file((dir_a.path / "manifest.json").string()));
  CHECK(manifest["tool_version"] == "0.1.0");
  CHECK(manifest["subcommand"] == "xy-scan");
  CHECK(manifest.contains("checksums"));
  CHECK(manifest.contains("wall_clock_seconds"));
  const std::string csv_a = read_file((dir_a.path / "records.csv").string());
  CHECK(manifest["checksums"]["records.csv"] == fnv1a_hex(csv_a));

  // Rerun from the manifest with a different worker count: byte-identical.
  ScanConfig rerun = parse_config(manifest.dump());
  rerun.out_dir = dir_b.path.string();
  rerun.workers = 8;
  CHECK(run_scan_to_files(rerun) == 0);
  CHECK(read_file((dir_b.path / "records.csv").string()) == csv_a);
  CHECK(read_file((dir_b.path / "records.json").string()) ==
        read_file((dir_a.path / "records.json").string()));
}

TEST_CASE("a failing record yields exit code 1") {
  TempDir dir("berry_scan_test_fail");
  ScanConfig config;
  config.subcommand = "curvature";
  config.family = "spin-half";
  config.center = {0.0, 0.0, 0.0};  // exact degeneracy
  config.out_dir = dir.path.string();
  CHECK(run_scan_to_files(config) == 1);
  const std::string csv = read_file((dir.path / "records.csv").string());
  CHECK(csv.find("degenerate") != std::string::npos);
}

TEST_CASE("wilson subcommand matches the library result") {
  ScanConfig config;
  config.subcommand = "wilson";
  config.family = "two-level-real";
  config.center = {0.0, 0.0};
  config.radius = 1.0;
  const ScanResult result = run_scan(config);
  REQUIRE(result.failed_records == 0);
  REQUIRE(result.records.rows.size() == 1);
  const double principal = std::get<double>(result.records.rows[0][3]);
  CHECK(std::abs(std::abs(principal) - std::numbers::pi) < 1e-8);
}

TEST_CASE("detect-qpt subcommand classifies the spin-half monopole") {
  ScanConfig config;
  config.subcommand = "detect-qpt";
  config.family = "spin-half";
  config.center = {0.0, 0.0, 0.0};
  config.radii = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  const ScanResult result = run_scan(config);
  CHECK(result.failed_records == 0);
  CHECK(result.records.rows.size() == 5);
  bool classified = false;
  for (const auto& line : result.summary) {
    if (line.find("non-contractible") != std::string::npos) classified = true;
  }
  CHECK(classified);
}
