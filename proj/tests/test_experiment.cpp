#include "geodint/experiment/config.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "geodint/experiment/csv.hpp"
#include "geodint/experiment/runner.hpp"

namespace {

using namespace geodint;

json minimal_sweep_config() {
  return json::parse(R"({
    "experiment": "sweep",
    "manifold": {"kind": "sphere2"},
    "field": {"name": "killing"},
    "methods": ["gee", "gie"],
    "initial_points": [[1, 0, 0], [0, 1, 0]],
    "h": {"min": 0.1, "max": 1.0, "count": 3}
  })");
}

TEST(FormatDouble, RoundTripsExactly) {
  Rng rng(901);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = normal01(rng) * std::pow(10.0, trial % 7 - 3);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
}

TEST(Checksum, MatchesKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64_hex("foobar"), "85944171f73967e8");
}

TEST(CsvBuilder, EmitsHeaderAndRows) {
  CsvBuilder csv("a,b");
  csv.row({"1", "x"});
  csv.row({"2", "y"});
  EXPECT_EQ(csv.content(), "a,b\n1,x\n2,y\n");
}

TEST(TextFiles, RoundTripAndMissingFileError) {
  const auto dir = std::filesystem::temp_directory_path() / "geodint_test_io";
  std::filesystem::create_directories(dir);
  const auto path = dir / "sample.txt";
  write_text_file(path, "payload\n");
  EXPECT_EQ(read_text_file(path), "payload\n");
  EXPECT_THROW(read_text_file(dir / "absent.txt"), io_error);
  std::filesystem::remove_all(dir);
}

TEST(Grid, LinearAndLogSpacing) {
  const auto lin = make_grid({1.0, 3.0, 3, false});
  ASSERT_EQ(lin.size(), 3u);
  EXPECT_NEAR(lin[1], 2.0, 1e-15);
  const auto lg = make_grid({0.01, 1.0, 3, true});
  EXPECT_NEAR(lg[1], 0.1, 1e-15);
  EXPECT_NEAR(lg[0], 0.01, 1e-18);
  EXPECT_NEAR(lg[2], 1.0, 1e-15);
}

TEST(Config, ResolvesDefaultsForSweep) {
  const auto cfg = resolve_config(minimal_sweep_config());
  EXPECT_EQ(cfg.kind, ExperimentKind::sweep);
  EXPECT_EQ(cfg.manifold.kind, "sphere2");
  EXPECT_EQ(cfg.methods.size(), 2u);
  EXPECT_EQ(cfg.output_dir, "out/sweep");
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_NEAR(cfg.solver.tolerance, 1e-11, 1e-25);
  EXPECT_EQ(cfg.solver.max_iterations, 50);
  EXPECT_EQ(cfg.echo["solver"]["strategy"], "newton-with-fallback");
  EXPECT_EQ(cfg.echo["h"]["spacing"], "linear");
}

TEST(Config, RejectsUnknownKeysWithTheirPath) {
  auto raw = minimal_sweep_config();
  raw["surprise"] = 1;
  try {
    resolve_config(raw);
    FAIL() << "expected invalid_input";
  } catch (const invalid_input& e) {
    EXPECT_NE(std::string(e.what()).find("surprise"), std::string::npos);
  }

  raw = minimal_sweep_config();
  raw["h"]["step"] = 0.1;
  try {
    resolve_config(raw);
    FAIL() << "expected invalid_input";
  } catch (const invalid_input& e) {
    EXPECT_NE(std::string(e.what()).find("h.step"), std::string::npos);
  }

  raw = minimal_sweep_config();
  raw["solver"]["damping"] = 0.5;
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, RejectsMissingRequiredKeys) {
  auto raw = minimal_sweep_config();
  raw.erase("methods");
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw.erase("experiment");
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, ValidatesGridAndMethodNames) {
  auto raw = minimal_sweep_config();
  raw["h"]["min"] = 0.0;
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["h"]["count"] = 1;
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["h"]["max"] = 0.05;
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["methods"] = {"gee", "rk4"};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["methods"] = json::array();
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, ValidatesManifoldAndPointCount) {
  auto raw = minimal_sweep_config();
  raw["manifold"] = {{"kind", "torus"}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["manifold"] = {{"kind", "spd"}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["initial_points"] = {{1, 0, 0}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, FieldsAreManifoldSpecific) {
  auto raw = minimal_sweep_config();
  raw["field"] = {{"name", "karcher"}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw = minimal_sweep_config();
  raw["field"] = {{"name", "killing"}, {"c", 2.0}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, IsotropyDefaultsAndConstraints) {
  json raw = json::parse(R"({
    "experiment": "isotropy",
    "initial_points": [[1, 0, 0], [0.6, 0, 0.8]],
    "h": {"min": 0.1, "max": 0.5, "count": 5}
  })");
  const auto cfg = resolve_config(raw);
  ASSERT_EQ(cfg.c_values.size(), 3u);
  EXPECT_EQ(cfg.c_values[0], 0.0);
  EXPECT_EQ(cfg.c_values[2], 2.0);
  raw["manifold"] = {{"kind", "euclidean"}, {"n", 2}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, BifurcationBoundsTheTarget) {
  json raw = json::parse(R"({
    "experiment": "bifurcation",
    "z0": 1.5,
    "h": {"min": 0.5, "max": 4.0, "count": 8}
  })");
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw["z0"] = 0.25;
  EXPECT_EQ(resolve_config(raw).z0, 0.25);
}

TEST(Config, GlobalErrorRequiresUsableStepCounts) {
  json raw = json::parse(R"({
    "experiment": "global-error",
    "manifold": {"kind": "euclidean", "n": 2},
    "field": {"name": "linear", "matrix": [[-1, 0], [0, -1]]},
    "methods": ["gie"],
    "initial_points": [[1, 1]],
    "t_star": 1.0,
    "step_counts": [10, 20]
  })");
  const auto cfg = resolve_config(raw);
  EXPECT_EQ(cfg.step_counts.size(), 2u);
  EXPECT_NEAR(cfg.fine_tol, 1e-8, 1e-20);
  EXPECT_EQ(cfg.nu_samples, 200);
  raw["step_counts"] = {10};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw["step_counts"] = {10, 0};
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, RegionKindsAreValidated) {
  json raw = json::parse(R"({
    "experiment": "lognorm",
    "manifold": {"kind": "sphere2"},
    "field": {"name": "killing"},
    "region": {"kind": "chart-box", "lo": [0.4, -1.0], "hi": [2.0, 1.0]}
  })");
  EXPECT_EQ(resolve_config(raw).samples, 500);
  raw["region"] = {{"kind", "shell"}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
  raw["region"] = {{"kind", "geodesic-ball"}, {"center", {1, 0, 0}}, {"radius", -1.0}};
  EXPECT_THROW(resolve_config(raw), invalid_input);
}

TEST(Config, OverridesFollowDottedPaths) {
  json raw = minimal_sweep_config();
  apply_override(raw, "h.count=5");
  apply_override(raw, "seed=7");
  apply_override(raw, "field.name=isotropy");
  apply_override(raw, "field.c=2.5");
  apply_override(raw, "output_dir=custom/dir");
  const auto cfg = resolve_config(raw);
  EXPECT_EQ(cfg.h.count, 5);
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.field.name, "isotropy");
  EXPECT_EQ(cfg.field.c, 2.5);
  EXPECT_EQ(cfg.output_dir, "custom/dir");
  EXPECT_THROW(apply_override(raw, "novalue"), invalid_input);
  EXPECT_THROW(apply_override(raw, "=3"), invalid_input);
}

TEST(Runner, SweepProducesSchemaAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "geodint_test_run";
  std::filesystem::remove_all(dir);
  const auto cfg = resolve_config(minimal_sweep_config());
  const auto report = run_experiment(cfg, dir, "0.0.0-test");
  EXPECT_EQ(report.exit_code, 0);
  const std::string csv = read_text_file(dir / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,h,d0,d_after,converged,iters_x,iters_y");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3);
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  EXPECT_EQ(manifest["experiment"], "sweep");
  EXPECT_EQ(manifest["outputs"].size(), 2u);
  EXPECT_EQ(manifest["outputs"][0]["file"], "sweep.csv");
  EXPECT_EQ(manifest["outputs"][0]["fnv1a64"], fnv1a64_hex(csv));
  EXPECT_TRUE(std::filesystem::exists(dir / "plot.py"));
  std::filesystem::remove_all(dir);
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  const auto base = std::filesystem::temp_directory_path() / "geodint_test_repeat";
  std::filesystem::remove_all(base);
  json raw = json::parse(R"({
    "experiment": "lognorm",
    "manifold": {"kind": "sphere2"},
    "field": {"name": "killing"},
    "region": {"kind": "chart-box", "lo": [0.4, -1.0], "hi": [2.0, 1.0]},
    "samples": 50,
    "seed": 3
  })");
  const auto cfg = resolve_config(raw);
  run_experiment(cfg, base / "a", "0.0.0-test");
  run_experiment(cfg, base / "b", "0.0.0-test");
  EXPECT_EQ(read_text_file(base / "a" / "lognorm.csv"),
            read_text_file(base / "b" / "lognorm.csv"));
  const std::string csv = read_text_file(base / "a" / "lognorm.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x0,x1,mu");
  std::filesystem::remove_all(base);
}

TEST(Runner, BifurcationCsvSchema) {
  const auto dir = std::filesystem::temp_directory_path() / "geodint_test_bif";
  std::filesystem::remove_all(dir);
  json raw = json::parse(R"({
    "experiment": "bifurcation",
    "z0": 0.0,
    "h": {"min": 3.141592653589793, "max": 6.283185307179586, "count": 2}
  })");
  const auto report = run_experiment(resolve_config(raw), dir, "0.0.0-test");
  EXPECT_EQ(report.exit_code, 0);
  const std::string csv = read_text_file(dir / "bifurcation.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "h,root_index,z");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 + 5);
  std::filesystem::remove_all(dir);
}

std::vector<std::string> csv_cells(const std::string& line) {
  std::vector<std::string> cells;
  size_t pos = 0;
  while (true) {
    const size_t comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

TEST(Runner, GlobalErrorBoundsDominateMeasuredErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "geodint_test_ge";
  std::filesystem::remove_all(dir);
  json raw = json::parse(R"({
    "experiment": "global-error",
    "manifold": {"kind": "spd", "n": 2},
    "field": {"name": "karcher",
              "targets": [[[2.0, 0.5], [0.5, 1.0]], [[1.0, -0.3], [-0.3, 2.5]]]},
    "methods": ["gie"],
    "initial_points": [[[1.5, 0.2], [0.2, 0.8]]],
    "t_star": 1.0,
    "step_counts": [5, 10]
  })");
  const auto report = run_experiment(resolve_config(raw), dir, "0.0.0-test");
  EXPECT_EQ(report.exit_code, 0);
  const std::string csv = read_text_file(dir / "global_error.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "method,h,k,error,bound,nu,C,p");
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto cells = csv_cells(line);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[0], "gie");
    EXPECT_LE(std::stod(cells[3]), std::stod(cells[4]));
    EXPECT_LT(std::stod(cells[5]), 0.0);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
  std::filesystem::remove_all(dir);
}

TEST(Runner, KarcherConvergesBelowTolerance) {
  const auto dir = std::filesystem::temp_directory_path() / "geodint_test_km";
  std::filesystem::remove_all(dir);
  json raw = json::parse(R"({
    "experiment": "karcher",
    "manifold": {"kind": "spd", "n": 2},
    "field": {"name": "karcher",
              "targets": [[[2.0, 0.5], [0.5, 1.0]], [[1.0, -0.3], [-0.3, 2.5]]]},
    "tolerance": 1e-8
  })");
  const auto report = run_experiment(resolve_config(raw), dir, "0.0.0-test");
  EXPECT_EQ(report.exit_code, 0);
  const std::string csv = read_text_file(dir / "karcher.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iter,field_norm");
  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  EXPECT_LE(manifest["result"]["final_norm"].get<double>(), 1e-8);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'),
            manifest["result"]["iterations"].get<int>() + 2);
  std::filesystem::remove_all(dir);
}

}  // namespace
