#include "segeval/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <stdexcept>

#include "doctest.h"
#include "segeval/volume_io.hpp"

using namespace segeval;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("segeval-sweep-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const char* kMiniConfig = R"({
  "version": 1,
  "dims": [32, 32, 32],
  "geometries": [
    {"id": "s40", "shape": "sphere", "radius": 5, "density": 0.4,
     "placement": "boolean", "seed": 3}
  ],
  "error_kinds": ["erosion", "uniform"],
  "rates": [0.02, 0.1],
  "weights": [[1, 5]],
  "replicate_seeds": [9]
})";

}  // namespace

TEST_CASE("config parsing applies documented defaults") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "min.json";
  write_file(cfg, R"({"geometries": [{"shape": "cube", "density": 0.3}]})");
  const ExperimentConfig c = load_config(cfg);
  CHECK(c.error_kinds.size() == 7);
  CHECK(c.rates.size() == 7);
  CHECK(c.rates.front() == doctest::Approx(0.01));
  CHECK(c.rates.back() == doctest::Approx(0.15));
  REQUIRE(c.weights.size() == 2);
  CHECK(c.weights[0].a == 1.0);
  CHECK(c.weights[0].k == 5.0);
  CHECK(c.weights[1].a == 2.0);
  CHECK(c.weights[1].k == 3.0);
  CHECK(c.replicate_seeds == std::vector<std::uint64_t>{1});
  REQUIRE(c.geometries.size() == 1);
  REQUIRE(c.geometries[0].spec.has_value());
  CHECK(c.geometries[0].spec->dims == GridDims{128, 128, 128});
}

TEST_CASE("config validation") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "bad.json";

  write_file(cfg, R"({"geometries": []})");
  CHECK_THROWS_WITH_AS(load_config(cfg), doctest::Contains("nonempty"),
                       std::runtime_error);

  write_file(cfg, R"({"geometries": [{"shape": "cube", "density": 0.3}],
                      "rates": []})");
  CHECK_THROWS_AS(load_config(cfg), std::runtime_error);

  write_file(cfg, R"({"geometries": [{"shape": "cube", "density": 0.3}],
                      "rates": [1.5]})");
  CHECK_THROWS_WITH_AS(load_config(cfg), doctest::Contains("(0, 1)"),
                       std::runtime_error);

  write_file(cfg, R"({"version": 9,
                      "geometries": [{"shape": "cube", "density": 0.3}]})");
  CHECK_THROWS_WITH_AS(load_config(cfg), doctest::Contains("version"),
                       std::runtime_error);

  write_file(cfg, "{nonsense");
  CHECK_THROWS_AS(load_config(cfg), std::runtime_error);

  CHECK_THROWS_AS(load_config(tmp.path / "missing.json"), std::runtime_error);
}

TEST_CASE("sweep rows match a manual pipeline run") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "mini.json";
  write_file(cfg, kMiniConfig);
  ExperimentConfig config = load_config(cfg);
  config.output_dir = tmp.path / "out";

  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 4);  // 1 geometry x 2 kinds x 2 rates x 1 seed x 1 w

  // Recompute one cell through the public pieces.
  GeometrySpec spec;
  spec.dims = {32, 32, 32};
  spec.shape = Sphere{5.0};
  spec.target_density = 0.4;
  spec.seed = 3;
  const VoxelGrid gt = realize(spec);
  const DistanceField field = boundary_distance(gt);
  const VoxelGrid pr = inject_errors(gt, field, {ErrorKind::Erosion, 0.02, 9});
  const MetricReport want = evaluate_with_field(gt, pr, field, WeightFunction(1, 5));

  const ResultRow& row = rows[0];
  CHECK(row.error_kind == "erosion");
  CHECK(row.rate == 0.02);
  REQUIRE(row.report.has_value());
  CHECK(row.report->counts == want.counts);
  CHECK(row.report->ahd == want.ahd);
  CHECK(row.report->scc == want.scc);
  CHECK(row.report->dsc == want.dsc);

  // Measured rate stays within one voxel of the configured rate.
  for (const ResultRow& r : rows) {
    REQUIRE(r.report.has_value());
    CHECK(std::abs(r.report->error_rate - r.rate) <=
          1.0 / static_cast<double>(gt.voxel_count()) / 2.0 + 1e-15);
  }

  // The geometry volume is cached under volumes/.
  bool found = false;
  for (const auto& e : fs::directory_iterator(config.output_dir / "volumes")) {
    found |= e.path().extension() == ".sgv";
  }
  CHECK(found);
}

TEST_CASE("sweep CSV is byte-identical across runs and worker counts") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "mini.json";
  write_file(cfg, kMiniConfig);
  const ExperimentConfig config = load_config(cfg);

  SweepOptions opt1;
  opt1.output_dir = tmp.path / "run1";
  opt1.workers = 1;
  run_sweep(config, opt1);

  SweepOptions opt2;
  opt2.output_dir = tmp.path / "run2";
  opt2.workers = 4;
  run_sweep(config, opt2);

  SweepOptions opt3;
  opt3.output_dir = tmp.path / "run3";
  opt3.workers = 1;
  run_sweep(config, opt3);

  const std::string a = read_file(*opt1.output_dir / "results.csv");
  const std::string b = read_file(*opt2.output_dir / "results.csv");
  const std::string c = read_file(*opt3.output_dir / "results.csv");
  CHECK(a == b);
  CHECK(a == c);
  CHECK(!a.empty());
}

TEST_CASE("sweep reuses cached volumes") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "mini.json";
  write_file(cfg, kMiniConfig);
  ExperimentConfig config = load_config(cfg);
  config.output_dir = tmp.path / "out";

  run_sweep(config);
  const std::string first = read_file(config.output_dir / "results.csv");
  // Re-run in the same directory: volumes are loaded, not regenerated.
  run_sweep(config);
  const std::string second = read_file(config.output_dir / "results.csv");
  CHECK(first == second);
}

TEST_CASE("infeasible injections become error rows") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "err.json";
  // Erosion at 30% on a 10%-density system cannot find enough foreground.
  write_file(cfg, R"({
    "dims": [24, 24, 24],
    "geometries": [
      {"id": "thin", "shape": "sphere", "radius": 4, "density": 0.1,
       "placement": "boolean", "seed": 5}
    ],
    "error_kinds": ["erosion"],
    "rates": [0.3],
    "weights": [[1, 5]],
    "replicate_seeds": [1]
  })");
  ExperimentConfig config = load_config(cfg);
  config.output_dir = tmp.path / "out";
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].report.has_value());
  CHECK(rows[0].note.find("exceeds foreground") != std::string::npos);

  const std::string csv = read_file(config.output_dir / "results.csv");
  CHECK(csv.find("exceeds foreground") != std::string::npos);
}

TEST_CASE("csv header shape") {
  CHECK(result_csv_header(false) ==
        "geometry,shape,density,placement,error_kind,rate,seed,a,k,"
        "error_rate_measured,dsc,mcc,ahd,scc,max_error_distance,"
        "min_error_distance,note");
  CHECK(result_csv_header(true).find("wall_time_s") != std::string::npos);

  ResultRow row;
  row.geometry = "g";
  row.error_kind = "uniform";
  row.rate = 0.05;
  row.seed = 1;
  row.note = "boom, with comma";
  const std::string line = result_csv_row(row, false);
  // Notes are sanitized so the column count stays fixed.
  CHECK(std::count(line.begin(), line.end(), ',') ==
        std::count(result_csv_header(false).begin(),
                   result_csv_header(false).end(), ','));
}

TEST_CASE("sweep accepts imported volumes") {
  TempDir tmp;
  // Hand-made two-phase volume.
  std::vector<std::uint8_t> labels(16 * 16 * 16, 0);
  for (std::size_t i = 0; i < labels.size() / 3; ++i) {
    labels[i] = 1;
  }
  const VoxelGrid vol({16, 16, 16}, labels);
  const fs::path vpath = tmp.path / "ext.sgv";
  store_volume(vol, vpath);

  const fs::path cfg = tmp.path / "imp.json";
  write_file(cfg, std::string(R"({
    "geometries": [{"id": "imported", "volume": ")") +
                       vpath.string() + R"("}],
    "error_kinds": ["uniform"],
    "rates": [0.05],
    "weights": [[1, 5]],
    "replicate_seeds": [2]
  })");
  ExperimentConfig config = load_config(cfg);
  config.output_dir = tmp.path / "out";
  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].geometry == "imported");
  CHECK(rows[0].shape.empty());
  REQUIRE(rows[0].report.has_value());
  CHECK(rows[0].report->counts.errors() ==
        target_error_count(0.05, vol.voxel_count()));
}
