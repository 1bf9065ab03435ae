#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segeval/errors.hpp"
#include "segeval/geometry.hpp"
#include "segeval/metrics.hpp"

namespace segeval {

struct WeightParams {
  double a = 1.0;
  double k = 5.0;
};

/// One geometry of a sweep: either a generator spec or an existing volume.
struct GeometryEntry {
  std::string id;
  std::optional<GeometrySpec> spec;      // generated when set
  std::filesystem::path volume_path;     // loaded otherwise
};

struct ExperimentConfig {
  int version = 1;
  std::vector<GeometryEntry> geometries;
  std::vector<ErrorKind> error_kinds;
  std::vector<double> rates;
  std::vector<WeightParams> weights;
  std::vector<std::uint64_t> replicate_seeds;
  std::filesystem::path output_dir;
};

/// Parse and validate a JSON config file. Missing optional fields get the
/// documented defaults (all seven kinds; seven rates from 1% to 15%;
/// weights (1,5) and (2,3); seed 1).
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string geometry;
  std::string shape;
  std::string density;      // empty for imported volumes
  std::string placement;    // empty for imported volumes
  std::string error_kind;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::optional<MetricReport> report;  // absent for infeasible injections
  double weight_a = 0.0;
  double weight_k = 0.0;
  double wall_time_s = 0.0;
  std::string note;  // empty on success, diagnostic for error rows
};

struct SweepOptions {
  std::optional<std::filesystem::path> output_dir;  // overrides config
  int workers = 0;      // 0 = SEGEVAL_WORKERS env or hardware concurrency
  bool timing = false;  // add wall_time_s column (breaks byte-identity)
};

/// Run the full grid (geometry x kind x rate x seed x weights): generate or
/// load each geometry, compute its boundary distance once, inject, and
/// evaluate. Rows come back in config order regardless of worker count, and
/// the CSV written to <output_dir>/results.csv is byte-identical across
/// runs and worker counts (unless timing is enabled). Generated volumes are
/// persisted under <output_dir>/volumes, named by a hash of spec and seed,
/// and reused when present.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config,
                                 const SweepOptions& options = {});

std::string result_csv_header(bool timing);
std::string result_csv_row(const ResultRow& row, bool timing);

}  // namespace segeval
