// segeval: distance-aware quality assessment for binary voxel volumes.
//
// Subcommands:
//   generate   stochastic particle systems (Boolean model / RSA packing)
//   corrupt    systematic error injection with exact error rates
//   evaluate   error rate, DSC, MCC, AHD, SCC for a volume pair
//   edt        distance-field export (SGF1, 32-bit float)
//   weightmap  logistic weight-map slice as PGM
//   profile    signed distance histogram as CSV
//   sweep      full experiment grid to results.csv

#include <array>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "segeval/distance.hpp"
#include "segeval/errors.hpp"
#include "segeval/format.hpp"
#include "segeval/geometry.hpp"
#include "segeval/metrics.hpp"
#include "segeval/sweep.hpp"
#include "segeval/volume_io.hpp"

namespace {

using namespace segeval;

GridDims dims_from(const std::vector<std::uint32_t>& v) {
  if (v.size() == 1) {
    return {v[0], v[0], v[0]};
  }
  if (v.size() == 3) {
    return {v[0], v[1], v[2]};
  }
  throw CLI::ValidationError("--dims", "expected one or three values");
}

VoxelGrid load_input(const std::string& path,
                     const std::vector<std::uint32_t>& raw_dims) {
  if (!raw_dims.empty()) {
    return load_raw_volume(path, dims_from(raw_dims));
  }
  return load_volume(path);
}

void add_raw_dims_option(CLI::App* cmd, std::vector<std::uint32_t>& raw_dims) {
  cmd->add_option("--raw-dims", raw_dims,
                  "treat inputs as headerless uint8 volumes with these dims "
                  "(nx ny nz, or one value for a cube)")
      ->expected(1, 3);
}

int run(int argc, char** argv) {
  CLI::App app{"distance-aware segmentation quality toolkit"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "realize a particle system");
  std::vector<std::uint32_t> gen_dims = {128};
  std::string gen_shape = "sphere";
  std::string gen_placement = "boolean";
  double gen_density = 0.5;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::optional<double> gen_radius, gen_edge, gen_height;
  std::vector<double> gen_semiaxes, gen_edges;
  gen->add_option("--dims", gen_dims, "volume dims (one value or nx ny nz)")
      ->expected(1, 3);
  gen->add_option("--shape", gen_shape,
                  "sphere|cube|cylinder|ellipsoid|cuboid");
  gen->add_option("--density", gen_density, "target volume density in [0,1)");
  gen->add_option("--placement", gen_placement,
                  "boolean (overlapping) or rsa (non-overlapping)");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--radius", gen_radius, "sphere/cylinder radius");
  gen->add_option("--edge", gen_edge, "cube edge length");
  gen->add_option("--height", gen_height, "cylinder height");
  gen->add_option("--semiaxes", gen_semiaxes, "ellipsoid semi-axes a b c")
      ->expected(3);
  gen->add_option("--edges", gen_edges, "cuboid edge lengths e1 e2 e3")
      ->expected(3);
  gen->add_option("-o,--out", gen_out, "output volume (SGV1)")->required();

  // corrupt ----------------------------------------------------------------
  auto* cor = app.add_subcommand("corrupt", "inject systematic errors");
  std::string cor_in, cor_kind = "uniform", cor_out;
  double cor_rate = 0.05;
  std::uint64_t cor_seed = 1;
  std::vector<std::uint32_t> cor_raw;
  cor->add_option("-i,--in", cor_in, "ground-truth volume")->required();
  cor->add_option("--kind", cor_kind,
                  "erosion|dilation|fuzzy-edge|fn-cluster|fp-cluster|"
                  "uniform|nonuniform");
  cor->add_option("--rate", cor_rate, "error rate in (0,1)");
  cor->add_option("--seed", cor_seed, "RNG seed");
  cor->add_option("-o,--out", cor_out, "output volume (SGV1)")->required();
  add_raw_dims_option(cor, cor_raw);

  // evaluate ----------------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "compare prediction to ground truth");
  std::string ev_gt, ev_pr, ev_format = "text";
  double ev_a = 1.0, ev_k = 5.0;
  std::vector<std::uint32_t> ev_raw;
  ev->add_option("--gt", ev_gt, "ground-truth volume")->required();
  ev->add_option("--pr", ev_pr, "predicted volume")->required();
  ev->add_option("-a", ev_a, "logistic transition speed (1/voxel)");
  ev->add_option("-k", ev_k, "proximity range (voxels)");
  ev->add_option("--format", ev_format, "text|csv|json");
  add_raw_dims_option(ev, ev_raw);

  // edt ---------------------------------------------------------------------
  auto* edt = app.add_subcommand("edt", "export a distance field");
  std::string edt_in, edt_out, edt_mode = "boundary";
  std::vector<std::uint32_t> edt_raw;
  edt->add_option("-i,--in", edt_in, "input volume")->required();
  edt->add_option("--mode", edt_mode,
                  "boundary (two-sided) | foreground | background "
                  "(distance to that phase)");
  edt->add_option("-o,--out", edt_out, "output field (SGF1)")->required();
  add_raw_dims_option(edt, edt_raw);

  // weightmap ----------------------------------------------------------------
  auto* wm = app.add_subcommand("weightmap", "export a weight-map slice");
  std::string wm_in, wm_out;
  double wm_a = 1.0, wm_k = 5.0;
  std::uint32_t wm_z = 0;
  std::vector<std::uint32_t> wm_raw;
  wm->add_option("-i,--in", wm_in, "input volume")->required();
  wm->add_option("-a", wm_a, "logistic transition speed");
  wm->add_option("-k", wm_k, "proximity range");
  wm->add_option("-z", wm_z, "slice index");
  wm->add_option("-o,--out", wm_out, "output image (PGM)")->required();
  add_raw_dims_option(wm, wm_raw);

  // profile -------------------------------------------------------------------
  auto* prof = app.add_subcommand("profile", "signed distance histogram");
  std::string prof_in, prof_out;
  std::vector<std::uint32_t> prof_raw;
  prof->add_option("-i,--in", prof_in, "input volume")->required();
  prof->add_option("-o,--out", prof_out, "output CSV")->required();
  add_raw_dims_option(prof, prof_raw);

  // sweep ---------------------------------------------------------------------
  auto* sw = app.add_subcommand("sweep", "run an experiment grid");
  std::string sw_config;
  std::string sw_out;
  int sw_workers = 0;
  bool sw_timing = false;
  sw->add_option("-c,--config", sw_config, "experiment config (JSON)")
      ->required();
  sw->add_option("-o,--out", sw_out, "output directory (overrides config)");
  sw->add_option("--workers", sw_workers,
                 "worker thread count (SEGEVAL_WORKERS overrides)");
  sw->add_flag("--timing", sw_timing,
               "append a wall_time_s column (makes the CSV run-dependent)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    GeometrySpec spec;
    spec.dims = dims_from(gen_dims);
    ShapeKind kind;
    if (gen_shape == "sphere") {
      kind = ShapeKind::Sphere;
    } else if (gen_shape == "cube") {
      kind = ShapeKind::Cube;
    } else if (gen_shape == "cylinder") {
      kind = ShapeKind::Cylinder;
    } else if (gen_shape == "ellipsoid") {
      kind = ShapeKind::Ellipsoid;
    } else if (gen_shape == "cuboid") {
      kind = ShapeKind::Cuboid;
    } else {
      throw CLI::ValidationError("--shape", "unknown shape " + gen_shape);
    }
    spec.shape = default_shape(kind);
    if (gen_radius && kind == ShapeKind::Sphere) {
      spec.shape = Sphere{*gen_radius};
    }
    if (gen_edge && kind == ShapeKind::Cube) {
      spec.shape = Cube{*gen_edge};
    }
    if (kind == ShapeKind::Cylinder && (gen_radius || gen_height)) {
      Cylinder c = std::get<Cylinder>(spec.shape);
      if (gen_radius) c.radius = *gen_radius;
      if (gen_height) c.height = *gen_height;
      spec.shape = c;
    }
    if (!gen_semiaxes.empty() && kind == ShapeKind::Ellipsoid) {
      spec.shape = Ellipsoid{gen_semiaxes[0], gen_semiaxes[1], gen_semiaxes[2]};
    }
    if (!gen_edges.empty() && kind == ShapeKind::Cuboid) {
      spec.shape = Cuboid{gen_edges[0], gen_edges[1], gen_edges[2]};
    }
    spec.target_density = gen_density;
    if (gen_placement == "boolean") {
      spec.placement = Placement::Boolean;
    } else if (gen_placement == "rsa" || gen_placement == "non-overlapping") {
      spec.placement = Placement::NonOverlapping;
    } else {
      throw CLI::ValidationError("--placement", "unknown " + gen_placement);
    }
    spec.seed = gen_seed;
    const VoxelGrid grid = realize(spec);
    store_volume(grid, gen_out);
    std::cout << "wrote " << gen_out << " (" << grid.dims().nx << "x"
              << grid.dims().ny << "x" << grid.dims().nz << ", density "
              << fmt_double(grid.foreground_fraction()) << ")\n";
  } else if (cor->parsed()) {
    const VoxelGrid gt = load_input(cor_in, cor_raw);
    const ErrorSpec spec{parse_error_kind(cor_kind), cor_rate, cor_seed};
    const VoxelGrid pr = inject_errors(gt, spec);
    store_volume(pr, cor_out);
    std::cout << "wrote " << cor_out << " ("
              << confusion_counts(gt, pr).errors() << " flipped voxels)\n";
  } else if (ev->parsed()) {
    const VoxelGrid gt = load_input(ev_gt, ev_raw);
    const VoxelGrid pr = load_input(ev_pr, ev_raw);
    const MetricReport report = evaluate(gt, pr, WeightFunction(ev_a, ev_k));
    if (ev_format == "text") {
      std::cout << report.to_text();
    } else if (ev_format == "csv") {
      std::cout << metric_report_csv_header() << '\n'
                << report.to_csv_row() << '\n';
    } else if (ev_format == "json") {
      std::cout << report.to_json() << '\n';
    } else {
      throw CLI::ValidationError("--format", "unknown format " + ev_format);
    }
  } else if (edt->parsed()) {
    const VoxelGrid grid = load_input(edt_in, edt_raw);
    DistanceField field = [&] {
      if (edt_mode == "boundary") {
        return boundary_distance(grid);
      }
      if (edt_mode == "foreground") {
        return squared_edt(grid, Source::Foreground);
      }
      if (edt_mode == "background") {
        return squared_edt(grid, Source::Background);
      }
      throw CLI::ValidationError("--mode", "unknown mode " + edt_mode);
    }();
    store_distance_field(field, edt_out);
    std::cout << "wrote " << edt_out << "\n";
  } else if (wm->parsed()) {
    const VoxelGrid grid = load_input(wm_in, wm_raw);
    const DistanceField field = boundary_distance(grid);
    const auto pixels = weight_map_slice(field, WeightFunction(wm_a, wm_k), wm_z);
    store_pgm(pixels, grid.dims().nx, grid.dims().ny, wm_out);
    std::cout << "wrote " << wm_out << "\n";
  } else if (prof->parsed()) {
    const VoxelGrid grid = load_input(prof_in, prof_raw);
    const DistanceProfile profile =
        distance_profile(grid, boundary_distance(grid));
    std::FILE* f = std::fopen(prof_out.c_str(), "w");
    if (f == nullptr) {
      throw std::runtime_error("cannot write " + prof_out);
    }
    std::fprintf(f, "signed_bin,count\n");
    for (std::size_t b = profile.foreground.size(); b-- > 0;) {
      if (profile.foreground[b] > 0) {
        std::fprintf(f, "-%zu,%llu\n", b,
                     static_cast<unsigned long long>(profile.foreground[b]));
      }
    }
    for (std::size_t b = 0; b < profile.background.size(); ++b) {
      if (profile.background[b] > 0) {
        std::fprintf(f, "%zu,%llu\n", b,
                     static_cast<unsigned long long>(profile.background[b]));
      }
    }
    std::fclose(f);
    std::cout << "wrote " << prof_out << "\n";
  } else if (sw->parsed()) {
    const ExperimentConfig config = load_config(sw_config);
    SweepOptions options;
    if (!sw_out.empty()) {
      options.output_dir = sw_out;
    }
    options.workers = sw_workers;
    options.timing = sw_timing;
    const auto rows = run_sweep(config, options);
    const std::filesystem::path out =
        options.output_dir.value_or(config.output_dir);
    std::cout << "wrote " << (out / "results.csv").string() << " ("
              << rows.size() << " rows)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
