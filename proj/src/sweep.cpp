#include "segeval/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "segeval/format.hpp"
#include "segeval/volume_io.hpp"

namespace segeval {

namespace {

using nlohmann::json;

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "sphere") return ShapeKind::Sphere;
  if (name == "cube") return ShapeKind::Cube;
  if (name == "cylinder") return ShapeKind::Cylinder;
  if (name == "ellipsoid") return ShapeKind::Ellipsoid;
  if (name == "cuboid") return ShapeKind::Cuboid;
  throw std::runtime_error("unknown shape: " + name);
}

GridDims parse_dims(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::runtime_error("dims must be an array [nx, ny, nz]");
  }
  return GridDims{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>(),
                  j[2].get<std::uint32_t>()};
}

ParticleShape parse_shape(const json& g) {
  const ShapeKind kind = parse_shape_kind(g.at("shape").get<std::string>());
  ParticleShape shape = default_shape(kind);
  switch (kind) {
    case ShapeKind::Sphere:
      if (g.contains("radius")) {
        shape = Sphere{g["radius"].get<double>()};
      }
      break;
    case ShapeKind::Cube:
      if (g.contains("edge")) {
        shape = Cube{g["edge"].get<double>()};
      }
      break;
    case ShapeKind::Cylinder:
      if (g.contains("radius") || g.contains("height")) {
        Cylinder c = std::get<Cylinder>(shape);
        if (g.contains("radius")) c.radius = g["radius"].get<double>();
        if (g.contains("height")) c.height = g["height"].get<double>();
        shape = c;
      }
      break;
    case ShapeKind::Ellipsoid:
      if (g.contains("semiaxes")) {
        const auto& ax = g["semiaxes"];
        shape = Ellipsoid{ax.at(0).get<double>(), ax.at(1).get<double>(),
                          ax.at(2).get<double>()};
      }
      break;
    case ShapeKind::Cuboid:
      if (g.contains("edges")) {
        const auto& e = g["edges"];
        shape = Cuboid{e.at(0).get<double>(), e.at(1).get<double>(),
                       e.at(2).get<double>()};
      }
      break;
  }
  return shape;
}

std::vector<double> default_rates() {
  // Seven steps from 1% to 15%.
  std::vector<double> rates;
  for (int i = 0; i < 7; ++i) {
    rates.push_back(0.01 + i * (0.14 / 6.0));
  }
  return rates;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string spec_hash(const GeometrySpec& spec) {
  std::ostringstream key;
  key << "dims=" << spec.dims.nx << 'x' << spec.dims.ny << 'x' << spec.dims.nz
      << ";shape=" << shape_name(spec.shape) << '['
      << shape_params_string(spec.shape) << "];density="
      << fmt_double(spec.target_density) << ";placement="
      << (spec.placement == Placement::Boolean ? "boolean" : "rsa")
      << ";seed=" << spec.seed;
  std::ostringstream hex;
  hex << std::hex << fnv1a64(key.str());
  return hex.str();
}

std::string sanitize_note(std::string note) {
  for (char& c : note) {
    if (c == ',' || c == '\n' || c == '\r') {
      c = ';';
    }
  }
  return note;
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv("SEGEVAL_WORKERS");
      env != nullptr && env[0] != '\0') {
    const int v = std::atoi(env);
    if (v > 0) {
      return v;
    }
  }
  if (requested > 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config: " + path.string());
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }

  ExperimentConfig cfg;
  cfg.version = root.value("version", 1);
  if (cfg.version != 1) {
    throw std::runtime_error(path.string() + ": unsupported config version " +
                             std::to_string(cfg.version));
  }
  cfg.output_dir = root.value("output_dir", std::string("sweep-out"));

  GridDims global_dims{128, 128, 128};
  if (root.contains("dims")) {
    global_dims = parse_dims(root["dims"]);
  }

  if (!root.contains("geometries") || !root["geometries"].is_array() ||
      root["geometries"].empty()) {
    throw std::runtime_error(path.string() +
                             ": config needs a nonempty geometries array");
  }
  for (const auto& g : root["geometries"]) {
    GeometryEntry entry;
    if (g.contains("volume")) {
      entry.volume_path = g["volume"].get<std::string>();
      entry.id = g.value("id", entry.volume_path.stem().string());
    } else {
      GeometrySpec spec;
      spec.dims = g.contains("dims") ? parse_dims(g["dims"]) : global_dims;
      spec.shape = parse_shape(g);
      spec.target_density = g.at("density").get<double>();
      const std::string placement = g.value("placement", "boolean");
      if (placement == "boolean") {
        spec.placement = Placement::Boolean;
      } else if (placement == "rsa" || placement == "non-overlapping") {
        spec.placement = Placement::NonOverlapping;
      } else {
        throw std::runtime_error("unknown placement: " + placement);
      }
      spec.seed = g.value("seed", 1ull);
      entry.spec = spec;
      if (g.contains("id")) {
        entry.id = g["id"].get<std::string>();
      } else {
        std::ostringstream id;
        id << shape_name(spec.shape) << '-'
           << fmt_double(spec.target_density) << '-' << placement << "-s"
           << spec.seed;
        entry.id = id.str();
      }
    }
    cfg.geometries.push_back(std::move(entry));
  }

  if (root.contains("error_kinds")) {
    for (const auto& k : root["error_kinds"]) {
      cfg.error_kinds.push_back(parse_error_kind(k.get<std::string>()));
    }
  } else {
    cfg.error_kinds.assign(kAllErrorKinds.begin(), kAllErrorKinds.end());
  }

  if (root.contains("rates")) {
    for (const auto& r : root["rates"]) {
      cfg.rates.push_back(r.get<double>());
    }
  } else {
    cfg.rates = default_rates();
  }
  for (double r : cfg.rates) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::runtime_error("rates must lie in (0, 1)");
    }
  }
  if (cfg.rates.empty() || cfg.error_kinds.empty()) {
    throw std::runtime_error("rate and error-kind grids must be nonempty");
  }

  if (root.contains("weights")) {
    for (const auto& w : root["weights"]) {
      if (w.is_array()) {
        cfg.weights.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
      } else {
        cfg.weights.push_back(
            {w.at("a").get<double>(), w.at("k").get<double>()});
      }
    }
  } else {
    cfg.weights = {{1.0, 5.0}, {2.0, 3.0}};
  }
  if (cfg.weights.empty()) {
    throw std::runtime_error("weights must be nonempty");
  }

  if (root.contains("replicate_seeds")) {
    for (const auto& s : root["replicate_seeds"]) {
      cfg.replicate_seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    cfg.replicate_seeds = {1};
  }
  if (cfg.replicate_seeds.empty()) {
    throw std::runtime_error("replicate_seeds must be nonempty");
  }
  return cfg;
}

std::string result_csv_header(bool timing) {
  std::string h =
      "geometry,shape,density,placement,error_kind,rate,seed,a,k,"
      "error_rate_measured,dsc,mcc,ahd,scc,max_error_distance,"
      "min_error_distance";
  if (timing) {
    h += ",wall_time_s";
  }
  h += ",note";
  return h;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

}  // namespace

std::string result_csv_row(const ResultRow& row, bool timing) {
  std::ostringstream out;
  out << row.geometry << ',' << row.shape << ',' << row.density << ','
      << row.placement << ',' << row.error_kind << ',' << fmt_double(row.rate)
      << ',' << row.seed << ',';
  if (row.report) {
    const MetricReport& r = *row.report;
    out << fmt_double(row.weight_a) << ',' << fmt_double(row.weight_k) << ','
        << fmt_double(r.error_rate) << ',' << opt_str(r.dsc) << ','
        << opt_str(r.mcc) << ',' << fmt_double(r.ahd) << ',' << opt_str(r.scc)
        << ',';
    if (r.extreme) {
      out << fmt_double(r.extreme->first) << ','
          << fmt_double(r.extreme->second);
    } else {
      out << ',';
    }
  } else {
    out << ",,,,,,,,";  // a,k + seven empty metric columns
  }
  if (timing) {
    out << ',' << fmt_double(row.wall_time_s);
  }
  out << ',' << sanitize_note(row.note);
  return out.str();
}

namespace {

struct Cell {
  ErrorKind kind;
  double rate;
  std::uint64_t seed;
};

VoxelGrid obtain_geometry(const GeometryEntry& entry,
                          const std::filesystem::path& volume_dir) {
  if (!entry.spec) {
    return load_volume(entry.volume_path);
  }
  const std::filesystem::path cached =
      volume_dir / ("vol_" + spec_hash(*entry.spec) + ".sgv");
  if (std::filesystem::exists(cached)) {
    return load_volume(cached);
  }
  VoxelGrid grid = realize(*entry.spec);
  store_volume(grid, cached);
  return grid;
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& config,
                                 const SweepOptions& options) {
  const std::filesystem::path out_dir =
      options.output_dir.value_or(config.output_dir);
  const std::filesystem::path volume_dir = out_dir / "volumes";
  std::filesystem::create_directories(volume_dir);

  const int workers = resolve_workers(options.workers);

  std::vector<Cell> cells;
  for (ErrorKind kind : config.error_kinds) {
    for (double rate : config.rates) {
      for (std::uint64_t seed : config.replicate_seeds) {
        cells.push_back(Cell{kind, rate, seed});
      }
    }
  }

  std::vector<ResultRow> rows;
  for (const GeometryEntry& entry : config.geometries) {
    const VoxelGrid grid = obtain_geometry(entry, volume_dir);
    // One boundary-distance transform per geometry, shared by every
    // injector and metric evaluation below.
    const DistanceField field = boundary_distance(grid);

    std::string shape, density, placement;
    if (entry.spec) {
      shape = shape_name(entry.spec->shape);
      density = fmt_double(entry.spec->target_density);
      placement =
          entry.spec->placement == Placement::Boolean ? "boolean" : "rsa";
    }

    // Cells are independent; workers pull them off a shared counter and
    // deposit rows into per-cell slots, which keeps the output in config
    // order no matter how execution interleaves.
    std::vector<std::vector<ResultRow>> cell_rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      while (true) {
        const std::size_t ci = next.fetch_add(1);
        if (ci >= cells.size()) {
          return;
        }
        const Cell& cell = cells[ci];
        const auto t0 = std::chrono::steady_clock::now();
        ResultRow base;
        base.geometry = entry.id;
        base.shape = shape;
        base.density = density;
        base.placement = placement;
        base.error_kind = error_kind_name(cell.kind);
        base.rate = cell.rate;
        base.seed = cell.seed;
        try {
          const VoxelGrid pr =
              inject_errors(grid, field, {cell.kind, cell.rate, cell.seed});
          for (const WeightParams& wp : config.weights) {
            ResultRow row = base;
            row.weight_a = wp.a;
            row.weight_k = wp.k;
            row.report =
                evaluate_with_field(grid, pr, field, WeightFunction(wp.a, wp.k));
            cell_rows[ci].push_back(std::move(row));
          }
        } catch (const std::exception& e) {
          ResultRow row = base;
          row.note = e.what();
          cell_rows[ci].push_back(std::move(row));
        }
        const std::chrono::duration<double> dt =
            std::chrono::steady_clock::now() - t0;
        for (ResultRow& row : cell_rows[ci]) {
          row.wall_time_s = dt.count();
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back(work);
      }
      for (auto& t : pool) {
        t.join();
      }
    }
    for (auto& cr : cell_rows) {
      for (auto& row : cr) {
        rows.push_back(std::move(row));
      }
    }
  }

  const std::filesystem::path csv_path = out_dir / "results.csv";
  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) {
    throw std::runtime_error("cannot write " + csv_path.string());
  }
  csv << result_csv_header(options.timing) << '\n';
  for (const ResultRow& row : rows) {
    csv << result_csv_row(row, options.timing) << '\n';
  }
  if (!csv) {
    throw std::runtime_error("write failed: " + csv_path.string());
  }
  return rows;
}

}  // namespace segeval
