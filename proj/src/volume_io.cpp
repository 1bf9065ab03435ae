#include "segeval/volume_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "segeval/distance.hpp"

namespace segeval {

namespace {

constexpr std::size_t kHeaderSize = 20;

void put_u32le(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
  p[2] = static_cast<std::uint8_t>(v >> 16);
  p[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

std::array<std::uint8_t, kHeaderSize> make_header(const char magic[4],
                                                  GridDims dims) {
  std::array<std::uint8_t, kHeaderSize> h{};
  std::memcpy(h.data(), magic, 4);
  put_u32le(h.data() + 8, dims.nx);
  put_u32le(h.data() + 12, dims.ny);
  put_u32le(h.data() + 16, dims.nz);
  return h;
}

GridDims read_header(std::ifstream& in, const char magic[4],
                     const std::string& path) {
  std::array<std::uint8_t, kHeaderSize> h{};
  in.read(reinterpret_cast<char*>(h.data()), kHeaderSize);
  if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
    throw std::runtime_error(path + ": truncated header");
  }
  if (std::memcmp(h.data(), magic, 4) != 0) {
    throw std::runtime_error(path + ": bad magic (expected " +
                             std::string(magic, 4) + ")");
  }
  GridDims dims{get_u32le(h.data() + 8), get_u32le(h.data() + 12),
                get_u32le(h.data() + 16)};
  if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
    throw std::runtime_error(path + ": zero dimension in header");
  }
  return dims;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open: " + path.string());
  }
  return in;
}

}  // namespace

VoxelGrid load_volume(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  const GridDims dims = read_header(in, "SGV1", path.string());
  std::vector<std::uint8_t> labels(dims.voxel_count());
  in.read(reinterpret_cast<char*>(labels.data()),
          static_cast<std::streamsize>(labels.size()));
  if (in.gcount() != static_cast<std::streamsize>(labels.size())) {
    throw std::runtime_error(path.string() + ": truncated payload");
  }
  try {
    return VoxelGrid(dims, std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void store_volume(const VoxelGrid& grid, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  const auto header = make_header("SGV1", grid.dims());
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  out.write(reinterpret_cast<const char*>(grid.data()),
            static_cast<std::streamsize>(grid.voxel_count()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

VoxelGrid load_raw_volume(const std::filesystem::path& path, GridDims dims) {
  std::ifstream in = open_in(path);
  std::vector<std::uint8_t> labels(dims.voxel_count());
  in.read(reinterpret_cast<char*>(labels.data()),
          static_cast<std::streamsize>(labels.size()));
  if (in.gcount() != static_cast<std::streamsize>(labels.size())) {
    throw std::runtime_error(path.string() +
                             ": raw payload smaller than the given dims");
  }
  try {
    return VoxelGrid(dims, std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void store_distance_field(const DistanceField& field,
                          const std::filesystem::path& path) {
  static_assert(sizeof(float) == 4 && std::endian::native == std::endian::little,
                "SGF1 export assumes little-endian IEEE floats");
  std::ofstream out = open_out(path);
  const auto header = make_header("SGF1", field.dims());
  out.write(reinterpret_cast<const char*>(header.data()), header.size());
  std::vector<float> buffer(field.voxel_count());
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    buffer[i] = static_cast<float>(field.distance(i));
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(float)));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

void store_pgm(std::span<const std::uint8_t> pixels, std::uint32_t width,
               std::uint32_t height, const std::filesystem::path& path) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("pgm: pixel count does not match dimensions");
  }
  std::ofstream out = open_out(path);
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace segeval
