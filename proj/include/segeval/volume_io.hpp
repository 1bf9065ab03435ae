#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "segeval/grid.hpp"

namespace segeval {

class DistanceField;

// Volume file format "SGV1":
//   bytes 0..3   magic ASCII "SGV1"
//   bytes 4..7   reserved, zero
//   bytes 8..19  nx, ny, nz as unsigned 32-bit little-endian
//   payload      nx*ny*nz label bytes, x-fastest order, values 0 or 1
//
// "SGF1" is the same 20-byte header with magic "SGF1" and a payload of
// 32-bit little-endian floats (real distances), used for field export.

VoxelGrid load_volume(const std::filesystem::path& path);
void store_volume(const VoxelGrid& grid, const std::filesystem::path& path);

/// Headerless uint8 import with dims supplied by the caller.
VoxelGrid load_raw_volume(const std::filesystem::path& path, GridDims dims);

void store_distance_field(const DistanceField& field,
                          const std::filesystem::path& path);

/// Binary 8-bit PGM (P5) image, row-major, width*height pixels.
void store_pgm(std::span<const std::uint8_t> pixels, std::uint32_t width,
               std::uint32_t height, const std::filesystem::path& path);

}  // namespace segeval
