#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace segeval {

struct GridDims {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  std::uint32_t nz = 0;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  bool operator==(const GridDims&) const = default;
};

struct Voxel {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;
  bool operator==(const Voxel&) const = default;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  std::uint64_t errors() const { return fp + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Dense binary voxel volume. Labels are one byte per voxel, exactly 0
/// (background) or 1 (foreground), in x-fastest order:
/// index = x + nx*(y + ny*z). Grids are immutable after construction and
/// safe to share across threads; all "modifications" build new grids.
class VoxelGrid {
 public:
  /// Validates dims (all axes >= 1, count fits size_t) and every label byte.
  VoxelGrid(GridDims dims, std::vector<std::uint8_t> labels);

  /// All-background grid.
  explicit VoxelGrid(GridDims dims);

  const GridDims& dims() const { return dims_; }
  std::size_t voxel_count() const { return labels_.size(); }
  std::span<const std::uint8_t> labels() const { return labels_; }
  const std::uint8_t* data() const { return labels_.data(); }

  std::uint8_t label(std::size_t index) const { return labels_[index]; }
  std::uint8_t label(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    return labels_[index_of(x, y, z)];
  }

  std::size_t index_of(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_.nx) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(dims_.ny) * z);
  }
  Voxel voxel_at(std::size_t index) const {
    const std::size_t x = index % dims_.nx;
    const std::size_t rest = index / dims_.nx;
    return Voxel{static_cast<std::uint32_t>(x),
                 static_cast<std::uint32_t>(rest % dims_.ny),
                 static_cast<std::uint32_t>(rest / dims_.ny)};
  }

  std::uint64_t foreground_count() const;
  std::uint64_t background_count() const;
  double foreground_fraction() const;

  bool operator==(const VoxelGrid& other) const {
    return dims_ == other.dims_ && labels_ == other.labels_;
  }

 private:
  GridDims dims_;
  std::vector<std::uint8_t> labels_;
};

/// TP/FP/FN/TN tallies for a ground-truth/prediction pair. Throws on
/// dimension mismatch. Exact integer counts, traversal-order independent.
ConfusionCounts confusion_counts(const VoxelGrid& gt, const VoxelGrid& pr);

/// Voxels where the two grids disagree, in linear-index ascending order.
std::vector<Voxel> error_voxels(const VoxelGrid& gt, const VoxelGrid& pr);

/// Linear indices of disagreeing voxels, ascending.
std::vector<std::size_t> error_indices(const VoxelGrid& gt,
                                       const VoxelGrid& pr);

/// New grid with every label inverted.
VoxelGrid complement(const VoxelGrid& grid);

/// New grid with exactly the listed voxels inverted. Throws on
/// out-of-bounds coordinates.
VoxelGrid flip_voxels(const VoxelGrid& grid, std::span<const Voxel> coords);

}  // namespace segeval
