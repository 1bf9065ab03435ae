#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "segeval/grid.hpp"

namespace segeval {

/// Per-voxel squared Euclidean distance (voxel units, center-to-center).
/// Squared distances are exact integers; the real-valued view is sqrt.
class DistanceField {
 public:
  DistanceField(GridDims dims, std::vector<std::int32_t> squared);

  const GridDims& dims() const { return dims_; }
  std::size_t voxel_count() const { return squared_.size(); }
  std::span<const std::int32_t> squared() const { return squared_; }

  std::int32_t squared_at(std::size_t index) const { return squared_[index]; }
  double distance(std::size_t index) const {
    return std::sqrt(static_cast<double>(squared_[index]));
  }

 private:
  GridDims dims_;
  std::vector<std::int32_t> squared_;
};

enum class Source { Foreground, Background };

/// Exact squared Euclidean distance from every voxel to the nearest voxel
/// of the source phase. Separable three-pass lower-envelope transform,
/// O(|X|) per axis, integer arithmetic throughout (no tolerance anywhere).
/// Throws if the source phase is empty.
DistanceField squared_edt(const VoxelGrid& grid, Source source);

/// Boundary distance: distance to the nearest foreground voxel for
/// background voxels and to the nearest background voxel for foreground
/// voxels. Strictly positive (minimum squared value 1), invariant under
/// grid complement. Throws on single-phase grids.
DistanceField boundary_distance(const VoxelGrid& grid);

/// Ball morphology via EDT thresholds. Erosion keeps foreground voxels
/// whose squared distance to background exceeds radius^2; dilation adds
/// background voxels whose squared distance to foreground is <= radius^2.
/// erode(g, r) == complement(dilate(complement(g), r)) holds exactly.
VoxelGrid erode_ball(const VoxelGrid& grid, double radius);
VoxelGrid dilate_ball(const VoxelGrid& grid, double radius);

}  // namespace segeval
