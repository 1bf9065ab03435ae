#include "segeval/grid.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "segeval/kernels.hpp"

namespace segeval {

namespace {

void validate_dims(const GridDims& dims) {
  if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
    throw std::invalid_argument("grid dimensions must all be >= 1");
  }
  // Guard the product against size_t overflow before computing it.
  const std::size_t max = std::numeric_limits<std::size_t>::max();
  if (static_cast<std::size_t>(dims.nx) > max / dims.ny ||
      static_cast<std::size_t>(dims.nx) * dims.ny > max / dims.nz) {
    throw std::invalid_argument("grid dimensions overflow addressable size");
  }
}

void require_same_dims(const VoxelGrid& a, const VoxelGrid& b) {
  if (!(a.dims() == b.dims())) {
    throw std::invalid_argument("grid dimension mismatch");
  }
}

}  // namespace

VoxelGrid::VoxelGrid(GridDims dims, std::vector<std::uint8_t> labels)
    : dims_(dims), labels_(std::move(labels)) {
  validate_dims(dims_);
  if (labels_.size() != dims_.voxel_count()) {
    throw std::invalid_argument("label payload size does not match dims");
  }
  const auto& k = kernels::active_kernels();
  if (k.count_invalid(labels_.data(), labels_.size()) != 0) {
    throw std::invalid_argument("label values must be 0 or 1");
  }
}

VoxelGrid::VoxelGrid(GridDims dims) : dims_(dims) {
  validate_dims(dims_);
  labels_.assign(dims_.voxel_count(), 0);
}

std::uint64_t VoxelGrid::foreground_count() const {
  return kernels::active_kernels().count_ones(labels_.data(), labels_.size());
}

std::uint64_t VoxelGrid::background_count() const {
  return labels_.size() - foreground_count();
}

double VoxelGrid::foreground_fraction() const {
  return static_cast<double>(foreground_count()) /
         static_cast<double>(labels_.size());
}

ConfusionCounts confusion_counts(const VoxelGrid& gt, const VoxelGrid& pr) {
  require_same_dims(gt, pr);
  std::uint64_t tally[4] = {0, 0, 0, 0};
  kernels::active_kernels().pair_tally(gt.data(), pr.data(),
                                       gt.voxel_count(), tally);
  return ConfusionCounts{tally[3], tally[1], tally[2], tally[0]};
}

std::vector<std::size_t> error_indices(const VoxelGrid& gt,
                                       const VoxelGrid& pr) {
  require_same_dims(gt, pr);
  const auto& k = kernels::active_kernels();
  const std::size_t n = gt.voxel_count();
  std::vector<std::size_t> out;
  std::size_t i = k.find_mismatch(gt.data(), pr.data(), 0, n);
  while (i < n) {
    out.push_back(i);
    i = k.find_mismatch(gt.data(), pr.data(), i + 1, n);
  }
  return out;
}

std::vector<Voxel> error_voxels(const VoxelGrid& gt, const VoxelGrid& pr) {
  std::vector<Voxel> out;
  for (std::size_t index : error_indices(gt, pr)) {
    out.push_back(gt.voxel_at(index));
  }
  return out;
}

VoxelGrid complement(const VoxelGrid& grid) {
  std::vector<std::uint8_t> labels(grid.labels().begin(), grid.labels().end());
  for (auto& v : labels) {
    v ^= 1;
  }
  return VoxelGrid(grid.dims(), std::move(labels));
}

VoxelGrid flip_voxels(const VoxelGrid& grid, std::span<const Voxel> coords) {
  const GridDims& d = grid.dims();
  std::vector<std::uint8_t> labels(grid.labels().begin(), grid.labels().end());
  for (const Voxel& v : coords) {
    if (v.x >= d.nx || v.y >= d.ny || v.z >= d.nz) {
      throw std::invalid_argument(
          "flip_voxels: coordinate (" + std::to_string(v.x) + "," +
          std::to_string(v.y) + "," + std::to_string(v.z) + ") out of bounds");
    }
    labels[grid.index_of(v.x, v.y, v.z)] ^= 1;
  }
  return VoxelGrid(d, std::move(labels));
}

}  // namespace segeval
