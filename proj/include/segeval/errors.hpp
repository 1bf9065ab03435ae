#pragma once

#include <cstdint>
#include <string>

#include "segeval/distance.hpp"
#include "segeval/grid.hpp"

namespace segeval {

// Systematic error injectors. Each one flips exactly
// T = round(rate * |X|) voxels of the input, chosen by its own rule:
//
//   Erosion     foreground, shallowest boundary distance first   (all FN)
//   Dilation    background, shallowest first                     (all FP)
//   FuzzyEdge   both phases pooled, shallowest first             (mixed)
//   FnCluster   foreground, deepest first                        (all FN)
//   FpCluster   background, deepest first                        (all FP)
//   Uniform     uniform over all voxels
//   Nonuniform  weighted by w(z) = 1 - z/nz (densest at the top slice)
//
// The distance-ordered kinds take whole squared-distance layers until the
// next layer would overshoot T, then fill up from that layer by uniform
// sampling without replacement. This reproduces ball
// erosion/dilation/EDT-threshold level sets while hitting the target count
// exactly for any T.

enum class ErrorKind {
  Erosion,
  Dilation,
  FuzzyEdge,
  FnCluster,
  FpCluster,
  Uniform,
  Nonuniform,
};

constexpr std::array<ErrorKind, 7> kAllErrorKinds = {
    ErrorKind::Erosion,   ErrorKind::Dilation,  ErrorKind::FuzzyEdge,
    ErrorKind::FnCluster, ErrorKind::FpCluster, ErrorKind::Uniform,
    ErrorKind::Nonuniform};

std::string error_kind_name(ErrorKind kind);
ErrorKind parse_error_kind(const std::string& name);

struct ErrorSpec {
  ErrorKind kind = ErrorKind::Uniform;
  double rate = 0.05;  // in (0, 1)
  std::uint64_t seed = 0;
};

/// round(rate * count), ties to even. The injectors require the result to
/// be >= 1 and feasible for their phase.
std::uint64_t target_error_count(double rate, std::size_t voxel_count);

/// Inject errors per spec. `field` must equal boundary_distance(gt) (the
/// distance-ordered kinds key on it; Uniform/Nonuniform ignore it).
/// Deterministic: identical (gt, spec) give identical output. Throws with
/// a descriptive message when the target count is infeasible.
VoxelGrid inject_errors(const VoxelGrid& gt, const DistanceField& field,
                        const ErrorSpec& spec);

/// Convenience overload computing boundary_distance(gt) internally.
VoxelGrid inject_errors(const VoxelGrid& gt, const ErrorSpec& spec);

}  // namespace segeval
