#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segeval/distance.hpp"
#include "segeval/grid.hpp"

namespace segeval {

/// Logistic weighting of a distance r:
///   f(r) = 1 / (1 + exp(-a * (r - k)))
/// k is the proximity range (f(k) = 0.5 exactly), a the transition speed.
/// Strictly increasing, range (0, 1).
class WeightFunction {
 public:
  WeightFunction(double a, double k);

  double a() const { return a_; }
  double k() const { return k_; }
  double operator()(double r) const;

 private:
  double a_;
  double k_;
};

/// Suggested transition speed 4 / (k_max - k), where k_max is the distance
/// beyond which an error is unambiguously far. Throws when k_max <= k.
double suggest_a(double k, double k_max);

/// 2*TP / (2*TP + FP + FN). Empty when the foreground is absent from both
/// grids (tp = fp = fn = 0), which leaves the ratio undefined.
std::optional<double> dsc(const ConfusionCounts& c);

/// (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)). Empty when any
/// marginal sum is zero. The numerator is formed in 128-bit integers; the
/// four marginals can each reach |X|, so naive 64-bit products overflow.
std::optional<double> mcc(const ConfusionCounts& c);

/// Directed average Hausdorff distance: sum of boundary distances over
/// disagreeing voxels divided by |X| (total voxel count, not error count).
/// Accumulated in linear-index order. `field` must be boundary_distance(gt).
double ahd(const VoxelGrid& gt, const VoxelGrid& pr, const DistanceField& field);

/// Surface consistency coefficient: mean logistic weight of the boundary
/// distance over disagreeing voxels. Empty when the grids are identical.
/// Values near 0 mean errors hug the surface; near 1 mean errors lie beyond
/// the proximity range. Accumulated in linear-index order.
std::optional<double> scc(const VoxelGrid& gt, const VoxelGrid& pr,
                          const DistanceField& field, const WeightFunction& w);

/// Histogram of boundary distances, bin = ceil(distance), split by phase.
/// Foreground voxels are conventionally plotted on a negative axis.
struct DistanceProfile {
  std::vector<std::uint64_t> foreground;  // index = bin, entry 0 unused
  std::vector<std::uint64_t> background;

  std::uint64_t total_mass() const;
};

DistanceProfile distance_profile(const VoxelGrid& gt, const DistanceField& field);

/// (max, min) boundary distance over disagreeing voxels; empty when none.
std::optional<std::pair<double, double>> extreme_error_distance(
    const VoxelGrid& gt, const VoxelGrid& pr, const DistanceField& field);

struct MetricReport {
  ConfusionCounts counts;
  double error_rate = 0.0;  // (FP+FN) / |X|
  std::optional<double> dsc;
  std::optional<double> mcc;
  double ahd = 0.0;
  std::optional<double> scc;                          // absent when no errors
  std::optional<std::pair<double, double>> extreme;   // (max, min) distance
  double weight_a = 0.0;
  double weight_k = 0.0;

  std::string to_text() const;
  /// One CSV row matching metric_report_csv_header().
  std::string to_csv_row() const;
  std::string to_json() const;
};

std::string metric_report_csv_header();

/// All metrics from one shared boundary-distance pass. Requires matching
/// dims and a two-phase ground truth.
MetricReport evaluate(const VoxelGrid& gt, const VoxelGrid& pr,
                      const WeightFunction& w);

/// Same, reusing a precomputed boundary_distance(gt).
MetricReport evaluate_with_field(const VoxelGrid& gt, const VoxelGrid& pr,
                                 const DistanceField& field,
                                 const WeightFunction& w);

/// 8-bit weight-map image of one z-slice: pixel = round(255*(1 - f(d))),
/// so voxels near the surface appear bright. Row-major, x fastest.
std::vector<std::uint8_t> weight_map_slice(const DistanceField& field,
                                           const WeightFunction& w,
                                           std::uint32_t z);

}  // namespace segeval
