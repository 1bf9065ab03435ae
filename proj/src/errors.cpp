#include "segeval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "segeval/rng.hpp"

namespace segeval {

std::string error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Erosion:
      return "erosion";
    case ErrorKind::Dilation:
      return "dilation";
    case ErrorKind::FuzzyEdge:
      return "fuzzy-edge";
    case ErrorKind::FnCluster:
      return "fn-cluster";
    case ErrorKind::FpCluster:
      return "fp-cluster";
    case ErrorKind::Uniform:
      return "uniform";
    case ErrorKind::Nonuniform:
      return "nonuniform";
  }
  return "?";
}

ErrorKind parse_error_kind(const std::string& name) {
  for (ErrorKind kind : kAllErrorKinds) {
    if (error_kind_name(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown error kind: " + name);
}

std::uint64_t target_error_count(double rate, std::size_t voxel_count) {
  // round(rate * |X|), ties to even; independent of the FP environment.
  const double v = rate * static_cast<double>(voxel_count);
  const double fl = std::floor(v);
  const double frac = v - fl;
  double rounded;
  if (frac > 0.5) {
    rounded = fl + 1.0;
  } else if (frac < 0.5) {
    rounded = fl;
  } else {
    rounded = std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
  }
  return static_cast<std::uint64_t>(rounded);
}

namespace {

enum class Phase { Foreground, Background, Both };
enum class Order { Ascending, Descending };

bool phase_match(Phase phase, std::uint8_t label) {
  switch (phase) {
    case Phase::Foreground:
      return label == 1;
    case Phase::Background:
      return label == 0;
    case Phase::Both:
      return true;
  }
  return false;
}

[[noreturn]] void infeasible(const ErrorSpec& spec, std::uint64_t target,
                             std::uint64_t available, const char* pool) {
  std::ostringstream msg;
  msg << error_kind_name(spec.kind) << ": target error count " << target
      << " exceeds " << pool << " (" << available << " voxels)";
  throw std::runtime_error(msg.str());
}

// Exact-count selection over squared-distance layers. Whole layers are
// flipped in key order until the next one would overshoot the target; the
// remainder is drawn uniformly without replacement from that next layer.
// This reproduces the level sets of ball morphology / EDT thresholding
// while hitting any target count exactly.
//
// RNG use: one partial Fisher-Yates over the boundary layer, whose
// candidates are gathered in linear-index order.
std::vector<std::uint8_t> layered_flip(const VoxelGrid& gt,
                                       const DistanceField& field,
                                       Phase phase, Order order,
                                       std::uint64_t target, Rng& rng,
                                       const ErrorSpec& spec,
                                       const char* pool_name) {
  const std::uint8_t* labels = gt.data();
  const auto sq = field.squared();
  const std::size_t n = gt.voxel_count();

  std::int32_t max_key = 0;
  std::uint64_t candidates = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (phase_match(phase, labels[i])) {
      ++candidates;
      max_key = std::max(max_key, sq[i]);
    }
  }
  if (target > candidates) {
    infeasible(spec, target, candidates, pool_name);
  }

  std::vector<std::uint64_t> hist(static_cast<std::size_t>(max_key) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (phase_match(phase, labels[i])) {
      ++hist[sq[i]];
    }
  }

  // Walk the layers in selection order until the target is met. The
  // boundary layer is either fully taken (boundary_full) or sampled.
  const bool asc = order == Order::Ascending;
  std::int64_t boundary_key = -1;
  bool boundary_full = false;
  std::uint64_t partial_need = 0;
  std::uint64_t taken = 0;
  for (std::int64_t k = asc ? 0 : max_key; k >= 0 && k <= max_key;
       k += asc ? 1 : -1) {
    const std::uint64_t layer = hist[static_cast<std::size_t>(k)];
    if (layer == 0) {
      continue;
    }
    if (taken + layer <= target) {
      taken += layer;
      if (taken == target) {
        boundary_key = k;
        boundary_full = true;
        break;
      }
    } else {
      boundary_key = k;
      partial_need = target - taken;
      break;
    }
  }

  std::vector<std::uint8_t> out(labels, labels + n);
  std::vector<std::size_t> partial;
  for (std::size_t i = 0; i < n; ++i) {
    if (!phase_match(phase, labels[i])) {
      continue;
    }
    const std::int64_t key = sq[i];
    const bool before_boundary = asc ? key < boundary_key : key > boundary_key;
    if (before_boundary || (boundary_full && key == boundary_key)) {
      out[i] ^= 1;
    } else if (!boundary_full && key == boundary_key) {
      partial.push_back(i);
    }
  }

  if (partial_need > 0) {
    // Partial Fisher-Yates: the first partial_need slots become a uniform
    // sample without replacement.
    for (std::uint64_t j = 0; j < partial_need; ++j) {
      const std::uint64_t pick = j + rng.uniform_below(partial.size() - j);
      std::swap(partial[j], partial[pick]);
    }
    for (std::uint64_t j = 0; j < partial_need; ++j) {
      out[partial[j]] ^= 1;
    }
  }
  return out;
}

// Selection sampling (Knuth's Algorithm S): scan voxels in linear order,
// keeping each with probability needed/remaining. Yields exactly `target`
// indices, uniform without replacement, with one draw per scanned voxel.
std::vector<std::uint8_t> uniform_flip(const VoxelGrid& gt,
                                       std::uint64_t target, Rng& rng) {
  const std::size_t n = gt.voxel_count();
  std::vector<std::uint8_t> out(gt.data(), gt.data() + n);
  std::uint64_t needed = target;
  for (std::size_t i = 0; i < n && needed > 0; ++i) {
    if (rng.uniform() * static_cast<double>(n - i) <
        static_cast<double>(needed)) {
      out[i] ^= 1;
      --needed;
    }
  }
  return out;
}

// Weighted sampling without replacement with slice weight w(z) = 1 - z/nz
// (largest at the top slice z = 0, decreasing to 1/nz at the bottom).
// Exponential-key scheme: draw key = Exp(1)/w per voxel and keep the
// `target` smallest keys; equivalent to successive weighted draws without
// replacement. One draw per voxel in linear order.
std::vector<std::uint8_t> nonuniform_flip(const VoxelGrid& gt,
                                          std::uint64_t target, Rng& rng) {
  const GridDims& d = gt.dims();
  const std::size_t n = gt.voxel_count();
  const std::size_t plane = static_cast<std::size_t>(d.nx) * d.ny;
  const double nz = static_cast<double>(d.nz);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;  // max-heap: top = largest kept key
  std::size_t i = 0;
  for (std::uint32_t z = 0; z < d.nz; ++z) {
    const double inv_w = nz / (nz - static_cast<double>(z));
    for (std::size_t j = 0; j < plane; ++j, ++i) {
      const double key = rng.exponential() * inv_w;
      if (heap.size() < target) {
        heap.emplace(key, i);
      } else if (key < heap.top().first) {
        heap.pop();
        heap.emplace(key, i);
      }
    }
  }

  std::vector<std::uint8_t> out(gt.data(), gt.data() + n);
  while (!heap.empty()) {
    out[heap.top().second] ^= 1;
    heap.pop();
  }
  return out;
}

}  // namespace

VoxelGrid inject_errors(const VoxelGrid& gt, const DistanceField& field,
                        const ErrorSpec& spec) {
  if (!(gt.dims() == field.dims())) {
    throw std::invalid_argument("inject_errors: field dims do not match grid");
  }
  if (!(spec.rate > 0.0 && spec.rate < 1.0)) {
    throw std::invalid_argument("error rate must lie in (0, 1)");
  }
  const std::uint64_t target = target_error_count(spec.rate, gt.voxel_count());
  if (target == 0) {
    throw std::runtime_error(error_kind_name(spec.kind) +
                             ": rate rounds to zero errors for this volume");
  }
  Rng rng(spec.seed);
  std::vector<std::uint8_t> out;
  switch (spec.kind) {
    case ErrorKind::Erosion:
      out = layered_flip(gt, field, Phase::Foreground, Order::Ascending,
                         target, rng, spec, "foreground");
      break;
    case ErrorKind::Dilation:
      out = layered_flip(gt, field, Phase::Background, Order::Ascending,
                         target, rng, spec, "background");
      break;
    case ErrorKind::FuzzyEdge:
      out = layered_flip(gt, field, Phase::Both, Order::Ascending, target,
                         rng, spec, "volume");
      break;
    case ErrorKind::FnCluster:
      out = layered_flip(gt, field, Phase::Foreground, Order::Descending,
                         target, rng, spec, "foreground");
      break;
    case ErrorKind::FpCluster:
      out = layered_flip(gt, field, Phase::Background, Order::Descending,
                         target, rng, spec, "background");
      break;
    case ErrorKind::Uniform:
      out = uniform_flip(gt, target, rng);
      break;
    case ErrorKind::Nonuniform:
      out = nonuniform_flip(gt, target, rng);
      break;
  }
  return VoxelGrid(gt.dims(), std::move(out));
}

VoxelGrid inject_errors(const VoxelGrid& gt, const ErrorSpec& spec) {
  if (spec.kind == ErrorKind::Uniform || spec.kind == ErrorKind::Nonuniform) {
    // These kinds ignore distances; skip the transform.
    if (!(spec.rate > 0.0 && spec.rate < 1.0)) {
      throw std::invalid_argument("error rate must lie in (0, 1)");
    }
    const std::uint64_t target =
        target_error_count(spec.rate, gt.voxel_count());
    if (target == 0) {
      throw std::runtime_error(error_kind_name(spec.kind) +
                               ": rate rounds to zero errors for this volume");
    }
    Rng rng(spec.seed);
    auto out = spec.kind == ErrorKind::Uniform
                   ? uniform_flip(gt, target, rng)
                   : nonuniform_flip(gt, target, rng);
    return VoxelGrid(gt.dims(), std::move(out));
  }
  return inject_errors(gt, boundary_distance(gt), spec);
}

}  // namespace segeval
