#include "segeval/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "segeval/kernels.hpp"

namespace segeval {

namespace {

// Sentinel for "no source reachable yet". Rows that contain no source keep
// it through the per-axis passes; it never enters envelope arithmetic
// because parabolas at infinite height are skipped.
constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();

// One 1D pass of the separable transform:
//   g[j] = min_i ( (j - i)^2 + f[i] )
// over the finite entries of f. The lower envelope of the parabolas is
// maintained with rational intersection abscissas (num/den, den > 0) and
// integer cross-multiplication, so no comparison ever rounds: the output
// is exactly the integer minimum. Magnitudes stay far below 2^63 for any
// realistic axis length (f <= 2*max_axis^2, den <= 2*n).
struct EnvelopeScratch {
  std::vector<std::int32_t> centers;
  std::vector<std::int64_t> z_num;
  std::vector<std::int64_t> z_den;
  std::vector<std::int64_t> f;
  std::vector<std::int32_t> g;

  void resize(std::size_t n) {
    centers.resize(n);
    z_num.resize(n + 1);
    z_den.resize(n + 1);
    f.resize(n);
    g.resize(n);
  }
};

void envelope_pass(EnvelopeScratch& s, std::size_t n) {
  int top = -1;  // index of the rightmost live parabola
  for (std::size_t iu = 0; iu < n; ++iu) {
    if (s.f[iu] == kInf) {
      continue;
    }
    const std::int64_t i = static_cast<std::int64_t>(iu);
    const std::int64_t fi = s.f[iu] + i * i;
    std::int64_t num, den;
    while (true) {
      if (top < 0) {
        num = std::numeric_limits<std::int64_t>::min();  // left boundary -inf
        den = 1;
        break;
      }
      const std::int64_t v = s.centers[top];
      num = fi - (s.f[v] + v * v);
      den = 2 * (i - v);
      // Parabola i overtakes the top one at or before its left boundary:
      // compare num/den <= z_num/z_den by cross-multiplication.
      if (top > 0 && num * s.z_den[top] <= s.z_num[top] * den) {
        --top;
        continue;
      }
      break;
    }
    ++top;
    s.centers[top] = static_cast<std::int32_t>(i);
    s.z_num[top] = num;
    s.z_den[top] = den;
  }

  if (top < 0) {
    for (std::size_t j = 0; j < n; ++j) {
      s.g[j] = kInf;
    }
    return;
  }

  int k = 0;
  for (std::size_t ju = 0; ju < n; ++ju) {
    const std::int64_t j = static_cast<std::int64_t>(ju);
    while (k < top && s.z_num[k + 1] < j * s.z_den[k + 1]) {
      ++k;
    }
    const std::int64_t v = s.centers[k];
    s.g[ju] = static_cast<std::int32_t>((j - v) * (j - v) + s.f[v]);
  }
}

}  // namespace

DistanceField::DistanceField(GridDims dims, std::vector<std::int32_t> squared)
    : dims_(dims), squared_(std::move(squared)) {
  if (squared_.size() != dims_.voxel_count()) {
    throw std::invalid_argument("distance payload size does not match dims");
  }
}

DistanceField squared_edt(const VoxelGrid& grid, Source source) {
  const GridDims d = grid.dims();
  const std::uint8_t match = source == Source::Foreground ? 1 : 0;
  const std::size_t nx = d.nx, ny = d.ny, nz = d.nz;
  const std::size_t n = d.voxel_count();

  const std::int64_t max_axis =
      static_cast<std::int64_t>(std::max({nx, ny, nz})) - 1;
  if (3 * max_axis * max_axis > std::numeric_limits<std::int32_t>::max()) {
    throw std::invalid_argument(
        "squared_edt: axis too long for 32-bit squared distances");
  }

  std::vector<std::int32_t> dist(n);

  // Pass 1, x axis: squared distance to the nearest source in each row by
  // a forward/backward scan.
  const std::uint8_t* labels = grid.data();
  bool any_source = false;
  for (std::size_t row = 0; row < ny * nz; ++row) {
    std::int32_t* out = dist.data() + row * nx;
    const std::uint8_t* in = labels + row * nx;
    std::int64_t last = -1;
    for (std::size_t x = 0; x < nx; ++x) {
      if (in[x] == match) {
        last = static_cast<std::int64_t>(x);
        out[x] = 0;
      } else if (last >= 0) {
        const std::int64_t dx = static_cast<std::int64_t>(x) - last;
        out[x] = static_cast<std::int32_t>(dx * dx);
      } else {
        out[x] = kInf;
      }
    }
    if (last >= 0) {
      any_source = true;
    }
    last = -1;
    for (std::size_t xr = nx; xr-- > 0;) {
      if (in[xr] == match) {
        last = static_cast<std::int64_t>(xr);
      } else if (last >= 0) {
        const std::int64_t dx = last - static_cast<std::int64_t>(xr);
        const std::int64_t sq = dx * dx;
        if (sq < out[xr]) {
          out[xr] = static_cast<std::int32_t>(sq);
        }
      }
    }
  }
  if (!any_source) {
    throw std::invalid_argument("squared_edt: source phase is empty");
  }

  EnvelopeScratch scratch;

  // Pass 2, y axis.
  scratch.resize(ny);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t x = 0; x < nx; ++x) {
      std::int32_t* col = dist.data() + z * nx * ny + x;
      for (std::size_t y = 0; y < ny; ++y) {
        scratch.f[y] = col[y * nx];
      }
      envelope_pass(scratch, ny);
      for (std::size_t y = 0; y < ny; ++y) {
        col[y * nx] = scratch.g[y];
      }
    }
  }

  // Pass 3, z axis.
  scratch.resize(nz);
  const std::size_t plane = nx * ny;
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      std::int32_t* col = dist.data() + y * nx + x;
      for (std::size_t z = 0; z < nz; ++z) {
        scratch.f[z] = col[z * plane];
      }
      envelope_pass(scratch, nz);
      for (std::size_t z = 0; z < nz; ++z) {
        col[z * plane] = scratch.g[z];
      }
    }
  }

  return DistanceField(d, std::move(dist));
}

DistanceField boundary_distance(const VoxelGrid& grid) {
  const std::uint64_t fg = grid.foreground_count();
  if (fg == 0 || fg == grid.voxel_count()) {
    throw std::invalid_argument(
        "boundary_distance: grid must contain both phases");
  }
  DistanceField to_fg = squared_edt(grid, Source::Foreground);
  DistanceField to_bg = squared_edt(grid, Source::Background);
  std::vector<std::int32_t> merged(to_fg.squared().begin(),
                                   to_fg.squared().end());
  const std::uint8_t* labels = grid.data();
  const auto bg = to_bg.squared();
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (labels[i] == 1) {
      merged[i] = bg[i];
    }
  }
  return DistanceField(grid.dims(), std::move(merged));
}

namespace {

VoxelGrid threshold_morphology(const VoxelGrid& grid, double radius,
                               Source edt_source, kernels::Threshold op) {
  if (radius < 0.0) {
    throw std::invalid_argument("ball radius must be >= 0");
  }
  // Integer compare against floor(r^2) is exact: squared distances are
  // integers, so sq <= r^2 iff sq <= floor(r^2).
  const double rr = radius * radius;
  const std::int32_t thr = static_cast<std::int32_t>(std::min(
      std::floor(rr),
      static_cast<double>(std::numeric_limits<std::int32_t>::max())));

  const std::uint64_t fg = grid.foreground_count();
  const bool single_phase = fg == 0 || fg == grid.voxel_count();
  if (single_phase) {
    // No opposite phase within any radius; both operations are no-ops.
    return grid;
  }
  DistanceField field = squared_edt(grid, edt_source);
  std::vector<std::uint8_t> out(grid.voxel_count());
  kernels::active_kernels().threshold_labels(field.squared().data(),
                                             out.size(), thr, op, out.data());
  return VoxelGrid(grid.dims(), std::move(out));
}

}  // namespace

VoxelGrid erode_ball(const VoxelGrid& grid, double radius) {
  // Keep foreground voxels farther than `radius` from the background. A
  // background voxel has distance 0 and never survives Greater(thr >= 0).
  return threshold_morphology(grid, radius, Source::Background,
                              kernels::Threshold::Greater);
}

VoxelGrid dilate_ball(const VoxelGrid& grid, double radius) {
  // Keep voxels within `radius` of the foreground; foreground itself has
  // distance 0.
  return threshold_morphology(grid, radius, Source::Foreground,
                              kernels::Threshold::LessEqual);
}

}  // namespace segeval
