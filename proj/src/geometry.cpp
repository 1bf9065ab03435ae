#include "segeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace segeval {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec3 {
  double x, y, z;
};

double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

}  // namespace

ParticleShape default_shape(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Sphere:
      return Sphere{15.0};
    case ShapeKind::Cube:
      return Cube{30.0};
    case ShapeKind::Cylinder:
      return Cylinder{10.5, 210.0};
    case ShapeKind::Ellipsoid:
      return Ellipsoid{8.46, 25.39, 84.63};
    case ShapeKind::Cuboid:
      return Cuboid{14.33, 43.0, 143.33};
  }
  throw std::invalid_argument("unknown shape kind");
}

ShapeKind shape_kind(const ParticleShape& shape) {
  return static_cast<ShapeKind>(shape.index());
}

std::string shape_name(const ParticleShape& shape) {
  switch (shape_kind(shape)) {
    case ShapeKind::Sphere:
      return "sphere";
    case ShapeKind::Cube:
      return "cube";
    case ShapeKind::Cylinder:
      return "cylinder";
    case ShapeKind::Ellipsoid:
      return "ellipsoid";
    case ShapeKind::Cuboid:
      return "cuboid";
  }
  return "?";
}

std::string shape_params_string(const ParticleShape& shape) {
  std::ostringstream out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          out << "r=" << s.radius;
        } else if constexpr (std::is_same_v<T, Cube>) {
          out << "e=" << s.edge;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          out << "r=" << s.radius << ";h=" << s.height;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          out << "a=" << s.a << ";b=" << s.b << ";c=" << s.c;
        } else {
          out << "e1=" << s.e1 << ";e2=" << s.e2 << ";e3=" << s.e3;
        }
      },
      shape);
  return out.str();
}

namespace {

void validate_shape(const ParticleShape& shape) {
  const bool ok = std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return s.radius > 0;
        } else if constexpr (std::is_same_v<T, Cube>) {
          return s.edge > 0;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return s.radius > 0 && s.height > 0;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return s.a > 0 && s.a <= s.b && s.b <= s.c;
        } else {
          return s.e1 > 0 && s.e1 <= s.e2 && s.e2 <= s.e3;
        }
      },
      shape);
  if (!ok) {
    throw std::invalid_argument("invalid particle parameters: " +
                                shape_params_string(shape));
  }
}

// Thomsen's surface-area approximation for an ellipsoid (closed form,
// p = 1.6075). The exact area needs incomplete elliptic integrals and
// differs by well under 1% for these aspect ratios.
double thomsen_area(double a, double b, double c) {
  constexpr double p = 1.6075;
  const double ap = std::pow(a, p), bp = std::pow(b, p), cp = std::pow(c, p);
  return 4.0 * kPi * std::pow((ap * bp + ap * cp + bp * cp) / 3.0, 1.0 / p);
}

}  // namespace

ShapeAnalytics shape_analytics(const ParticleShape& shape) {
  validate_shape(shape);
  return std::visit(
      [](const auto& s) -> ShapeAnalytics {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          const double r = s.radius;
          return {4.0 / 3.0 * kPi * r * r * r, 4.0 * kPi * r * r};
        } else if constexpr (std::is_same_v<T, Cube>) {
          const double e = s.edge;
          return {e * e * e, 6.0 * e * e};
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          const double r = s.radius, h = s.height;
          return {kPi * r * r * h, 2.0 * kPi * r * (r + h)};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return {4.0 / 3.0 * kPi * s.a * s.b * s.c,
                  thomsen_area(s.a, s.b, s.c)};
        } else {
          return {s.e1 * s.e2 * s.e3,
                  2.0 * (s.e1 * s.e2 + s.e1 * s.e3 + s.e2 * s.e3)};
        }
      },
      shape);
}

double circumscribed_radius(const ParticleShape& shape) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Cube>) {
          return s.edge * std::sqrt(3.0) / 2.0;
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return std::hypot(s.radius, s.height / 2.0);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return s.c;
        } else {
          return 0.5 * std::sqrt(s.e1 * s.e1 + s.e2 * s.e2 + s.e3 * s.e3);
        }
      },
      shape);
}

Rotation Rotation::compose(const Rotation& r) const {
  return {w * r.w - x * r.x - y * r.y - z * r.z,
          w * r.x + x * r.w + y * r.z - z * r.y,
          w * r.y - x * r.z + y * r.w + z * r.x,
          w * r.z + x * r.y - y * r.x + z * r.w};
}

double Rotation::norm() const {
  return std::sqrt(w * w + x * x + y * y + z * z);
}

std::array<double, 9> Rotation::matrix() const {
  const double s = 2.0 / (w * w + x * x + y * y + z * z);
  return {1.0 - s * (y * y + z * z), s * (x * y - w * z), s * (x * z + w * y),
          s * (x * y + w * z), 1.0 - s * (x * x + z * z), s * (y * z - w * x),
          s * (x * z - w * y), s * (y * z + w * x), 1.0 - s * (x * x + y * y)};
}

Rotation sample_rotation(Rng& rng) {
  // Shoemake's subgroup method: three uniforms give a quaternion uniform
  // on S^3, hence uniform on SO(3).
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double s1 = std::sqrt(1.0 - u1);
  const double s2 = std::sqrt(u1);
  return {s1 * std::sin(2.0 * kPi * u2), s1 * std::cos(2.0 * kPi * u2),
          s2 * std::sin(2.0 * kPi * u3), s2 * std::cos(2.0 * kPi * u3)};
}

namespace {

// Row-interval voxelization. For the grid row (y, z fixed, x varying), the
// particle-local coordinate of voxel center (t, y, z) is affine in t:
//   p(t) = q0 + t * dx,  q0 = Rinv * ((0, y, z) - center),  dx = Rinv * e_x.
// Each shape is convex, so {t : p(t) inside} is one interval, obtained from
// quadratic (sphere, ellipsoid, cylinder barrel) and slab (boxes, cylinder
// caps) constraints. The walker then visits only voxels whose centers pass
// the inside test, without per-voxel work.

struct Interval {
  double lo;
  double hi;  // empty when lo > hi
};

constexpr Interval kEmpty{1.0, 0.0};
constexpr double kInfinity = std::numeric_limits<double>::infinity();

Interval intersect(Interval a, Interval b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// { t : lo <= q + t*d <= hi }
Interval slab(double q, double d, double lo, double hi) {
  if (d == 0.0) {
    return (q >= lo && q <= hi) ? Interval{-kInfinity, kInfinity} : kEmpty;
  }
  double t0 = (lo - q) / d;
  double t1 = (hi - q) / d;
  if (t0 > t1) {
    std::swap(t0, t1);
  }
  return {t0, t1};
}

// { t : A t^2 + B t + C <= 0 }, A >= 0
Interval quadratic(double A, double B, double C) {
  if (A <= 0.0) {
    // Degenerate: constraint is B t + C <= 0 (and B ~ 0 in practice).
    if (B == 0.0) {
      return C <= 0.0 ? Interval{-kInfinity, kInfinity} : kEmpty;
    }
    return B > 0.0 ? Interval{-kInfinity, -C / B} : Interval{-C / B, kInfinity};
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) {
    return kEmpty;
  }
  const double sq = std::sqrt(disc);
  return {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)};
}

Interval row_interval(const ParticleShape& shape, const Vec3& q0,
                      const Vec3& dx) {
  return std::visit(
      [&](const auto& s) -> Interval {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return quadratic(dot(dx, dx), 2.0 * dot(q0, dx),
                           dot(q0, q0) - s.radius * s.radius);
        } else if constexpr (std::is_same_v<T, Cube>) {
          const double h = s.edge / 2.0;
          return intersect(slab(q0.x, dx.x, -h, h),
                           intersect(slab(q0.y, dx.y, -h, h),
                                     slab(q0.z, dx.z, -h, h)));
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          const double A = dx.x * dx.x + dx.y * dx.y;
          const double B = 2.0 * (q0.x * dx.x + q0.y * dx.y);
          const double C =
              q0.x * q0.x + q0.y * q0.y - s.radius * s.radius;
          return intersect(quadratic(A, B, C),
                           slab(q0.z, dx.z, -s.height / 2.0, s.height / 2.0));
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          const double ia = 1.0 / (s.a * s.a), ib = 1.0 / (s.b * s.b),
                       ic = 1.0 / (s.c * s.c);
          const double A =
              dx.x * dx.x * ia + dx.y * dx.y * ib + dx.z * dx.z * ic;
          const double B = 2.0 * (q0.x * dx.x * ia + q0.y * dx.y * ib +
                                  q0.z * dx.z * ic);
          const double C = q0.x * q0.x * ia + q0.y * q0.y * ib +
                           q0.z * q0.z * ic - 1.0;
          return quadratic(A, B, C);
        } else {
          return intersect(
              slab(q0.x, dx.x, -s.e1 / 2.0, s.e1 / 2.0),
              intersect(slab(q0.y, dx.y, -s.e2 / 2.0, s.e2 / 2.0),
                        slab(q0.z, dx.z, -s.e3 / 2.0, s.e3 / 2.0)));
        }
      },
      shape);
}

// Half-extent of the rotated particle along a world axis: the local
// support function evaluated at the axis pulled back by the rotation.
double support(const ParticleShape& shape, const Vec3& dir) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, Cube>) {
          return s.edge / 2.0 *
                 (std::abs(dir.x) + std::abs(dir.y) + std::abs(dir.z));
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return s.radius * std::hypot(dir.x, dir.y) +
                 s.height / 2.0 * std::abs(dir.z);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return std::sqrt(s.a * s.a * dir.x * dir.x +
                           s.b * s.b * dir.y * dir.y +
                           s.c * s.c * dir.z * dir.z);
        } else {
          return 0.5 * (s.e1 * std::abs(dir.x) + s.e2 * std::abs(dir.y) +
                        s.e3 * std::abs(dir.z));
        }
      },
      shape);
}

// Visit (x_begin, x_end, y, z) spans of in-bounds voxel centers inside the
// particle. fn receives inclusive x ranges.
template <typename Fn>
void walk_particle(const ParticleShape& shape, const Rotation& rotation,
                   const std::array<double, 3>& center, GridDims dims,
                   Fn&& fn) {
  const std::array<double, 9> m = rotation.conjugate().matrix();  // R^-1
  // Columns of R^-1 are the pulled-back world axes.
  const Vec3 ux{m[0], m[3], m[6]};
  const Vec3 uy{m[1], m[4], m[7]};
  const Vec3 uz{m[2], m[5], m[8]};

  const auto axis_range = [&](double c, double half,
                              std::uint32_t n) -> std::pair<std::int64_t, std::int64_t> {
    const std::int64_t lo =
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(c - half)));
    const std::int64_t hi = std::min<std::int64_t>(
        static_cast<std::int64_t>(n) - 1,
        static_cast<std::int64_t>(std::floor(c + half)));
    return {lo, hi};
  };
  const auto [y0, y1] = axis_range(center[1], support(shape, uy), dims.ny);
  const auto [z0, z1] = axis_range(center[2], support(shape, uz), dims.nz);
  if (y0 > y1 || z0 > z1) {
    return;
  }

  for (std::int64_t z = z0; z <= z1; ++z) {
    for (std::int64_t y = y0; y <= y1; ++y) {
      // Local coordinates of the x = 0 voxel center: R^-1 * (v - center).
      const Vec3 world{-center[0], static_cast<double>(y) - center[1],
                       static_cast<double>(z) - center[2]};
      const Vec3 local{m[0] * world.x + m[1] * world.y + m[2] * world.z,
                       m[3] * world.x + m[4] * world.y + m[5] * world.z,
                       m[6] * world.x + m[7] * world.y + m[8] * world.z};
      const Interval t = row_interval(shape, local, ux);
      if (!(t.lo <= t.hi)) {
        continue;
      }
      const std::int64_t xa =
          std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(t.lo)));
      const std::int64_t xb = std::min<std::int64_t>(
          static_cast<std::int64_t>(dims.nx) - 1,
          static_cast<std::int64_t>(std::floor(t.hi)));
      if (xa <= xb) {
        fn(xa, xb, static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(z));
      }
    }
  }
}

}  // namespace

std::vector<Voxel> voxelize_particle(const ParticleShape& shape,
                                     const Rotation& rotation,
                                     const std::array<double, 3>& center,
                                     GridDims dims) {
  validate_shape(shape);
  std::vector<Voxel> out;
  walk_particle(shape, rotation, center, dims,
                [&](std::int64_t xa, std::int64_t xb, std::uint32_t y,
                    std::uint32_t z) {
                  for (std::int64_t x = xa; x <= xb; ++x) {
                    out.push_back(Voxel{static_cast<std::uint32_t>(x), y, z});
                  }
                });
  return out;
}

namespace {

void rasterize_union(const ParticleShape& shape, const Rotation& rotation,
                     const std::array<double, 3>& center, GridDims dims,
                     std::vector<std::uint8_t>& labels) {
  walk_particle(shape, rotation, center, dims,
                [&](std::int64_t xa, std::int64_t xb, std::uint32_t y,
                    std::uint32_t z) {
                  std::uint8_t* row =
                      labels.data() +
                      (static_cast<std::size_t>(z) * dims.ny + y) * dims.nx;
                  std::fill(row + xa, row + xb + 1, std::uint8_t{1});
                });
}

void validate_spec(const GeometrySpec& spec) {
  validate_shape(spec.shape);
  if (spec.dims.nx == 0 || spec.dims.ny == 0 || spec.dims.nz == 0) {
    throw std::invalid_argument("geometry dims must be >= 1 on every axis");
  }
  if (!(spec.target_density >= 0.0 && spec.target_density < 1.0)) {
    throw std::invalid_argument("target density must lie in [0, 1)");
  }
}

}  // namespace

VoxelGrid boolean_realize(const GeometrySpec& spec, Rng& rng) {
  validate_spec(spec);
  const ShapeAnalytics an = shape_analytics(spec.shape);
  const double rc = circumscribed_radius(spec.shape);

  // Plus-sampling window: centers live in the voxel domain dilated by the
  // circumscribed radius, so every in-window voxel sees the full Poisson
  // process around it (no density bias at the borders).
  const double wx = spec.dims.nx + 2.0 * rc;
  const double wy = spec.dims.ny + 2.0 * rc;
  const double wz = spec.dims.nz + 2.0 * rc;
  const double lambda =
      -std::log1p(-spec.target_density) / an.volume;  // per voxel volume
  const double mean = lambda * wx * wy * wz;

  const std::uint64_t count = rng.poisson(mean);
  std::vector<std::uint8_t> labels(spec.dims.voxel_count(), 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::array<double, 3> center = {
        rng.uniform(-0.5 - rc, spec.dims.nx - 0.5 + rc),
        rng.uniform(-0.5 - rc, spec.dims.ny - 0.5 + rc),
        rng.uniform(-0.5 - rc, spec.dims.nz - 0.5 + rc)};
    const Rotation rot = sample_rotation(rng);
    rasterize_union(spec.shape, rot, center, spec.dims, labels);
  }
  return VoxelGrid(spec.dims, std::move(labels));
}

VoxelGrid rsa_realize(const GeometrySpec& spec, Rng& rng,
                      std::uint64_t proposal_budget) {
  validate_spec(spec);
  if (spec.target_density > 0.2) {
    throw std::invalid_argument(
        "non-overlapping placement supports target densities <= 0.2");
  }
  const double rc = circumscribed_radius(spec.shape);
  const double target =
      spec.target_density * static_cast<double>(spec.dims.voxel_count());

  std::vector<std::uint8_t> labels(spec.dims.voxel_count(), 0);
  std::uint64_t filled = 0;
  std::vector<Voxel> proposal;
  for (std::uint64_t attempt = 0; attempt < proposal_budget; ++attempt) {
    if (static_cast<double>(filled) >= target) {
      return VoxelGrid(spec.dims, std::move(labels));
    }
    const std::array<double, 3> center = {
        rng.uniform(-0.5 - rc, spec.dims.nx - 0.5 + rc),
        rng.uniform(-0.5 - rc, spec.dims.ny - 0.5 + rc),
        rng.uniform(-0.5 - rc, spec.dims.nz - 0.5 + rc)};
    const Rotation rot = sample_rotation(rng);
    proposal.clear();
    bool overlap = false;
    walk_particle(spec.shape, rot, center, spec.dims,
                  [&](std::int64_t xa, std::int64_t xb, std::uint32_t y,
                      std::uint32_t z) {
                    if (overlap) {
                      return;
                    }
                    const std::size_t base =
                        (static_cast<std::size_t>(z) * spec.dims.ny + y) *
                        spec.dims.nx;
                    for (std::int64_t x = xa; x <= xb; ++x) {
                      if (labels[base + x]) {
                        overlap = true;
                        return;
                      }
                      proposal.push_back(
                          Voxel{static_cast<std::uint32_t>(x), y, z});
                    }
                  });
    if (overlap) {
      continue;
    }
    for (const Voxel& v : proposal) {
      labels[(static_cast<std::size_t>(v.z) * spec.dims.ny + v.y) *
                 spec.dims.nx +
             v.x] = 1;
    }
    filled += proposal.size();
  }
  if (static_cast<double>(filled) >= target) {
    return VoxelGrid(spec.dims, std::move(labels));
  }
  std::ostringstream msg;
  msg << "rsa_realize: proposal budget exhausted at density "
      << static_cast<double>(filled) /
             static_cast<double>(spec.dims.voxel_count())
      << " (target " << spec.target_density << ")";
  throw std::runtime_error(msg.str());
}

VoxelGrid realize(const GeometrySpec& spec) {
  Rng rng(spec.seed);
  return spec.placement == Placement::Boolean ? boolean_realize(spec, rng)
                                              : rsa_realize(spec, rng);
}

}  // namespace segeval
