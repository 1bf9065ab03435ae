#include "segeval/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "segeval/format.hpp"
#include "segeval/kernels.hpp"

namespace segeval {

WeightFunction::WeightFunction(double a, double k) : a_(a), k_(k) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("weight function: a must be > 0");
  }
  if (!(k >= 0.0)) {
    throw std::invalid_argument("weight function: k must be >= 0");
  }
}

double WeightFunction::operator()(double r) const {
  return 1.0 / (1.0 + std::exp(-a_ * (r - k_)));
}

double suggest_a(double k, double k_max) {
  if (!(k_max > k)) {
    throw std::invalid_argument(
        "suggest_a: k_max must exceed k (transition width is nonpositive)");
  }
  return 4.0 / (k_max - k);
}

std::optional<double> dsc(const ConfusionCounts& c) {
  const std::uint64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) {
    return std::nullopt;
  }
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

std::optional<double> mcc(const ConfusionCounts& c) {
  const std::uint64_t m1 = c.tp + c.fp;
  const std::uint64_t m2 = c.tp + c.fn;
  const std::uint64_t m3 = c.tn + c.fp;
  const std::uint64_t m4 = c.tn + c.fn;
  if (m1 == 0 || m2 == 0 || m3 == 0 || m4 == 0) {
    return std::nullopt;
  }
  const __int128 num = static_cast<__int128>(c.tp) * c.tn -
                       static_cast<__int128>(c.fp) * c.fn;
  // Group the radicand as (m1*m2)*(m3*m4): for perfect (anti-)correlation
  // it is a perfect square, so the result is exactly +/-1 at any realistic
  // volume size. 128-bit products; marginals can each reach |X|.
  const double p12 =
      static_cast<double>(static_cast<unsigned __int128>(m1) * m2);
  const double p34 =
      static_cast<double>(static_cast<unsigned __int128>(m3) * m4);
  const double denom = std::sqrt(p12 * p34);
  return static_cast<double>(num) / denom;
}

namespace {

// Visit the indices where the two label arrays disagree, ascending. The
// SIMD mismatch scan makes this cheap when errors are sparse.
template <typename Fn>
void for_each_error(const VoxelGrid& gt, const VoxelGrid& pr, Fn&& fn) {
  const auto& k = kernels::active_kernels();
  const std::size_t n = gt.voxel_count();
  std::size_t i = k.find_mismatch(gt.data(), pr.data(), 0, n);
  while (i < n) {
    fn(i);
    i = k.find_mismatch(gt.data(), pr.data(), i + 1, n);
  }
}

void require_field_dims(const VoxelGrid& gt, const DistanceField& field) {
  if (!(gt.dims() == field.dims())) {
    throw std::invalid_argument("distance field dims do not match grid");
  }
}

void require_same_dims(const VoxelGrid& gt, const VoxelGrid& pr) {
  if (!(gt.dims() == pr.dims())) {
    throw std::invalid_argument("grid dimension mismatch");
  }
}

}  // namespace

double ahd(const VoxelGrid& gt, const VoxelGrid& pr,
           const DistanceField& field) {
  require_same_dims(gt, pr);
  require_field_dims(gt, field);
  // Fixed linear-index accumulation order: bit-reproducible.
  double sum = 0.0;
  for_each_error(gt, pr, [&](std::size_t i) { sum += field.distance(i); });
  return sum / static_cast<double>(gt.voxel_count());
}

std::optional<double> scc(const VoxelGrid& gt, const VoxelGrid& pr,
                          const DistanceField& field,
                          const WeightFunction& w) {
  require_same_dims(gt, pr);
  require_field_dims(gt, field);
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_error(gt, pr, [&](std::size_t i) {
    sum += w(field.distance(i));
    ++count;
  });
  if (count == 0) {
    return std::nullopt;
  }
  return sum / static_cast<double>(count);
}

std::uint64_t DistanceProfile::total_mass() const {
  std::uint64_t total = 0;
  for (auto v : foreground) {
    total += v;
  }
  for (auto v : background) {
    total += v;
  }
  return total;
}

DistanceProfile distance_profile(const VoxelGrid& gt,
                                 const DistanceField& field) {
  require_field_dims(gt, field);
  DistanceProfile profile;
  const std::uint8_t* labels = gt.data();
  for (std::size_t i = 0; i < gt.voxel_count(); ++i) {
    const auto bin =
        static_cast<std::size_t>(std::ceil(field.distance(i)));
    auto& side = labels[i] == 1 ? profile.foreground : profile.background;
    if (side.size() <= bin) {
      side.resize(bin + 1, 0);
    }
    ++side[bin];
  }
  return profile;
}

std::optional<std::pair<double, double>> extreme_error_distance(
    const VoxelGrid& gt, const VoxelGrid& pr, const DistanceField& field) {
  require_same_dims(gt, pr);
  require_field_dims(gt, field);
  std::int32_t max_sq = -1;
  std::int32_t min_sq = -1;
  for_each_error(gt, pr, [&](std::size_t i) {
    const std::int32_t sq = field.squared_at(i);
    if (max_sq < 0 || sq > max_sq) {
      max_sq = sq;
    }
    if (min_sq < 0 || sq < min_sq) {
      min_sq = sq;
    }
  });
  if (max_sq < 0) {
    return std::nullopt;
  }
  return std::make_pair(std::sqrt(static_cast<double>(max_sq)),
                        std::sqrt(static_cast<double>(min_sq)));
}

MetricReport evaluate_with_field(const VoxelGrid& gt, const VoxelGrid& pr,
                                 const DistanceField& field,
                                 const WeightFunction& w) {
  require_same_dims(gt, pr);
  require_field_dims(gt, field);

  MetricReport report;
  report.weight_a = w.a();
  report.weight_k = w.k();
  report.counts = confusion_counts(gt, pr);
  report.error_rate = static_cast<double>(report.counts.errors()) /
                      static_cast<double>(gt.voxel_count());
  report.dsc = dsc(report.counts);
  report.mcc = mcc(report.counts);

  // Single pass over the error set for the distance-based metrics, in
  // linear-index order.
  double ahd_sum = 0.0;
  double scc_sum = 0.0;
  std::uint64_t count = 0;
  std::int32_t max_sq = -1, min_sq = -1;
  for_each_error(gt, pr, [&](std::size_t i) {
    const std::int32_t sq = field.squared_at(i);
    const double dist = std::sqrt(static_cast<double>(sq));
    ahd_sum += dist;
    scc_sum += w(dist);
    ++count;
    if (max_sq < 0 || sq > max_sq) {
      max_sq = sq;
    }
    if (min_sq < 0 || sq < min_sq) {
      min_sq = sq;
    }
  });
  report.ahd = ahd_sum / static_cast<double>(gt.voxel_count());
  if (count > 0) {
    report.scc = scc_sum / static_cast<double>(count);
    report.extreme = std::make_pair(std::sqrt(static_cast<double>(max_sq)),
                                    std::sqrt(static_cast<double>(min_sq)));
  }
  return report;
}

MetricReport evaluate(const VoxelGrid& gt, const VoxelGrid& pr,
                      const WeightFunction& w) {
  return evaluate_with_field(gt, pr, boundary_distance(gt), w);
}

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

}  // namespace

std::string metric_report_csv_header() {
  return "tp,fp,fn,tn,error_rate,dsc,mcc,ahd,scc,"
         "max_error_distance,min_error_distance,a,k";
}

std::string MetricReport::to_csv_row() const {
  std::ostringstream out;
  out << counts.tp << ',' << counts.fp << ',' << counts.fn << ','
      << counts.tn << ',' << fmt_double(error_rate) << ',' << opt_str(dsc)
      << ',' << opt_str(mcc) << ',' << fmt_double(ahd) << ',' << opt_str(scc)
      << ',';
  if (extreme) {
    out << fmt_double(extreme->first) << ',' << fmt_double(extreme->second);
  } else {
    out << ',';
  }
  out << ',' << fmt_double(weight_a) << ',' << fmt_double(weight_k);
  return out.str();
}

std::string MetricReport::to_text() const {
  std::ostringstream out;
  out << "voxels      " << counts.total() << "\n"
      << "tp/fp/fn/tn " << counts.tp << " / " << counts.fp << " / "
      << counts.fn << " / " << counts.tn << "\n"
      << "error rate  " << fmt_double(error_rate) << "\n"
      << "dsc         " << (dsc ? fmt_double(*dsc) : "undefined") << "\n"
      << "mcc         " << (mcc ? fmt_double(*mcc) : "undefined") << "\n"
      << "ahd         " << fmt_double(ahd) << "\n"
      << "scc(a=" << fmt_double(weight_a) << ",k=" << fmt_double(weight_k)
      << ") " << (scc ? fmt_double(*scc) : "absent (no errors)") << "\n";
  if (extreme) {
    out << "error distance max/min " << fmt_double(extreme->first) << " / "
        << fmt_double(extreme->second) << "\n";
  }
  return out.str();
}

std::string MetricReport::to_json() const {
  std::ostringstream out;
  auto field = [&](const char* name, const std::optional<double>& v) {
    out << '"' << name << "\":";
    if (v) {
      out << fmt_double(*v);
    } else {
      out << "null";
    }
  };
  out << "{\"tp\":" << counts.tp << ",\"fp\":" << counts.fp
      << ",\"fn\":" << counts.fn << ",\"tn\":" << counts.tn
      << ",\"error_rate\":" << fmt_double(error_rate) << ',';
  field("dsc", dsc);
  out << ',';
  field("mcc", mcc);
  out << ",\"ahd\":" << fmt_double(ahd) << ',';
  field("scc", scc);
  out << ',';
  field("max_error_distance",
        extreme ? std::optional<double>(extreme->first) : std::nullopt);
  out << ',';
  field("min_error_distance",
        extreme ? std::optional<double>(extreme->second) : std::nullopt);
  out << ",\"a\":" << fmt_double(weight_a) << ",\"k\":" << fmt_double(weight_k)
      << '}';
  return out.str();
}

std::vector<std::uint8_t> weight_map_slice(const DistanceField& field,
                                           const WeightFunction& w,
                                           std::uint32_t z) {
  const GridDims& d = field.dims();
  if (z >= d.nz) {
    throw std::invalid_argument("weight_map_slice: z out of range");
  }
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(d.nx) * d.ny);
  const std::size_t base = static_cast<std::size_t>(z) * d.nx * d.ny;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double importance = 1.0 - w(field.distance(base + i));
    pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * importance));
  }
  return pixels;
}

}  // namespace segeval
