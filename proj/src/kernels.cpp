#include "segeval/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace segeval::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels. These define the semantics; the SIMD variants
// must match them exactly on every input.
// ---------------------------------------------------------------------------

namespace {

std::uint64_t count_ones_scalar(const std::uint8_t* p, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c += p[i] == 1;
  }
  return c;
}

std::uint64_t count_invalid_scalar(const std::uint8_t* p, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    c += p[i] > 1;
  }
  return c;
}

void pair_tally_scalar(const std::uint8_t* a, const std::uint8_t* b,
                       std::size_t n, std::uint64_t out[4]) {
  std::uint64_t c[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned key =
        (static_cast<unsigned>(a[i] == 1) << 1) | (b[i] == 1);
    ++c[key];
  }
  for (int k = 0; k < 4; ++k) {
    out[k] += c[k];
  }
}

std::size_t find_mismatch_scalar(const std::uint8_t* a, const std::uint8_t* b,
                                 std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    if (a[i] != b[i]) {
      return i;
    }
  }
  return end;
}

void threshold_labels_scalar(const std::int32_t* sq, std::size_t n,
                             std::int32_t threshold, Threshold op,
                             std::uint8_t* out) {
  if (op == Threshold::Greater) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = sq[i] > threshold;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = sq[i] <= threshold;
    }
  }
}

constexpr KernelTable kScalarTable = {
    "scalar",         count_ones_scalar,     count_invalid_scalar,
    pair_tally_scalar, find_mismatch_scalar, threshold_labels_scalar,
};

const KernelTable* detect_table() {
  if (const char* env = std::getenv("SEGEVAL_FORCE_SCALAR");
      env != nullptr && env[0] != '\0' && env[0] != '0') {
    return &kScalarTable;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) {
    return &avx2_kernels();
  }
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
  return &neon_kernels();
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*> g_override{nullptr};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

const KernelTable& active_kernels() {
  if (const KernelTable* t = g_override.load(std::memory_order_relaxed)) {
    return *t;
  }
  static const KernelTable* detected = detect_table();
  return *detected;
}

void set_active_kernels(const KernelTable* table) {
  g_override.store(table, std::memory_order_relaxed);
}

}  // namespace segeval::kernels
