// NEON kernel variants (aarch64). Same contracts as the scalar reference;
// the equivalence tests in test_kernels.cpp run against whichever table
// dispatch picks on the host.

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <cstdint>

#include "segeval/kernels.hpp"

namespace segeval::kernels {

namespace {

std::uint64_t count_ones_neon(const std::uint8_t* p, std::size_t n) {
  const uint8x16_t one = vdupq_n_u8(1);
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t v = vld1q_u8(p + i);
    const uint8x16_t eq = vandq_u8(vceqq_u8(v, one), one);
    c += vaddvq_u8(eq);  // per-vector sum <= 16, no overflow
  }
  for (; i < n; ++i) {
    c += p[i] == 1;
  }
  return c;
}

std::uint64_t count_invalid_neon(const std::uint8_t* p, std::size_t n) {
  const uint8x16_t one = vdupq_n_u8(1);
  std::uint64_t c = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t v = vld1q_u8(p + i);
    const uint8x16_t inv = vandq_u8(vcgtq_u8(v, one), one);
    c += vaddvq_u8(inv);
  }
  for (; i < n; ++i) {
    c += p[i] > 1;
  }
  return c;
}

void pair_tally_neon(const std::uint8_t* a, const std::uint8_t* b,
                     std::size_t n, std::uint64_t out[4]) {
  const uint8x16_t one = vdupq_n_u8(1);
  std::uint64_t tp = 0, fp = 0, fn = 0;
  std::size_t i = 0;
  std::uint64_t vec_total = 0;
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t va = vld1q_u8(a + i);
    const uint8x16_t vb = vld1q_u8(b + i);
    const uint8x16_t ea = vceqq_u8(va, one);
    const uint8x16_t eb = vceqq_u8(vb, one);
    tp += vaddvq_u8(vandq_u8(vandq_u8(ea, eb), one));
    fn += vaddvq_u8(vandq_u8(vbicq_u8(ea, eb), one));
    fp += vaddvq_u8(vandq_u8(vbicq_u8(eb, ea), one));
    vec_total += 16;
  }
  out[3] += tp;
  out[2] += fn;
  out[1] += fp;
  out[0] += vec_total - tp - fn - fp;
  for (; i < n; ++i) {
    const unsigned key =
        (static_cast<unsigned>(a[i] == 1) << 1) | (b[i] == 1);
    ++out[key];
  }
}

std::size_t find_mismatch_neon(const std::uint8_t* a, const std::uint8_t* b,
                               std::size_t begin, std::size_t end) {
  std::size_t i = begin;
  for (; i + 16 <= end; i += 16) {
    const uint8x16_t va = vld1q_u8(a + i);
    const uint8x16_t vb = vld1q_u8(b + i);
    const uint8x16_t eq = vceqq_u8(va, vb);
    if (vminvq_u8(eq) != 0xFF) {
      for (std::size_t j = i; j < i + 16; ++j) {
        if (a[j] != b[j]) {
          return j;
        }
      }
    }
  }
  for (; i < end; ++i) {
    if (a[i] != b[i]) {
      return i;
    }
  }
  return end;
}

void threshold_labels_neon(const std::int32_t* sq, std::size_t n,
                           std::int32_t threshold, Threshold op,
                           std::uint8_t* out) {
  const int32x4_t thr = vdupq_n_s32(threshold);
  const uint8x8_t one = vdup_n_u8(1);
  const uint8x8_t flip = op == Threshold::Greater ? vdup_n_u8(0) : one;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const uint32x4_t g0 = vcgtq_s32(vld1q_s32(sq + i), thr);
    const uint32x4_t g1 = vcgtq_s32(vld1q_s32(sq + i + 4), thr);
    const uint16x8_t half = vcombine_u16(vmovn_u32(g0), vmovn_u32(g1));
    uint8x8_t bytes = vand_u8(vmovn_u16(half), one);
    bytes = veor_u8(bytes, flip);
    vst1_u8(out + i, bytes);
  }
  for (; i < n; ++i) {
    out[i] = op == Threshold::Greater ? sq[i] > threshold : sq[i] <= threshold;
  }
}

constexpr KernelTable kNeonTable = {
    "neon",          count_ones_neon,     count_invalid_neon,
    pair_tally_neon, find_mismatch_neon, threshold_labels_neon,
};

}  // namespace

const KernelTable& neon_kernels() { return kNeonTable; }

}  // namespace segeval::kernels

#endif  // aarch64 / ARM NEON
