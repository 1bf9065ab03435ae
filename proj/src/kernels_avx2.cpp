// AVX2 kernel variants. Compiled unconditionally on x86-64 via function
// target attributes; dispatched only after a cpuid check, see kernels.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>

#include "segeval/kernels.hpp"

#define SEGEVAL_AVX2 __attribute__((target("avx2")))

namespace segeval::kernels {

namespace {

// Sum of the 0/1 bytes of `v` added into four 64-bit lanes.
SEGEVAL_AVX2 inline __m256i sad_accumulate(__m256i acc, __m256i v) {
  return _mm256_add_epi64(acc, _mm256_sad_epu8(v, _mm256_setzero_si256()));
}

SEGEVAL_AVX2 inline std::uint64_t hsum64(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

SEGEVAL_AVX2 std::uint64_t count_ones_avx2(const std::uint8_t* p,
                                           std::size_t n) {
  const __m256i one = _mm256_set1_epi8(1);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const __m256i eq = _mm256_cmpeq_epi8(v, one);
    acc = sad_accumulate(acc, _mm256_and_si256(eq, one));
  }
  std::uint64_t c = hsum64(acc);
  for (; i < n; ++i) {
    c += p[i] == 1;
  }
  return c;
}

SEGEVAL_AVX2 std::uint64_t count_invalid_avx2(const std::uint8_t* p,
                                              std::size_t n) {
  const __m256i one = _mm256_set1_epi8(1);
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    // subs_epu8(v, 1) is zero exactly for v <= 1.
    const __m256i valid = _mm256_cmpeq_epi8(_mm256_subs_epu8(v, one), zero);
    const __m256i invalid = _mm256_andnot_si256(valid, one);
    acc = sad_accumulate(acc, invalid);
  }
  std::uint64_t c = hsum64(acc);
  for (; i < n; ++i) {
    c += p[i] > 1;
  }
  return c;
}

SEGEVAL_AVX2 void pair_tally_avx2(const std::uint8_t* a, const std::uint8_t* b,
                                  std::size_t n, std::uint64_t out[4]) {
  const __m256i one = _mm256_set1_epi8(1);
  __m256i acc_tp = _mm256_setzero_si256();
  __m256i acc_fp = _mm256_setzero_si256();
  __m256i acc_fn = _mm256_setzero_si256();
  std::size_t i = 0;
  std::uint64_t vec_total = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i ea = _mm256_cmpeq_epi8(va, one);
    const __m256i eb = _mm256_cmpeq_epi8(vb, one);
    const __m256i tp = _mm256_and_si256(ea, eb);
    const __m256i fn = _mm256_andnot_si256(eb, ea);  // a==1 && b!=1
    const __m256i fp = _mm256_andnot_si256(ea, eb);  // b==1 && a!=1
    acc_tp = sad_accumulate(acc_tp, _mm256_and_si256(tp, one));
    acc_fn = sad_accumulate(acc_fn, _mm256_and_si256(fn, one));
    acc_fp = sad_accumulate(acc_fp, _mm256_and_si256(fp, one));
    vec_total += 32;
  }
  const std::uint64_t tp = hsum64(acc_tp);
  const std::uint64_t fn = hsum64(acc_fn);
  const std::uint64_t fp = hsum64(acc_fp);
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

SEGEVAL_AVX2 std::size_t find_mismatch_avx2(const std::uint8_t* a,
                                            const std::uint8_t* b,
                                            std::size_t begin,
                                            std::size_t end) {
  std::size_t i = begin;
  for (; i + 32 <= end; i += 32) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const unsigned mask = static_cast<unsigned>(
        _mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    if (mask != 0xFFFFFFFFu) {
      return i + static_cast<std::size_t>(__builtin_ctz(~mask));
    }
  }
  for (; i < end; ++i) {
    if (a[i] != b[i]) {
      return i;
    }
  }
  return end;
}

SEGEVAL_AVX2 void threshold_labels_avx2(const std::int32_t* sq, std::size_t n,
                                        std::int32_t threshold, Threshold op,
                                        std::uint8_t* out) {
  const __m256i thr = _mm256_set1_epi32(threshold);
  const __m256i one8 = _mm256_set1_epi8(1);
  // LessEqual is the complement of Greater on the 0/1 bytes.
  const __m256i flip =
      op == Threshold::Greater ? _mm256_setzero_si256() : one8;
  const __m256i order = _mm256_setr_epi32(0, 4, 1, 5, 2, 6, 3, 7);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i* v = reinterpret_cast<const __m256i*>(sq + i);
    const __m256i g0 = _mm256_cmpgt_epi32(_mm256_loadu_si256(v + 0), thr);
    const __m256i g1 = _mm256_cmpgt_epi32(_mm256_loadu_si256(v + 1), thr);
    const __m256i g2 = _mm256_cmpgt_epi32(_mm256_loadu_si256(v + 2), thr);
    const __m256i g3 = _mm256_cmpgt_epi32(_mm256_loadu_si256(v + 3), thr);
    // packs interleave 128-bit lanes; the final dword permute restores
    // element order.
    const __m256i p01 = _mm256_packs_epi32(g0, g1);
    const __m256i p23 = _mm256_packs_epi32(g2, g3);
    __m256i bytes = _mm256_packs_epi16(p01, p23);
    bytes = _mm256_and_si256(bytes, one8);
    bytes = _mm256_xor_si256(bytes, flip);
    bytes = _mm256_permutevar8x32_epi32(bytes, order);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), bytes);
  }
  for (; i < n; ++i) {
    out[i] = op == Threshold::Greater ? sq[i] > threshold : sq[i] <= threshold;
  }
}

constexpr KernelTable kAvx2Table = {
    "avx2",          count_ones_avx2,     count_invalid_avx2,
    pair_tally_avx2, find_mismatch_avx2, threshold_labels_avx2,
};

}  // namespace

const KernelTable& avx2_kernels() { return kAvx2Table; }

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

}  // namespace segeval::kernels

#endif  // x86-64
