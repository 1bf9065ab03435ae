#pragma once

#include <cstddef>
#include <cstdint>

// Inner-loop kernels over dense label/distance arrays.
//
// Every kernel exists as a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64) chosen once at runtime.
// Only order-independent integer work is vectorized; floating-point
// reductions elsewhere keep a fixed scalar accumulation order so results
// are identical no matter which variant runs. The test suite checks each
// variant against the scalar reference on random buffers.

namespace segeval::kernels {

enum class Threshold { Greater, LessEqual };

struct KernelTable {
  const char* name;

  /// Number of bytes equal to 1 (foreground count).
  std::uint64_t (*count_ones)(const std::uint8_t* p, std::size_t n);

  /// Number of bytes outside {0, 1} (label validation).
  std::uint64_t (*count_invalid)(const std::uint8_t* p, std::size_t n);

  /// Pairwise label tally: out[(a<<1)|b] += 1 per position.
  /// Index 0 = both 0, 1 = a0/b1, 2 = a1/b0, 3 = both 1.
  void (*pair_tally)(const std::uint8_t* a, const std::uint8_t* b,
                     std::size_t n, std::uint64_t out[4]);

  /// Smallest index in [begin, end) where a and b differ, or end.
  std::size_t (*find_mismatch)(const std::uint8_t* a, const std::uint8_t* b,
                               std::size_t begin, std::size_t end);

  /// out[i] = 1 if sq[i] <op> threshold else 0.
  void (*threshold_labels)(const std::int32_t* sq, std::size_t n,
                           std::int32_t threshold, Threshold op,
                           std::uint8_t* out);
};

const KernelTable& scalar_kernels();

/// Table selected for this machine (env SEGEVAL_FORCE_SCALAR=1 forces the
/// scalar reference).
const KernelTable& active_kernels();

/// Test hook: override dispatch globally. Passing nullptr restores the
/// runtime-detected table.
void set_active_kernels(const KernelTable* table);

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels();
bool avx2_supported();
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
const KernelTable& neon_kernels();
#endif

}  // namespace segeval::kernels
