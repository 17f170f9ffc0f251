#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#if defined(ECMH_HAVE_PCLMUL)
#include <immintrin.h>
#endif

namespace ecmh::detail {

/// 64x64 -> 128 bit carry-less product with a 4-bit window; returns {low, high}.
inline std::array<std::uint64_t, 2> clmul64_portable(std::uint64_t a, std::uint64_t b) {
  std::array<std::uint64_t, 16> window{};
  window[1] = a;
  for (std::size_t i = 2; i < 16; i += 2) {
    window[i] = window[i / 2] << 1;
    window[i + 1] = window[i] ^ a;
  }
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  for (int shift = 60; shift >= 0; shift -= 4) {
    hi = (hi << 4) | (lo >> 60);
    lo = (lo << 4) ^ window[(b >> shift) & 0xf];
  }
  // The window entries lose the top three bits of `a` once shifted; add them back.
  hi ^= ((b & 0xeeeeeeeeeeeeeeeeULL) >> 1) & (0 - ((a >> 63) & 1));
  hi ^= ((b & 0xccccccccccccccccULL) >> 2) & (0 - ((a >> 62) & 1));
  hi ^= ((b & 0x8888888888888888ULL) >> 3) & (0 - ((a >> 61) & 1));
  return {lo, hi};
}

inline std::array<std::uint64_t, 2> clmul64(std::uint64_t a, std::uint64_t b) {
#if defined(ECMH_HAVE_PCLMUL)
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(r)),
          static_cast<std::uint64_t>(_mm_extract_epi64(r, 1))};
#else
  return clmul64_portable(a, b);
#endif
}

/// Interleave zeros between the bits of a 32-bit value (carry-less square).
inline std::uint64_t spread_bits32(std::uint32_t v) {
  std::uint64_t x = v;
  x = (x | (x << 16)) & 0x0000ffff0000ffffULL;
  x = (x | (x << 8)) & 0x00ff00ff00ff00ffULL;
  x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  x = (x | (x << 2)) & 0x3333333333333333ULL;
  x = (x | (x << 1)) & 0x5555555555555555ULL;
  return x;
}

/// Carry-less square of one word; returns {low, high}.
inline std::array<std::uint64_t, 2> clsquare64(std::uint64_t a) {
#if defined(ECMH_HAVE_PCLMUL)
  return clmul64(a, a);
#else
  return {spread_bits32(static_cast<std::uint32_t>(a)),
          spread_bits32(static_cast<std::uint32_t>(a >> 32))};
#endif
}

}  // namespace ecmh::detail
