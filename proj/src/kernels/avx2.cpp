#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "gesim/kernels.hpp"

namespace gesim::kernels::avx2 {

namespace {

// Nibble-lookup popcount (Mula, Kurz, Lemire) over 256-bit lanes.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1,
                                          2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

}  // namespace

void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out) {
  std::fill(out.begin(), out.end(), 0);
  const __m256d t = _mm256_set1_pd(threshold);
  const std::size_t n = x.size();
  std::size_t i = 0;
  // 16 doubles -> 16 bits per step; word offsets stay 16-aligned.
  for (; i + 16 <= n; i += 16) {
    const double* p = x.data() + i;
    const unsigned m0 = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p), t, _CMP_GT_OQ)));
    const unsigned m1 =
        static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + 4), t, _CMP_GT_OQ)));
    const unsigned m2 =
        static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + 8), t, _CMP_GT_OQ)));
    const unsigned m3 =
        static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + 12), t, _CMP_GT_OQ)));
    const std::uint64_t bits = m0 | (m1 << 4) | (m2 << 8) | (m3 << 12);
    out[i >> 6] |= bits << (i & 63);
  }
  for (; i < n; ++i) {
    if (x[i] > threshold) out[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
}

std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256i total = _mm256_setzero_si256();
  while (i + 4 <= n) {
    // Byte counters saturate after 31 iterations of at most 8 per byte.
    __m256i acc = _mm256_setzero_si256();
    for (int rounds = 0; rounds < 31 && i + 4 <= n; ++rounds, i += 4) {
      const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
      const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
      acc = _mm256_add_epi8(acc, popcount_bytes(_mm256_xor_si256(va, vb)));
    }
    total = _mm256_add_epi64(total, _mm256_sad_epu8(acc, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), total);
  std::size_t count = static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
  for (; i < n; ++i) count += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return count;
}

bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask) {
  if (words == 0) return true;
  const std::size_t body = words - 1;  // last word is checked against tail_mask
  std::size_t i = 0;
  __m256i missing = _mm256_setzero_si256();
  const __m256i ones = _mm256_set1_epi64x(-1);
  for (; i + 4 <= body; i += 4) {
    const __m256i v = _mm256_or_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)),
                                      _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), v);
    missing = _mm256_or_si256(missing, _mm256_xor_si256(v, ones));
  }
  std::uint64_t rest = 0;
  for (; i < body; ++i) {
    out[i] = a[i] | b[i];
    rest |= ~out[i];
  }
  out[body] = a[body] | b[body];
  rest |= tail_mask & ~out[body];
  return rest == 0 && _mm256_testz_si256(missing, missing);
}

void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y) {
  if (dim < 4) {
    scalar::masked_matvec(matrix, dim, x, row_mask, y);
    return;
  }
  const std::size_t vec_end = dim & ~std::size_t{3};
  std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(dim), 0.0);
  // Row blocks of 16 keep four accumulators in registers across all columns.
  std::size_t i0 = 0;
  for (; i0 + 16 <= vec_end; i0 += 16) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
    for (std::size_t l = 0; l < dim; ++l) {
      const double xl = x[l];
      if (xl == 0.0) continue;
      const __m256d xv = _mm256_set1_pd(xl);
      const double* col = matrix.data() + l * dim + i0;
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(col), xv));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(col + 4), xv));
      acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(_mm256_loadu_pd(col + 8), xv));
      acc3 = _mm256_add_pd(acc3, _mm256_mul_pd(_mm256_loadu_pd(col + 12), xv));
    }
    _mm256_storeu_pd(y.data() + i0, acc0);
    _mm256_storeu_pd(y.data() + i0 + 4, acc1);
    _mm256_storeu_pd(y.data() + i0 + 8, acc2);
    _mm256_storeu_pd(y.data() + i0 + 12, acc3);
  }
  for (; i0 < vec_end; i0 += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t l = 0; l < dim; ++l) {
      const double xl = x[l];
      if (xl == 0.0) continue;
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(matrix.data() + l * dim + i0), _mm256_set1_pd(xl)));
    }
    _mm256_storeu_pd(y.data() + i0, acc);
  }
  for (std::size_t i = vec_end; i < dim; ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < dim; ++l) {
      if (x[l] == 0.0) continue;
      acc += matrix[l * dim + i] * x[l];
    }
    y[i] = acc;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (((row_mask[i >> 6] >> (i & 63)) & 1u) == 0) y[i] = 0.0;
  }
}

}  // namespace gesim::kernels::avx2
