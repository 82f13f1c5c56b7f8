#include <algorithm>
#include <bit>

#include "gesim/kernels.hpp"

namespace gesim::kernels::scalar {

void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out) {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > threshold) out[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
}

std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return n;
}

bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask) {
  std::uint64_t missing = 0;
  for (std::size_t i = 0; i + 1 < words; ++i) {
    out[i] = a[i] | b[i];
    missing |= ~out[i];
  }
  if (words > 0) {
    out[words - 1] = a[words - 1] | b[words - 1];
    missing |= tail_mask & ~out[words - 1];
  }
  return missing == 0;
}

void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y) {
  std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(dim), 0.0);
  for (std::size_t l = 0; l < dim; ++l) {
    const double xl = x[l];
    if (xl == 0.0) continue;
    const double* col = matrix.data() + l * dim;
    for (std::size_t i = 0; i < dim; ++i) y[i] += col[i] * xl;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (((row_mask[i >> 6] >> (i & 63)) & 1u) == 0) y[i] = 0.0;
  }
}

}  // namespace gesim::kernels::scalar
