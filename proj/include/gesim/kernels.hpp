#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference in
// gesim::kernels::scalar and, on x86-64, an AVX2 variant in
// gesim::kernels::avx2. The unqualified entry points dispatch to the backend
// selected at startup (the widest one the CPU supports). Variants are
// bit-identical: floating-point kernels keep the scalar summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace gesim::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend backend) noexcept;
bool backend_available(Backend backend) noexcept;
Backend active_backend() noexcept;
/// Forces a backend (tests, benchmarking). Throws std::invalid_argument if unavailable.
void set_backend(Backend backend);

/// Packs (x[i] > threshold) into LSB-first words; out must hold ceil(n/64) words.
void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out);

/// Number of differing bits between two equally sized word spans.
std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// out = a | b over `words` words; returns true iff out has every bit set,
/// treating the last word as full when it equals tail_mask.
bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask);

/// y[i] = row_mask bit i ? sum_l m(i,l) * x[l] : 0 for a dim x dim column-major
/// matrix m (element (i,l) at l*dim + i). Columns with x[l] == 0 are skipped;
/// for every row the products are accumulated in increasing l.
void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y);

namespace scalar {
void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out);
std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask);
void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y);
}  // namespace scalar

#if defined(GESIM_HAVE_AVX2)
namespace avx2 {
void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out);
std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask);
void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace gesim::kernels
