#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gesim/kernels.hpp"

namespace gesim::kernels {

namespace {

Backend detect() noexcept {
  if (const char* env = std::getenv("GESIM_FORCE_SCALAR"); env != nullptr && *env != '\0' && *env != '0') {
    return Backend::scalar;
  }
#if defined(GESIM_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend backend) noexcept {
  if (backend == Backend::scalar) return true;
#if defined(GESIM_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("kernel backend not available on this CPU: " + std::string(backend_name(backend)));
  }
  current().store(backend, std::memory_order_relaxed);
}

// TODO: NEON variants for aarch64 builds; those currently run the scalar path.
#if defined(GESIM_HAVE_AVX2)
#define GESIM_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define GESIM_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void quantize_above(std::span<const double> x, double threshold, std::span<std::uint64_t> out) {
  GESIM_DISPATCH(quantize_above, x, threshold, out);
}

std::size_t hamming_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return GESIM_DISPATCH(hamming_distance, a, b);
}

bool or_is_full(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out, std::size_t words,
                std::uint64_t tail_mask) {
  return GESIM_DISPATCH(or_is_full, a, b, out, words, tail_mask);
}

void masked_matvec(std::span<const double> matrix, std::size_t dim, std::span<const double> x,
                   std::span<const std::uint64_t> row_mask, std::span<double> y) {
  GESIM_DISPATCH(masked_matvec, matrix, dim, x, row_mask, y);
}

#undef GESIM_DISPATCH

}  // namespace gesim::kernels
