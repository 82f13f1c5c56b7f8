#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gesim {

/// Fixed-length bit vector packed LSB-first into 64-bit words: bit `i` lives in
/// word `i / 64` at position `i % 64`. Bits past `size()` in the last word are
/// always zero, so word-wise comparisons and popcounts need no masking.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  /// Parses a string of '0'/'1' characters; character `i` becomes bit `i`.
  static BitVector from_string(std::string_view text);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const noexcept { return test(i); }
  void set(std::size_t i, bool value = true) noexcept;
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void push_back(bool value);

  std::size_t count() const noexcept;
  bool all() const noexcept;
  bool none() const noexcept;

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::size_t word_count() const noexcept { return words_.size(); }

  /// Mask of the valid bits in the last word (all ones when size is a multiple of 64).
  std::uint64_t tail_mask() const noexcept { return tail_mask_for(size_); }
  static std::uint64_t tail_mask_for(std::size_t size) noexcept;
  static std::size_t words_for(std::size_t size) noexcept { return (size + 63) / 64; }

  /// Clears any stray bits beyond size() after raw word writes.
  void trim() noexcept;

  BitVector& operator|=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator^=(const BitVector& other);

  std::string to_string(char one = '1', char zero = '0') const;

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend auto operator<=>(const BitVector& a, const BitVector& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// MSB-first byte packing, zero padded to a byte boundary.
std::vector<std::uint8_t> pack_bytes_msb_first(const BitVector& bits);
BitVector unpack_bytes_msb_first(std::span<const std::uint8_t> bytes, std::size_t n_bits);

}  // namespace gesim
