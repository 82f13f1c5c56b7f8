#include "gesim/bits.hpp"

#include <bit>
#include <stdexcept>

namespace gesim {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~std::uint64_t{0} : 0) {
  trim();
}

BitVector BitVector::from_string(std::string_view text) {
  BitVector bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '1') {
      bits.set(i);
    } else if (c != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return bits;
}

void BitVector::set(std::size_t i, bool value) noexcept {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void BitVector::push_back(bool value) {
  if ((size_ & 63) == 0) words_.push_back(0);
  ++size_;
  set(size_ - 1, value);
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVector::all() const noexcept {
  if (words_.empty()) return true;
  for (std::size_t i = 0; i + 1 < words_.size(); ++i) {
    if (words_[i] != ~std::uint64_t{0}) return false;
  }
  return words_.back() == tail_mask();
}

bool BitVector::none() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::uint64_t BitVector::tail_mask_for(std::size_t size) noexcept {
  const std::size_t rem = size & 63;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

void BitVector::trim() noexcept {
  if (!words_.empty()) words_.back() &= tail_mask();
}

namespace {
void require_same_size(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit vector size mismatch");
}
}  // namespace

BitVector& BitVector::operator|=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::string BitVector::to_string(char one, char zero) const {
  std::string out(size_, zero);
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) out[i] = one;
  }
  return out;
}

std::vector<std::uint8_t> pack_bytes_msb_first(const BitVector& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits.test(i)) bytes[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
  }
  return bytes;
}

BitVector unpack_bytes_msb_first(std::span<const std::uint8_t> bytes, std::size_t n_bits) {
  if (bytes.size() * 8 < n_bits) throw std::invalid_argument("byte buffer shorter than requested bit count");
  BitVector bits(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    if (bytes[i >> 3] & (0x80u >> (i & 7))) bits.set(i);
  }
  return bits;
}

}  // namespace gesim
