#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/gechannel.hpp"

namespace gesim {

/// Run-length coded CSI sequence. Wire format (bit-exact): one initial-state
/// bit, then one field of field_width(M) = ceil(log2 M) bits per run holding
/// (run length - 1), most significant bit first.
struct RunLengthCode {
  bool initial_state = false;
  std::vector<std::size_t> run_lengths;
  BitVector encoded_bits;
  double rate = 0.0;  ///< encoded length / M
};

/// ceil(log2(n_bits)); zero for n_bits == 1.
unsigned field_width(std::size_t n_bits);

/// Encoded length for a sequence with `runs` runs: 1 + runs * field_width(M).
std::size_t encoded_length(std::size_t runs, std::size_t n_bits);

RunLengthCode encode(const BitVector& states);

/// Decodes a bit stream; throws MalformedCodeError if it is truncated, if the
/// runs overshoot M, or if bits remain after the runs reach M.
BitVector decode(const BitVector& encoded, std::size_t n_bits);
BitVector decode(const RunLengthCode& code, std::size_t n_bits);

/// Byte-aligned payload (MSB-first, zero padded) and its decoder; padding
/// after the final run is ignored.
std::vector<std::uint8_t> to_payload(const RunLengthCode& code);
BitVector decode_payload(std::span<const std::uint8_t> payload, std::size_t n_bits);

struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Mean compression rate over `trials` independent Gilbert-Elliott sequences
/// of length M; trial t uses the stream derive_seed(seed, t).
RateEstimate mean_rate(const ChannelParams& params, std::size_t n_bits, std::size_t trials, std::uint64_t seed);

/// Mean rate over consecutive non-overlapping M-bit blocks of a long state
/// sequence (a trailing partial block is dropped).
RateEstimate blockwise_rate(const BitVector& states, std::size_t n_bits);

}  // namespace gesim
