#include "gesim/csicodec.hpp"

#include <bit>
#include <cmath>

#include "gesim/error.hpp"
#include "gesim/rng.hpp"

namespace gesim {

unsigned field_width(std::size_t n_bits) {
  if (n_bits <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n_bits - 1));
}

std::size_t encoded_length(std::size_t runs, std::size_t n_bits) { return 1 + runs * field_width(n_bits); }

RunLengthCode encode(const BitVector& states) {
  const std::size_t m = states.size();
  if (m == 0) throw ArgumentError("cannot encode an empty state sequence");
  RunLengthCode code;
  code.initial_state = states.test(0);

  std::size_t run = 1;
  for (std::size_t i = 1; i < m; ++i) {
    if (states.test(i) == states.test(i - 1)) {
      ++run;
    } else {
      code.run_lengths.push_back(run);
      run = 1;
    }
  }
  code.run_lengths.push_back(run);

  const unsigned width = field_width(m);
  BitVector& out = code.encoded_bits;
  out = BitVector(encoded_length(code.run_lengths.size(), m));
  out.set(0, code.initial_state);
  std::size_t pos = 1;
  for (std::size_t r : code.run_lengths) {
    const std::size_t field = r - 1;
    for (unsigned b = width; b-- > 0;) out.set(pos++, (field >> b) & 1u);
  }
  code.rate = static_cast<double>(out.size()) / static_cast<double>(m);
  return code;
}

namespace {

// Reads runs from `bit(i)` for i in [0, available) until they sum to n_bits.
// Returns the number of bits consumed.
template <class BitFn>
std::size_t decode_stream(BitFn bit, std::size_t available, std::size_t n_bits, BitVector& out) {
  if (n_bits == 0) throw MalformedCodeError("decoded length must be positive");
  if (available < 1) throw MalformedCodeError("payload is empty");
  out = BitVector(n_bits);
  bool state = bit(0);
  const unsigned width = field_width(n_bits);
  std::size_t pos = 1;
  std::size_t filled = 0;
  while (filled < n_bits) {
    if (pos + width > available) throw MalformedCodeError("payload truncated inside a run-length field");
    std::size_t field = 0;
    for (unsigned b = 0; b < width; ++b) field = (field << 1) | (bit(pos++) ? 1u : 0u);
    const std::size_t run = field + 1;
    if (filled + run > n_bits) throw MalformedCodeError("run lengths exceed the declared sequence length");
    if (state) {
      for (std::size_t i = 0; i < run; ++i) out.set(filled + i);
    }
    filled += run;
    state = !state;
  }
  return pos;
}

}  // namespace

BitVector decode(const BitVector& encoded, std::size_t n_bits) {
  BitVector out;
  const std::size_t used = decode_stream([&](std::size_t i) { return encoded.test(i); }, encoded.size(), n_bits, out);
  if (used != encoded.size()) throw MalformedCodeError("trailing bits after the final run");
  return out;
}

BitVector decode(const RunLengthCode& code, std::size_t n_bits) { return decode(code.encoded_bits, n_bits); }

std::vector<std::uint8_t> to_payload(const RunLengthCode& code) { return pack_bytes_msb_first(code.encoded_bits); }

BitVector decode_payload(std::span<const std::uint8_t> payload, std::size_t n_bits) {
  BitVector out;
  decode_stream([&](std::size_t i) { return ((payload[i >> 3] >> (7 - (i & 7))) & 1u) != 0; }, payload.size() * 8,
                n_bits, out);
  return out;
}

namespace {

RateEstimate summarize(double sum, double sum_sq, std::size_t n) {
  RateEstimate r;
  r.trials = n;
  if (n == 0) return r;
  const double nn = static_cast<double>(n);
  r.mean = sum / nn;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - nn * r.mean * r.mean) / (nn - 1.0));
    r.std_error = std::sqrt(var / nn);
  }
  return r;
}

}  // namespace

RateEstimate mean_rate(const ChannelParams& params, std::size_t n_bits, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw ConfigError("mean_rate needs at least one trial");
  if (n_bits == 0) throw ConfigError("mean_rate needs M >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 gen(derive_seed(seed, t));
    const double rate = encode(generate_states(params, n_bits, gen)).rate;
    sum += rate;
    sum_sq += rate * rate;
  }
  return summarize(sum, sum_sq, trials);
}

RateEstimate blockwise_rate(const BitVector& states, std::size_t n_bits) {
  if (n_bits == 0) throw ConfigError("block length must be positive");
  const std::size_t blocks = states.size() / n_bits;
  if (blocks == 0) throw ConfigError("state sequence shorter than one block");
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * n_bits;
    std::size_t runs = 1;
    for (std::size_t i = begin + 1; i < begin + n_bits; ++i) {
      if (states.test(i) != states.test(i - 1)) ++runs;
    }
    const double rate = static_cast<double>(encoded_length(runs, n_bits)) / static_cast<double>(n_bits);
    sum += rate;
    sum_sq += rate * rate;
  }
  return summarize(sum, sum_sq, blocks);
}

}  // namespace gesim
