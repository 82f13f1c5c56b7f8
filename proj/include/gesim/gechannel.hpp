#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/rng.hpp"

namespace gesim {

inline constexpr double kDefaultEbN0Db = 7.0;
inline constexpr double kDefaultPBad = 0.2;

/// Good-state BSC crossover for BPSK over AWGN: Q(sqrt(2 Eb/N0)).
double default_p_good(double ebn0_db = kDefaultEbN0Db);

/// One Gilbert-Elliott channel. `mu` is the Bad->Good and `epsilon` the
/// Good->Bad transition probability; `p_good`/`p_bad` are the per-state BSC
/// crossover probabilities.
struct ChannelParams {
  double mu = 0.0;
  double epsilon = 0.0;
  double p_good = default_p_good();
  double p_bad = kDefaultPBad;

  /// Throws ConfigError unless 0 < mu, epsilon < 1 and 0 <= p_good < p_bad < 0.5.
  void validate() const;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

/// Long-run probability of the Good state, mu / (mu + epsilon).
double steady_state(const ChannelParams& params);

/// N x M channel-state realizations; row n bit m is 1 when sensor n saw
/// source bit m through the Good state.
class CsiMatrix {
 public:
  CsiMatrix() = default;
  CsiMatrix(std::size_t n_sensors, std::size_t n_bits);
  explicit CsiMatrix(std::vector<BitVector> rows);

  std::size_t n_sensors() const noexcept { return rows_.size(); }
  std::size_t n_bits() const noexcept { return n_bits_; }

  const BitVector& row(std::size_t sensor) const { return rows_.at(sensor); }
  BitVector& row(std::size_t sensor) { return rows_.at(sensor); }
  const std::vector<BitVector>& rows() const noexcept { return rows_; }

  bool good(std::size_t sensor, std::size_t bit) const { return rows_.at(sensor).test(bit); }

  friend bool operator==(const CsiMatrix&, const CsiMatrix&) = default;

 private:
  std::size_t n_bits_ = 0;
  std::vector<BitVector> rows_;
};

/// One Markov state sequence: first state from the steady state, then the
/// (mu, epsilon) transitions. Consumes one uniform draw per symbol.
BitVector generate_states(const ChannelParams& params, std::size_t n_bits, SplitMix64& gen);

/// Independent rows, one per entry of `params`; row n uses the stream
/// derive_seed(seed, n) so adding sensors leaves existing rows unchanged.
CsiMatrix generate_csi(std::span<const ChannelParams> params, std::size_t n_bits, std::uint64_t seed);

/// Passes source bits through the state-dependent BSC.
BitVector transmit(const BitVector& source, const BitVector& states, const ChannelParams& params, std::uint64_t seed);
BitVector transmit(const BitVector& source, const BitVector& states, const ChannelParams& params, SplitMix64& gen);

/// Binary layout: uint32 N, uint32 M (little endian), then N rows of
/// ceil(M/8) bytes, bits MSB-first within each byte, each row zero padded.
void write_csi_binary(std::ostream& out, const CsiMatrix& csi);
CsiMatrix read_csi_binary(std::istream& in);

/// One line per sensor, '#' for Good and '.' for Bad.
std::string to_ascii_art(const CsiMatrix& csi);

}  // namespace gesim
