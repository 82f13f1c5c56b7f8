#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gesim/bits.hpp"
#include "gesim/gechannel.hpp"

namespace gesim {

/// Sum-of-sinusoids Rayleigh fading setup.
struct FadingConfig {
  double normalized_fading_rate = 0.002;  ///< f_d * T_s
  double amplitude_threshold = 1.0;
  std::size_t oscillator_count = 16;  ///< sinusoids per quadrature branch
  std::size_t trace_length = 1'000'000;
  std::uint64_t seed = 0;

  /// Throws ConfigError on invalid fields. Returns warnings for values that
  /// are accepted but outside the slow-fading regime (f_d * T_s > 0.01).
  std::vector<std::string> validate() const;
};

struct FadingTrace {
  std::vector<double> amplitudes;
  FadingConfig config;
};

/// Correlated Rayleigh envelope with E[alpha^2] = 1. Oscillator n of the
/// in-phase branch runs at f_d cos(a_n) and of the quadrature branch at
/// f_d sin(a_n), with a_n = (2 pi n - pi + theta) / (4 K), K = oscillator_count,
/// and theta plus all oscillator phases drawn uniformly from the seed.
FadingTrace generate_trace(const FadingConfig& config);

/// Bit m is 1 (Good) iff amplitude[m] > threshold; ties are Bad.
BitVector quantize(std::span<const double> amplitudes, double threshold);
inline BitVector quantize(const FadingTrace& trace, double threshold) { return quantize(trace.amplitudes, threshold); }

/// Transition counts over consecutive pairs (positions 0..L-2 as origins).
struct TransitionCounts {
  std::size_t good_origins = 0;
  std::size_t good_to_bad = 0;
  std::size_t bad_origins = 0;
  std::size_t bad_to_good = 0;
};

TransitionCounts count_transitions(const BitVector& states);

/// Maximum-likelihood (mu, epsilon): transitions out of a state divided by
/// that state's occupancy excluding the final symbol. p_good/p_bad keep their
/// defaults. Throws EstimationError naming the state that never occurs as an origin.
ChannelParams estimate_ge_params(const BitVector& states);

/// One amplitude per line, 17 significant digits.
void write_trace_csv(std::ostream& out, const FadingTrace& trace);
/// Raw little-endian IEEE-754 doubles, no header.
void write_trace_binary(std::ostream& out, const FadingTrace& trace);

}  // namespace gesim
