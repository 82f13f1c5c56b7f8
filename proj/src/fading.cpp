#include "gesim/fading.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "gesim/error.hpp"
#include "gesim/kernels.hpp"
#include "gesim/rng.hpp"

namespace gesim {

namespace {
constexpr double kSlowFadingLimit = 0.01;
// Phasors are rotated each step and recomputed from cos/sin every this many samples.
constexpr std::size_t kResyncInterval = 4096;
}  // namespace

std::vector<std::string> FadingConfig::validate() const {
  if (!(normalized_fading_rate > 0.0) || !std::isfinite(normalized_fading_rate)) {
    throw ConfigError("normalized fading rate must be positive");
  }
  if (!(amplitude_threshold > 0.0)) throw ConfigError("amplitude threshold must be positive");
  if (oscillator_count < 8) throw ConfigError("oscillator count must be at least 8");
  if (trace_length < 2) throw ConfigError("trace length must be at least 2");
  std::vector<std::string> warnings;
  if (normalized_fading_rate > kSlowFadingLimit) {
    warnings.push_back("normalized fading rate " + std::to_string(normalized_fading_rate) +
                       " exceeds the slow-fading regime (<= 0.01)");
  }
  return warnings;
}

FadingTrace generate_trace(const FadingConfig& config) {
  config.validate();
  const std::size_t k = config.oscillator_count;
  const std::size_t length = config.trace_length;
  constexpr double pi = std::numbers::pi;

  SplitMix64 gen(config.seed);
  const double theta = (2.0 * uniform01(gen) - 1.0) * pi;
  const double omega = 2.0 * pi * config.normalized_fading_rate;

  // 2k oscillators: first k feed the in-phase sum, last k the quadrature sum.
  std::vector<double> freq(2 * k), phase(2 * k);
  for (std::size_t n = 0; n < k; ++n) {
    const double angle = (2.0 * pi * static_cast<double>(n + 1) - pi + theta) / (4.0 * static_cast<double>(k));
    freq[n] = omega * std::cos(angle);
    freq[k + n] = omega * std::sin(angle);
  }
  for (auto& p : phase) p = (2.0 * uniform01(gen) - 1.0) * pi;

  std::vector<double> re(2 * k), im(2 * k), step_re(2 * k), step_im(2 * k);
  for (std::size_t j = 0; j < 2 * k; ++j) {
    step_re[j] = std::cos(freq[j]);
    step_im[j] = std::sin(freq[j]);
  }

  // E[I^2] = E[Q^2] = 1/2, E[alpha^2] = 1.
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));

  FadingTrace trace;
  trace.config = config;
  trace.amplitudes.resize(length);
  for (std::size_t t = 0; t < length; ++t) {
    if (t % kResyncInterval == 0) {
      const double tt = static_cast<double>(t);
      for (std::size_t j = 0; j < 2 * k; ++j) {
        const double arg = freq[j] * tt + phase[j];
        re[j] = std::cos(arg);
        im[j] = std::sin(arg);
      }
    }
    double in_phase = 0.0;
    double quadrature = 0.0;
    for (std::size_t j = 0; j < k; ++j) in_phase += re[j];
    for (std::size_t j = k; j < 2 * k; ++j) quadrature += re[j];
    in_phase *= scale;
    quadrature *= scale;
    trace.amplitudes[t] = std::sqrt(in_phase * in_phase + quadrature * quadrature);

    for (std::size_t j = 0; j < 2 * k; ++j) {
      const double r = re[j] * step_re[j] - im[j] * step_im[j];
      const double i = re[j] * step_im[j] + im[j] * step_re[j];
      re[j] = r;
      im[j] = i;
    }
  }
  return trace;
}

BitVector quantize(std::span<const double> amplitudes, double threshold) {
  BitVector bits(amplitudes.size());
  kernels::quantize_above(amplitudes, threshold, bits.words());
  return bits;
}

TransitionCounts count_transitions(const BitVector& states) {
  TransitionCounts c;
  const std::size_t n = states.size();
  if (n < 2) return c;
  // Word-parallel: origin bits are positions 0..n-2, successor bits 1..n-1.
  const auto words = states.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t cur = words[w];
    const std::uint64_t next_bit0 = (w + 1 < words.size()) ? (words[w + 1] & 1u) : 0;
    const std::uint64_t next = (cur >> 1) | (next_bit0 << 63);
    // Valid origins in this word: positions < n-1.
    const std::size_t base = w * 64;
    std::uint64_t valid = ~std::uint64_t{0};
    const std::size_t last_origin = n - 2;
    if (base + 63 > last_origin) {
      const std::size_t span = last_origin - base + 1;
      valid = span >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << span) - 1);
    }
    const std::uint64_t good = cur & valid;
    const std::uint64_t bad = ~cur & valid;
    c.good_origins += static_cast<std::size_t>(std::popcount(good));
    c.bad_origins += static_cast<std::size_t>(std::popcount(bad));
    c.good_to_bad += static_cast<std::size_t>(std::popcount(good & ~next));
    c.bad_to_good += static_cast<std::size_t>(std::popcount(bad & next));
    if (base + 63 >= last_origin) break;
  }
  return c;
}

ChannelParams estimate_ge_params(const BitVector& states) {
  if (states.size() < 2) throw EstimationError("need at least two symbols to estimate transitions");
  const auto c = count_transitions(states);
  if (c.good_origins == 0) throw EstimationError("state sequence never visits the Good state; epsilon undefined");
  if (c.bad_origins == 0) throw EstimationError("state sequence never visits the Bad state; mu undefined");
  ChannelParams p;
  p.epsilon = static_cast<double>(c.good_to_bad) / static_cast<double>(c.good_origins);
  p.mu = static_cast<double>(c.bad_to_good) / static_cast<double>(c.bad_origins);
  return p;
}

void write_trace_csv(std::ostream& out, const FadingTrace& trace) {
  const auto flags = out.flags();
  out << std::setprecision(17);
  for (double a : trace.amplitudes) out << a << '\n';
  out.flags(flags);
}

void write_trace_binary(std::ostream& out, const FadingTrace& trace) {
  for (double a : trace.amplitudes) {
    auto bits = std::bit_cast<std::uint64_t>(a);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    out.write(bytes, 8);
  }
}

}  // namespace gesim
