#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "gesim/error.hpp"
#include "gesim/fading.hpp"
#include "gesim/gechannel.hpp"

using namespace gesim;

namespace {

FadingConfig config(double rate, std::size_t length, std::uint64_t seed = 1) {
  FadingConfig c;
  c.normalized_fading_rate = rate;
  c.trace_length = length;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("quantize examples") {
  const std::vector<double> a{0.5, 1.5, 2.0, 0.2};
  CHECK(quantize(a, 1.0).to_string() == "0110");
  const std::vector<double> ties(100, 1.0);
  CHECK(quantize(ties, 1.0).none());
  const std::vector<double> bits{0, 1, 1, 0, 1, 0, 0, 1};
  CHECK(quantize(bits, 0.5).to_string() == "01101001");
}

TEST_CASE("estimate_ge_params hand counts") {
  auto p = estimate_ge_params(BitVector::from_string("111000"));
  CHECK(p.epsilon == doctest::Approx(1.0 / 3.0));
  CHECK(p.mu == 0.0);

  std::string alt;
  for (int i = 0; i < 1000; ++i) alt += (i % 2) ? '0' : '1';
  p = estimate_ge_params(BitVector::from_string(alt));
  CHECK(p.epsilon == 1.0);
  CHECK(p.mu == 1.0);
}

TEST_CASE("estimate_ge_params names the missing state") {
  try {
    estimate_ge_params(BitVector::from_string("1111"));
    FAIL("expected EstimationError");
  } catch (const EstimationError& e) {
    CHECK(std::string(e.what()).find("Bad") != std::string::npos);
  }
  try {
    estimate_ge_params(BitVector::from_string("0000"));
    FAIL("expected EstimationError");
  } catch (const EstimationError& e) {
    CHECK(std::string(e.what()).find("Good") != std::string::npos);
  }
  CHECK_THROWS_AS(estimate_ge_params(BitVector::from_string("1")), EstimationError);
}

TEST_CASE("count_transitions matches a naive count") {
  SplitMix64 g(5);
  for (std::size_t n : {2u, 63u, 64u, 65u, 500u}) {
    BitVector s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, g() & 1u);
    TransitionCounts ref;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (s.test(i)) {
        ++ref.good_origins;
        ref.good_to_bad += !s.test(i + 1);
      } else {
        ++ref.bad_origins;
        ref.bad_to_good += s.test(i + 1);
      }
    }
    const auto c = count_transitions(s);
    CHECK(c.good_origins == ref.good_origins);
    CHECK(c.good_to_bad == ref.good_to_bad);
    CHECK(c.bad_origins == ref.bad_origins);
    CHECK(c.bad_to_good == ref.bad_to_good);
  }
}

TEST_CASE("config validation") {
  CHECK(config(0.002, 100).validate().empty());
  CHECK_FALSE(config(0.02, 100).validate().empty());
  CHECK_THROWS_AS(config(0.0, 100).validate(), ConfigError);
  CHECK_THROWS_AS(config(0.002, 1).validate(), ConfigError);
  auto c = config(0.002, 100);
  c.oscillator_count = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config(0.002, 100);
  c.amplitude_threshold = 0.0;
  CHECK_THROWS_AS(generate_trace(c), ConfigError);
}

TEST_CASE("traces are deterministic per seed") {
  const auto a = generate_trace(config(0.005, 10000, 9));
  const auto b = generate_trace(config(0.005, 10000, 9));
  const auto c = generate_trace(config(0.005, 10000, 10));
  CHECK(a.amplitudes == b.amplitudes);
  CHECK(a.amplitudes != c.amplitudes);
  for (double x : a.amplitudes) REQUIRE(x >= 0.0);
}

TEST_CASE("static channel has no transitions") {
  const auto t = generate_trace(config(1e-8, 200000, 3));
  const auto c = count_transitions(quantize(t, 1.0));
  CHECK(c.good_to_bad + c.bad_to_good == 0);
}

TEST_CASE("unit power and Rayleigh level statistics") {
  for (double rate : {0.002, 0.008}) {
    const auto t = generate_trace(config(rate, 1'000'000, 4));
    double p = 0.0;
    for (double x : t.amplitudes) p += x * x;
    CHECK(p / 1e6 == doctest::Approx(1.0).epsilon(0.02));
  }
  const auto t = generate_trace(config(0.002, 10'000'000, 2));
  const auto s = quantize(t, 1.0);
  const double good = static_cast<double>(s.count()) / 1e7;
  CHECK(std::abs(good - std::exp(-1.0)) < 0.02);
  // Reference occupancy mu/(mu+eps) = 0.353 is close to, but not exactly, e^-1.
  CHECK(std::abs(good - 0.0041 / (0.0041 + 0.0075)) < 0.03);
}

TEST_CASE("power autocorrelation follows the Doppler scale") {
  const double rate = 0.002;
  const auto t = generate_trace(config(rate, 2'000'000, 6));
  const auto& a = t.amplitudes;
  const std::size_t n = a.size();
  double mean = 0.0;
  for (double x : a) mean += x * x;
  mean /= static_cast<double>(n);
  auto cov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (a[i] * a[i] - mean) * (a[i + lag] * a[i + lag] - mean);
    return s / static_cast<double>(n - lag);
  };
  const double c0 = cov(0);
  // |h|^2 autocorrelation is J0^2(2 pi f_d tau); J0 first zero at 2.405.
  const auto zero_lag = static_cast<std::size_t>(2.405 / (2.0 * M_PI * rate));
  CHECK(cov(10) / c0 > 0.95);
  CHECK(std::abs(cov(zero_lag) / c0) < 0.1);
}

TEST_CASE("estimator recovers known Markov parameters") {
  ChannelParams p;
  p.mu = 0.0112;
  p.epsilon = 0.0165;
  SplitMix64 g(77);
  const auto s = generate_states(p, 10'000'000, g);
  const auto e = estimate_ge_params(s);
  CHECK(e.mu == doctest::Approx(p.mu).epsilon(0.05));
  CHECK(e.epsilon == doctest::Approx(p.epsilon).epsilon(0.05));
}

TEST_CASE("trace export") {
  const auto t = generate_trace(config(0.002, 50, 1));
  std::ostringstream csv, bin;
  write_trace_csv(csv, t);
  write_trace_binary(bin, t);
  const auto text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') >= 50);
  CHECK(bin.str().size() >= 50 * sizeof(double));
}
