#include <doctest.h>

#include <string>

#include "gesim/csicodec.hpp"
#include "gesim/error.hpp"

using namespace gesim;

namespace {

ChannelParams params(double mu, double eps) {
  ChannelParams p;
  p.mu = mu;
  p.epsilon = eps;
  return p;
}

std::size_t runs_of(const BitVector& x) {
  std::size_t r = 1;
  for (std::size_t i = 1; i < x.size(); ++i) r += x.test(i) != x.test(i - 1);
  return r;
}

}  // namespace

TEST_CASE("field width") {
  CHECK(field_width(1) == 0);
  CHECK(field_width(2) == 1);
  CHECK(field_width(10) == 4);
  CHECK(field_width(128) == 7);
  CHECK(field_width(129) == 8);
  CHECK(field_width(256) == 8);
}

TEST_CASE("all-ones block of 128 bits") {
  const auto code = encode(BitVector(128, true));
  CHECK(code.initial_state);
  CHECK(code.run_lengths == std::vector<std::size_t>{128});
  CHECK(code.encoded_bits.to_string() == "11111111");
  CHECK(code.rate == 0.0625);
}

TEST_CASE("1111000011 encodes to 13 bits") {
  const auto code = encode(BitVector::from_string("1111000011"));
  CHECK(code.run_lengths == std::vector<std::size_t>{4, 4, 2});
  CHECK(code.encoded_bits.to_string() == "1" "0011" "0011" "0001");
  CHECK(code.rate == doctest::Approx(1.3));
  CHECK(decode(code, 10).to_string() == "1111000011");
}

TEST_CASE("round trips") {
  std::string alt;
  for (int i = 0; i < 64; ++i) alt += (i % 2) ? '1' : '0';
  const auto x = BitVector::from_string(alt);
  CHECK(decode(encode(x), 64) == x);
  CHECK(decode(encode(BitVector(256)), 256).none());
  CHECK(decode(encode(BitVector(1, true)), 1).all());

  SplitMix64 g(3);
  const auto p = params(0.0191, 0.0256);
  for (int i = 0; i < 10000; ++i) {
    const auto s = generate_states(p, 256, g);
    const auto c = encode(s);
    REQUIRE(decode(c.encoded_bits, 256) == s);
    REQUIRE(c.encoded_bits.size() == encoded_length(runs_of(s), 256));
  }
}

TEST_CASE("malformed codes are rejected") {
  const auto code = encode(BitVector::from_string("1111000011"));
  BitVector truncated = BitVector::from_string(code.encoded_bits.to_string().substr(0, 11));
  CHECK_THROWS_AS(decode(truncated, 10), MalformedCodeError);
  CHECK_THROWS_AS(decode(code.encoded_bits, 9), MalformedCodeError);   // overshoot
  CHECK_THROWS_AS(decode(code.encoded_bits, 11), MalformedCodeError);  // runs end early
  auto extra = code.encoded_bits;
  extra.push_back(false);
  CHECK_THROWS_AS(decode(extra, 10), MalformedCodeError);
  CHECK_THROWS_AS(decode(BitVector(), 10), MalformedCodeError);
}

TEST_CASE("byte payload") {
  const auto code = encode(BitVector::from_string("1111000011"));
  const auto bytes = to_payload(code);
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0b10011001);
  CHECK(bytes[1] == 0b10001000);
  CHECK(decode_payload(bytes, 10).to_string() == "1111000011");
}

TEST_CASE("mean rates against the channel table") {
  CHECK(std::abs(mean_rate(params(0.0041, 0.0075), 128, 20000, 1).mean - 0.1071) <= 0.02);
  CHECK(std::abs(mean_rate(params(0.0112, 0.0165), 128, 20000, 2).mean - 0.1630) <= 0.02);
  CHECK(std::abs(mean_rate(params(0.0191, 0.0256), 256, 20000, 3).mean - 0.2134) <= 0.02);
  const auto r = mean_rate(params(0.0191, 0.0256), 128, 1000, 4);
  CHECK(r.trials == 1000);
  CHECK(r.std_error > 0.0);
}

TEST_CASE("rate decreases with M and hits the single-run floor for static channels") {
  for (auto p : {params(0.0041, 0.0075), params(0.0112, 0.0165), params(0.0191, 0.0256)}) {
    CHECK(mean_rate(p, 256, 20000, 5).mean <= mean_rate(p, 128, 20000, 5).mean);
  }
  const auto r = mean_rate(params(1e-12, 1e-12), 128, 1000, 6);
  CHECK(r.mean == doctest::Approx((1.0 + 7.0) / 128.0));
}

TEST_CASE("blockwise rate") {
  const auto s = BitVector::from_string("1111000011110000");
  const auto r = blockwise_rate(s, 8);
  CHECK(r.trials == 2);
  CHECK(r.mean == doctest::Approx((1.0 + 2 * 3) / 8.0));
  CHECK_THROWS_AS(blockwise_rate(s, 17), ConfigError);
}
