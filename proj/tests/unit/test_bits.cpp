#include <doctest.h>

#include <stdexcept>

#include "gesim/bits.hpp"

using gesim::BitVector;

TEST_CASE("from_string and to_string round trip") {
  const auto b = BitVector::from_string("0110");
  CHECK(b.size() == 4);
  CHECK(b.to_string() == "0110");
  CHECK(b.to_string('#', '.') == ".##.");
  CHECK(b.count() == 2);
  CHECK_THROWS_AS(BitVector::from_string("01x"), std::invalid_argument);
}

TEST_CASE("tail bits stay zero") {
  BitVector b(70, true);
  CHECK(b.count() == 70);
  CHECK(b.all());
  CHECK(b.words()[1] == b.tail_mask());
  CHECK(BitVector::tail_mask_for(64) == ~std::uint64_t{0});
  CHECK(BitVector::tail_mask_for(3) == 7u);
  b.words()[1] = ~std::uint64_t{0};
  b.trim();
  CHECK(b.count() == 70);
}

TEST_CASE("set, flip, push_back, all, none") {
  BitVector b(0);
  CHECK(b.all());
  CHECK(b.none());
  for (int i = 0; i < 130; ++i) b.push_back(i % 3 == 0);
  CHECK(b.size() == 130);
  CHECK(b.count() == 44);
  b.flip(1);
  CHECK(b.test(1));
  b.set(1, false);
  CHECK_FALSE(b.test(1));
  CHECK_FALSE(b.none());
  CHECK_FALSE(b.all());
}

TEST_CASE("word-wise operators") {
  auto a = BitVector::from_string("1100");
  const auto b = BitVector::from_string("1010");
  auto c = a;
  c |= b;
  CHECK(c.to_string() == "1110");
  c = a;
  c &= b;
  CHECK(c.to_string() == "1000");
  a ^= b;
  CHECK(a.to_string() == "0110");
  CHECK_THROWS_AS(a |= BitVector(5), std::invalid_argument);
}

TEST_CASE("ordering compares size then words") {
  CHECK(BitVector(3) < BitVector(4));
  CHECK(BitVector::from_string("100") > BitVector::from_string("000"));
  CHECK(BitVector::from_string("101") == BitVector::from_string("101"));
}

TEST_CASE("MSB-first byte packing") {
  const auto b = BitVector::from_string("1000000011");
  const auto bytes = gesim::pack_bytes_msb_first(b);
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0x80);
  CHECK(bytes[1] == 0xC0);
  CHECK(gesim::unpack_bytes_msb_first(bytes, 10) == b);
  CHECK_THROWS_AS(gesim::unpack_bytes_msb_first(bytes, 17), std::invalid_argument);
}
