#include "doctest.h"

#include "bjump/nat.hpp"

#include <set>

using namespace bjump;

TEST_CASE("pairing is a bijection on a grid") {
  for (int x = 0; x < 40; ++x)
    for (int y = 0; y < 40; ++y) {
      Nat z = pair(x, y);
      auto [a, b] = unpair(z);
      CHECK(a == x);
      CHECK(b == y);
    }
  for (int z = 0; z < 2000; ++z) {
    auto [a, b] = unpair(z);
    CHECK(pair(a, b) == z);
  }
  CHECK(pair(3, 4) == 32);
}

TEST_CASE("pairing handles large values") {
  Nat big = Nat(1) << 300;
  auto [a, b] = unpair(pair(big, big + 7));
  CHECK(a == big);
  CHECK(b == big + 7);
}

TEST_CASE("triples round-trip") {
  auto [a, b, c] = untriple(triple(5, 0, 9));
  CHECK(a == 5);
  CHECK(b == 0);
  CHECK(c == 9);
}

TEST_CASE("list code is bijective on small codes") {
  for (int c = 0; c < 500; ++c) CHECK(list_encode(list_decode(c)) == c);
  std::vector<Nat> xs{3, 0, 7};
  CHECK(list_decode(list_encode(xs)) == xs);
  CHECK(list_encode({}) == 0);
}

TEST_CASE("sequence code round-trips and stays compact") {
  std::vector<Nat> xs{0, 1, 2, 1000, Nat(1) << 200};
  auto back = seq_decode(seq_encode(xs));
  REQUIRE(back);
  CHECK(*back == xs);
  CHECK(seq_decode(seq_encode({}))->empty());
  CHECK_FALSE(seq_decode(0));
  std::vector<Nat> many(40, Nat(100));
  CHECK(bit_length(seq_encode(many)) < 40 * 20);
}

TEST_CASE("lin_pair is injective, monotone, linear in the second argument") {
  std::set<Nat> seen;
  for (int a = 0; a < 30; ++a)
    for (int b = 0; b < 30; ++b) {
      Nat c = lin_pair(a, b);
      CHECK(seen.insert(c).second);
      auto back = lin_unpair(c);
      REQUIRE(back);
      CHECK(back->first == a);
      CHECK(back->second == b);
      CHECK(lin_pair(a, b + 1) > c);
      CHECK(lin_pair(a + 1, b) > c);
    }
  CHECK(lin_pair(5, 1001) - lin_pair(5, 1000) == lin_pair(5, 1) - lin_pair(5, 0));
  CHECK_FALSE(lin_unpair(0));
}

TEST_CASE("number parsing") {
  CHECK(parse_nat("12345678901234567890123") == Nat("12345678901234567890123"));
  CHECK_THROWS(parse_nat("-3"));
  CHECK_THROWS(parse_nat(""));
  CHECK(to_u64(Nat(7)) == 7u);
  CHECK_FALSE(to_u64(Nat(1) << 70));
}
