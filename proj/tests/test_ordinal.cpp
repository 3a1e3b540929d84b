#include "doctest.h"

#include "bjump/ordinal.hpp"

#include <random>
#include <set>

using namespace bjump;

TEST_CASE("text round trip and canonical printing") {
  CHECK(Ordinal::parse("w^2*3 + w*2 + 5").to_text() == "w^2*3+w*2+5");
  CHECK(Ordinal::parse("w").to_text() == "w");
  CHECK(Ordinal::parse("w^2").to_text() == "w^2");
  CHECK(Ordinal::parse("0").is_zero());
  CHECK(Ordinal::parse("7") == Ordinal::finite(7));
  CHECK_THROWS_AS(Ordinal::parse("w + w^2"), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::parse("w*"), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::parse("x"), std::invalid_argument);
}

TEST_CASE("natural sum") {
  auto a = Ordinal::parse("w*2+1"), b = Ordinal::parse("w+3");
  CHECK(natural_sum(a, b).to_text() == "w*3+4");
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(0, 5);
  auto random_ord = [&] { return Ordinal::from_coefficients({(uint64_t)coef(rng), (uint64_t)coef(rng), (uint64_t)coef(rng)}); };
  for (int t = 0; t < 300; ++t) {
    auto x = random_ord(), y = random_ord(), z = random_ord();
    CHECK(natural_sum(x, y) == natural_sum(y, x));
    CHECK(natural_sum(natural_sum(x, y), z) == natural_sum(x, natural_sum(y, z)));
    CHECK(natural_sum(x, y) >= x);
    if (!y.is_zero()) CHECK(natural_sum(x, y) > x);
    // strictly monotone in each argument
    if (x < y) CHECK(natural_sum(x, z) < natural_sum(y, z));
  }
}

TEST_CASE("comparison is a total order consistent with the normal form") {
  CHECK(Ordinal::parse("w") > Ordinal::finite(1000000));
  CHECK(Ordinal::parse("w^2") > Ordinal::parse("w*99+99"));
  CHECK(Ordinal::parse("w*2+1") < Ordinal::parse("w*2+2"));
  CHECK(Ordinal() == Ordinal::finite(0));
}

TEST_CASE("codes form a bijection with ordinals below w^w") {
  std::set<Ordinal> seen;
  for (int c = 0; c < 5000; ++c) {
    Ordinal o = Ordinal::from_code(c);
    CHECK(o.code() == c);
    CHECK(seen.insert(o).second);
  }
  auto o = Ordinal::parse("w^3*2+w+4");
  CHECK(Ordinal::from_code(o.code()) == o);
  CHECK(Ordinal::degree_of_code(o.code()) == 3);
  CHECK(Ordinal::parse("w*2+3").code() == pair(1, pair(1, 3)));
}

TEST_CASE("jump rank strictly decreases when the level or an argument drops") {
  std::mt19937 rng(11);
  for (unsigned k = 1; k <= 2; ++k) {
    std::uniform_int_distribution<int> coef(0, 4);
    auto below = [&] {
      std::vector<std::uint64_t> c(k);
      for (auto& v : c) v = coef(rng);
      return Ordinal::from_coefficients(c);
    };
    for (int t = 0; t < 400; ++t) {
      std::vector<Ordinal> al(3), al2;
      for (auto& a : al) a = below();
      std::uint64_t l = 1 + coef(rng);
      Ordinal r = jump_rank(k, l, al);
      // level drops, arguments arbitrary
      std::vector<Ordinal> other(1 + coef(rng));
      for (auto& a : other) a = below();
      CHECK(jump_rank(k, l - 1, other).plus_finite(2) < r.plus_finite(1));
      // same level, one argument drops, later ones arbitrary
      al2 = al;
      std::size_t i = rng() % al2.size();
      if (al2[i].is_zero()) continue;
      auto cs = al2[i].coefficients();
      for (auto& c : cs)
        if (c > 0) {
          --c;
          break;
        }
      al2[i] = Ordinal::from_coefficients(cs);
      CHECK(al2[i] < al[i]);
      CHECK(jump_rank(k, l, al2).plus_finite(2) < r.plus_finite(1));
    }
  }
  CHECK_THROWS_AS(jump_rank(1, 1, {Ordinal::parse("w")}), std::invalid_argument);
}
