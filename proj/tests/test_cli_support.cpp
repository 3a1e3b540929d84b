#include "doctest.h"

#include "bjump/cli_support.hpp"

#include <cstdio>
#include <fstream>

using namespace bjump;

TEST_CASE("program names") {
  CHECK(parse_index("17") == 17);
  CHECK(parse_index("echo") == echo_index());
  CHECK(parse_index("const:5") == const_index(5));
  CHECK(parse_index("bit:1") == const_bit_index(1));
  CHECK(parse_index("affine:2,1") == affine_index(2, 1));
  CHECK(parse_index("compose:echo;const:3") == compose_index(echo_index(), const_index(3)));
  CHECK(parse_index("pad:identity;4") == pad(identity_index(), 4));
  auto r = run(parse_index("affine:3,1"), 4, 1000);
  REQUIRE(r.halted());
  CHECK(r.value == 13);
  CHECK_THROWS_AS(parse_index("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(parse_index("affine:2"), std::invalid_argument);
  auto adv = parse_adversary("bit:0/const:8");
  CHECK(adv.functional == const_bit_index(0));
  CHECK(adv.bound == const_index(8));
}

TEST_CASE("set specs, including scripted limits") {
  auto ev = resolve_set_spec("evens&le:10");
  CHECK(ev(4) == 1);
  CHECK(ev(12) == 0);
  const char* path = "cli_support_script.json";
  {
    std::ofstream out(path);
    out << R"({"default": {"value": 0}, "entries": [{"n": 3, "ordinal": 2, "value": 1, "time": 1},
             {"n": 3, "ordinal": 1, "value": 0, "time": 4}, {"n": 5, "ordinal": 0, "value": 1}]})";
  }
  auto w = resolve_set_spec(std::string("wscript:") + path, 100);
  CHECK(w(3) == 0);
  CHECK(w(5) == 1);
  CHECK(w(6) == 0);
  auto cut = resolve_set_spec(std::string("wscript:") + path + "&le:4", 100);
  CHECK(cut(5) == 0);
  std::remove(path);
  CHECK_THROWS_AS(resolve_set_spec("odds"), std::invalid_argument);
}
