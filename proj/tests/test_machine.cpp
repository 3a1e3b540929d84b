#include "doctest.h"

#include "bjump/assembler.hpp"
#include "bjump/machine.hpp"
#include "bjump/native_kinds.hpp"

#include <set>

using namespace bjump;

TEST_CASE("decode is total and encode inverts it on canonical programs") {
  for (int e = 0; e < 3000; ++e) {
    Program p = decode(e);
    Nat back = encode(p);
    // non-canonical codes (garbage, HALT payloads) collapse; re-decoding is stable
    CHECK(decode(back) == p);
  }
  RegisterProgram p = parse_program("INC r3\nDECJZ r1 7\nQRY r0 r2\nHALT\n");
  CHECK(std::get<RegisterProgram>(decode(encode(p))) == p);
  CHECK(parse_program(to_text(p)) == p);
}

TEST_CASE("index 0 diverges; small indices behave as documented") {
  CHECK(std::holds_alternative<Diverger>(decode(0)));
  CHECK(identity_index() == 1);
  CHECK_FALSE(run(0, 5, 100000).halted());
  auto r = run(1, 42, 0);
  CHECK(r.halted());
  CHECK(r.value == 42);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_program("INC r1\nJMP 3\n"), doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_program("INC x1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_program("DECJZ r1"), std::invalid_argument);
}

TEST_CASE("run is deterministic and budget-monotone") {
  Nat add = encode(programs::add_pair());
  for (int x = 0; x < 60; ++x) {
    std::uint64_t first = 0;
    for (std::uint64_t s = 0; s < 2000; s += 7) {
      auto a = run(add, x, s);
      auto b = run(add, x, s);
      CHECK(a.status == b.status);
      CHECK(a.value == b.value);
      if (a.halted() && first == 0) first = s + 1;
      if (first != 0) CHECK(a.halted());
    }
  }
}

TEST_CASE("tight loop never halts and diverger is O(1)") {
  Nat loop = encode(programs::tight_loop());
  auto r = run(loop, 0, 100000);
  CHECK(r.status == Status::Running);
  CHECK(r.steps == 100000);
  auto d = run(0, 0, 1'000'000'000'000ULL);
  CHECK(d.status == Status::Running);
}

TEST_CASE("smn specialises the first pair component") {
  Nat add = encode(programs::add_pair());
  Nat e = smn(add, 3);
  auto r = run(e, 4, 1000);
  REQUIRE(r.halted());
  CHECK(r.value == 7);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x)
      for (std::uint64_t s = 0; s < 400; s += 13) {
        auto lhs = run(smn(add, y), x, s + 1);
        auto rhs = run(add, pair(y, x), s);
        CHECK(lhs.halted() == rhs.halted());
        if (lhs.halted()) CHECK(lhs.value == rhs.value);
      }
}

TEST_CASE("smn and pad are injective and monotone") {
  std::set<Nat> seen;
  for (int e = 0; e < 20; ++e)
    for (int y = 0; y < 20; ++y) {
      CHECK(seen.insert(smn(e, y)).second);
      CHECK(smn(e, y + 1) > smn(e, y));
      CHECK(smn(e + 1, y) > smn(e, y));
      Nat p = pad(e, y);
      CHECK(p > e);
      CHECK(p > y);
      CHECK(pad(e, y + 1) > p);
    }
  Nat add = encode(programs::add_pair());
  auto a = run(pad(add, 9), pair(2, 5), 1000);
  REQUIRE(a.halted());
  CHECK(a.value == 7);
}

TEST_CASE("oracle queries and use") {
  Nat q = encode(programs::query_constant(3));
  Oracle has3 = [](const Nat& p) { return p == 3 ? 1 : 0; };
  auto r = run(q, 0, 100, has3);
  REQUIRE(r.halted());
  CHECK(r.value == 1);
  CHECK(r.use == 4);
  auto z = run(q, 0, 100);
  REQUIRE(z.halted());
  CHECK(z.value == 0);
  CHECK(z.use == 4);
}

TEST_CASE("nested fuel: child exhaustion is local, ancestor exhaustion propagates") {
  Fuel outer(50);
  auto sub = try_evaluate(0, 0, 10, outer);
  CHECK(sub.status == Status::Running);
  CHECK(outer.used() == 10);
  Fuel small(5);
  CHECK_THROWS_AS(try_evaluate(0, 0, 1000, small), OutOfFuel);
}

TEST_CASE("recursion theorem") {
  // quine: t(e) = index of const e, so phi_m(x) = m
  Nat t = native_index(kind::ConstIndex, 0);
  Nat m = fixed_point(t);
  auto r = run(m, 12, 10000);
  REQUIRE(r.halted());
  CHECK(r.value == m);
  Nat m2 = fixed_point(t, 1);
  CHECK(m2 != m);
  CHECK(run(m2, 0, 10000).value == m2);

  auto fps = fixed_point_set(t, 4, m2);
  REQUIRE(fps.size() == 4);
  for (std::size_t k = 0; k < fps.size(); ++k) {
    CHECK(fps[k] > m2);
    if (k > 0) CHECK(fps[k] > fps[k - 1]);
    CHECK(run(fps[k], 3, 10000).value == fps[k]);
  }
  CHECK_THROWS_AS(fixed_point(0), NonTotalTransformer);
}

TEST_CASE("self-referential recursion runs out of fuel instead of the stack") {
  // fixed point of the identity transformer: phi_m(x) calls phi_m(x) again
  Nat m = fixed_point(identity_index());
  auto r = run(m, 5, 50'000'000);
  CHECK(r.status == Status::Running);
}

TEST_CASE("compose and const natives") {
  Nat succ = encode(programs::successor());
  Nat c = compose_index(succ, const_index(9));
  CHECK(run(c, 100, 100).value == 10);
}
