#include "doctest.h"

#include "bjump/assembler.hpp"
#include "bjump/oracle.hpp"

using namespace bjump;

TEST_CASE("bounded application reads a finite set and reports use") {
  Nat e = encode(programs::query_constant(3));
  auto r = apply_bounded(e, FiniteSet({3}), 0, 100);
  REQUIRE(r.halted());
  CHECK(r.value == 1);
  CHECK(r.use == 4);
  auto z = apply_bounded(e, FiniteSet(), 0, 100);
  REQUIRE(z.halted());
  CHECK(z.value == 0);
  CHECK(z.use == 4);
}

TEST_CASE("prefix application blocks beyond the string") {
  Nat e = encode(programs::query_constant(3));
  auto r = apply_prefix(e, {false, false, true}, 0, 100);
  CHECK(r.status == Status::Blocked);
  CHECK(r.blocked_at == 3);
  auto ok = apply_prefix(e, {false, false, false, true}, 0, 100);
  REQUIRE(ok.halted());
  CHECK(ok.value == 1);
}

TEST_CASE("restriction and use-bounded oracles") {
  FiniteSet d({1, 4, 9});
  CHECK(d.restrict(4) == FiniteSet({1, 4}));
  Oracle o = restrict_use(as_oracle(d.view()), 5);
  CHECK(o(4) == 1);
  CHECK_THROWS_AS(o(6), OracleBlocked);
}

TEST_CASE("approximations and joins") {
  ApproxSet a(3), b(3), c(4);
  a.set(2, 1);
  a.set(2, 0);
  a.set(2, 1);
  CHECK(a.changes(2) == 3);
  b.set(0, 1);
  auto j = join(a, b);
  CHECK(j.at(4) == 1);
  CHECK(j.at(1) == 1);
  CHECK(j.at(0) == 0);
  CHECK_THROWS_AS(join(a, c), std::invalid_argument);
  auto jv = join(evens(), empty_set());
  CHECK(jv(0) == 1);
  CHECK(jv(1) == 0);
  CHECK(jv(2) == 0);
}

TEST_CASE("set specs") {
  CHECK(parse_set_spec("primes")(97) == 1);
  CHECK(parse_set_spec("primes")(91) == 0);
  CHECK(parse_set_spec("list:1,5")(5) == 1);
  CHECK(parse_set_spec("evens&le:40")(42) == 0);
  CHECK(parse_set_spec("evens&le:40")(40) == 1);
  CHECK_THROWS_AS(parse_set_spec("odds"), std::invalid_argument);
  CHECK(primes()(Nat("1000000007")) == 1);
}

TEST_CASE("bT verification of the identity reduction") {
  BTWitness id{echo_index(), affine_index(1, 1)};
  std::vector<Nat> dom;
  for (int x = 0; x < 30; ++x) dom.push_back(x);
  CHECK(verify_bT(id, evens(), evens(), dom, 1000).ok());
  auto bad = verify_bT(id, primes(), evens(), dom, 1000);
  CHECK_FALSE(bad.ok());
  CHECK(bad.failures.front().reason == "wrong-value");
  // a bound that is too small blocks
  BTWitness tight{echo_index(), affine_index(0, 0)};
  auto blk = verify_bT(tight, evens(), evens(), dom, 1000);
  CHECK(blk.failures.size() == 29);
  CHECK(blk.failures.front().reason == "blocked");
  BTWitness div{echo_index(), 0};
  CHECK(verify_bT(div, evens(), evens(), {1}, 1000).failures.front().reason == "bound-diverges");
}

TEST_CASE("tt-conditions") {
  auto c = TTCondition::disjunction({2, 3, 5});
  CHECK(tt_eval(c, from_list({5})) == 1);
  CHECK(tt_eval(c, from_list({4})) == 0);
  CHECK(tt_eval(TTCondition::decode(c.code()), from_list({3})) == 1);
  CHECK_THROWS_AS(tt_eval(c, evens(), Nat(4)), UndecidedPosition);
  auto s = TTCondition::single(7);
  CHECK(tt_eval(s, from_list({7})) == 1);
  CHECK(tt_eval(s, empty_set()) == 0);
  // every natural decodes to some condition
  for (int k = 0; k < 500; ++k) (void)tt_eval(TTCondition::decode(k), evens());
  // A^tt over codes < 200 contains the single-position condition for 0 in evens
  auto members = enum_Att_base(evens(), 200);
  CHECK(std::find(members.begin(), members.end(), TTCondition::single(0).code()) != members.end());
  CHECK(run(tt_eval_index(), c.code(), 100, as_oracle(from_list({2}))).value == 1);
}

TEST_CASE("json round trip of finite sets") {
  FiniteSet f({0, 3, Nat(1) << 80});
  CHECK(FiniteSet::from_json(f.to_json()) == f);
}
