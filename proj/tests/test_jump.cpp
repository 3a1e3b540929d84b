#include "doctest.h"

#include "bjump/assembler.hpp"
#include "bjump/jump.hpp"

#include <set>

using namespace bjump;

namespace {

JumpConfig at(SetView base, std::uint64_t budget) {
  JumpConfig c;
  c.base = std::move(base);
  c.budget = budget;
  return c;
}

// halts iff position 1 reads 0
Nat reads_one_zero() {
  Assembler a(3);
  a.inc(1).query(1, 2).decjz(2, "done").label("loop").jump("loop").label("done").halt();
  return encode(a.build());
}

std::set<Nat> member_set(const JumpStageView& v) {
  std::set<Nat> s;
  for (const auto& m : v.members) s.insert(m.x);
  return s;
}

}  // namespace

TEST_CASE("bounded jump: vacuous and padded halters") {
  auto cfg = at(empty_set(), 100000);
  CHECK_FALSE(in_jump(Variant::B, 0, cfg));
  Nat x = pad(identity_index(), 40);
  auto m = jump_member(Variant::B, x, cfg);
  REQUIRE(m.member);
  REQUIRE(m.witness.has_value());
  CHECK(*m.witness <= x);
  CHECK(m.to_json()["status"] == "in");
}

TEST_CASE("jump views are monotone in the stage and parallel matches serial") {
  auto dom = range_domain(60);
  for (Variant v : {Variant::B, Variant::I, Variant::B1, Variant::Tt}) {
    std::set<Nat> prev;
    for (std::uint64_t s : {5, 40, 400, 4000}) {
      auto cfg = at(parse_set_spec("evens&le:40"), s);
      auto par = enum_jump(v, cfg, dom);
      auto ser = enum_jump_serial(v, cfg, dom);
      auto cur = member_set(par);
      CHECK(cur == member_set(ser));
      CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
  }
}

TEST_CASE("b0, i and the b/b0 projection") {
  auto cfg = at(evens(), 10000);
  // phi_0 diverges, so no triple <e,0,j> is ever in
  for (int e = 0; e < 10; ++e) CHECK_FALSE(in_jump(Variant::B0, triple(e, 0, e), cfg));
  Nat halter = pad(identity_index(), 7);
  CHECK(in_jump(Variant::I, halter, at(empty_set(), 100)));
  CHECK(in_jump(Variant::I, halter, at(primes(), 100)));
  auto e0 = at(empty_set(), 5000);
  for (int x = 0; x < 15; ++x) {
    bool proj = false;
    for (int i = 0; i <= x; ++i) proj = proj || in_jump(Variant::B0, triple(x, i, x), e0);
    CHECK(in_jump(Variant::B, x, e0) == proj);
  }
}

TEST_CASE("b0 reduces to b by a padded index above k(i,j)") {
  SetView a = parse_set_spec("evens&le:40");
  std::vector<Nat> probes = {
      triple(query_halt_index(4), const_index(10), 3),   // in: 4 even, bound 10
      triple(query_halt_index(4), const_index(2), 3),    // blocked below 4
      triple(query_halt_index(5), const_index(10), 3),   // 5 odd
      triple(echo_index(), identity_index(), 8),         // reads 8 <= 8
      triple(echo_index(), 0, 8),                        // divergent bound
  };
  auto rep = check_equivalence(jump_side(Variant::B0, at(a, 0)), b0_to_b, jump_side(Variant::B, at(a, 0)), probes,
                               20000);
  CHECK(rep.count(Outcome::Disagree) == 0);
  CHECK(rep.count(Outcome::Unresolved) == 0);
  CHECK(rep.rows[0].lhs);
  CHECK_FALSE(rep.rows[1].lhs);
  CHECK_FALSE(rep.rows[4].rhs);
  for (int c = 0; c < 100; ++c) {
    auto [e, i, j] = untriple(c);
    CHECK(b0_to_b(c) >= run_fixed_index(i, j));
  }
}

TEST_CASE("b reduces to b0 by a disjunction over <x,i,x>") {
  CHECK(b_to_b0(0).positions == std::vector<Nat>{triple(0, 0, 0)});
  CHECK(b_to_b0(9).positions.size() == 10);
  auto cfg = at(empty_set(), 5000);
  MemberAt rhs = [&](const Nat& x, std::uint64_t s) {
    auto c = at(empty_set(), s);
    SetView b0{"b0", [&](const Nat& p) { return in_jump(Variant::B0, p, c) ? 1 : 0; }};
    return tt_eval(b_to_b0(x), b0) == 1;
  };
  auto rep = check_equivalence(jump_side(Variant::B, cfg), [](const Nat& x) { return x; }, rhs, range_domain(15),
                               5000, 4, false);
  CHECK(rep.count(Outcome::Agree) == 15);
}

TEST_CASE("order-preserving reduction of b0-codes") {
  SetView b = parse_set_spec("evens&le:60");
  std::vector<Nat> probes;
  for (int p : {2, 3, 10, 31})
    for (Nat i : {Nat(identity_index()), const_index(12), Nat(0)}) probes.push_back(triple(query_halt_index(p), i, 11));
  SUBCASE("identity witness") {
    OrderPreserving op{echo_index(), affine_index(1, 1)};
    auto rep = check_equivalence(jump_side(Variant::B0, at(b, 0)), [&](const Nat& c) { return op.map(c); },
                                 jump_side(Variant::B0, at(b, 0)), probes, 50000);
    CHECK(rep.count(Outcome::Disagree) == 0);
    CHECK(rep.count(Outcome::Unresolved) == 0);
    std::size_t in = 0;
    for (const auto& r : rep.rows) in += r.lhs;
    CHECK(in >= 2);
    for (int i = 0; i < 50; ++i) CHECK(op.h(i) < op.h(i + 1));
  }
  SUBCASE("A(n) = B(2n)") {
    SetView a{"half", [b](const Nat& n) { return b(2 * n); }};
    BTWitness w{compose_index(echo_index(), affine_index(2, 0)), affine_index(2, 1)};
    std::vector<Nat> dom;
    for (int x = 0; x < 40; ++x) dom.push_back(x);
    REQUIRE(verify_bT(w, a, b, dom, 1000).ok());
    OrderPreserving op{w.functional, w.bound};
    auto rep = check_equivalence(jump_side(Variant::B0, at(a, 0)), [&](const Nat& c) { return op.map(c); },
                                 jump_side(Variant::B0, at(b, 0)), probes, 50000);
    CHECK(rep.count(Outcome::Disagree) == 0);
    CHECK(rep.count(Outcome::Unresolved) == 0);
  }
}

TEST_CASE("Gerla jumps") {
  TTCondition always{{}, 1};
  TTCondition both{{2, 4}, 8};  // row 3 only
  Nat x_always = const_index(always.code());
  Nat x_both = const_index(both.code());
  for (SetView a : {empty_set(), evens(), primes()}) {
    auto cfg = at(a, 1000);
    CHECK(in_jump(Variant::Tt, x_always, cfg));
    CHECK_FALSE(in_jump(Variant::Tt, 0, cfg));
  }
  CHECK(in_jump(Variant::Tt, x_both, at(evens(), 1000)));
  CHECK_FALSE(in_jump(Variant::Tt, x_both, at(primes(), 1000)));
  auto k1 = at(evens(), 1000);
  k1.tt_k = 1;
  CHECK_FALSE(in_jump(Variant::Bk, x_both, k1));
  k1.tt_k = 2;
  CHECK(in_jump(Variant::Bk, x_both, k1));
  // A_bk is inside A_tt
  for (int x = 0; x < 80; ++x)
    if (in_jump(Variant::Bk, x, k1)) CHECK(in_jump(Variant::Tt, x, k1));
}

TEST_CASE("A_tt reduces to A^b0") {
  SetView a = parse_set_spec("evens&le:60");
  AttToB0 red{canonical_tt_witness()};
  std::vector<Nat> probes = {0, identity_index()};
  for (auto c : {TTCondition::single(4), TTCondition::single(5), TTCondition::disjunction({1, 3, 62}),
                 TTCondition::disjunction({1, 58}), TTCondition{{}, 1}, TTCondition{{6, 7}, 2},
                 TTCondition{{6, 8}, 8}, TTCondition{{70}, 1}})
    probes.push_back(const_index(c.code()));
  auto rep = check_equivalence(jump_side(Variant::Tt, at(a, 0)), [&](const Nat& x) { return red.map(x); },
                               jump_side(Variant::B0, at(a, 0)), probes, 20000);
  CHECK(rep.count(Outcome::Disagree) == 0);
  CHECK(rep.count(Outcome::Unresolved) == 0);
  CHECK_FALSE(rep.rows[0].lhs);
  CHECK_FALSE(rep.rows[0].rhs);
  std::set<Nat> seen;
  for (int x = 0; x <= 100; ++x) CHECK(seen.insert(red.map(x)).second);
}

TEST_CASE("A embeds into A^b") {
  for (SetView a : {evens(), primes()}) {
    auto cfg = at(a, 1000);
    for (int x = 0; x < 30; ++x) CHECK(in_jump(Variant::B, embed_into_jump(x), cfg) == (a(x) == 1));
  }
}

TEST_CASE("empty^b and the halting set translate into each other") {
  auto dom = range_domain(15);
  MemberAt k = [](const Nat& x, std::uint64_t s) { return halts_on_self(x, s); };
  auto to_jump = check_equivalence(k, halting_to_jump, jump_side(Variant::B, at(empty_set(), 0)), dom, 100000);
  CHECK(to_jump.count(Outcome::Disagree) == 0);
  auto from_jump = check_equivalence(jump_side(Variant::B, at(empty_set(), 0)), jump_to_halting, k, dom, 100000);
  CHECK(from_jump.count(Outcome::Disagree) == 0);
  CHECK(from_jump.count(Outcome::Unresolved) == 0);
}

TEST_CASE("b1 depends on the numbering") {
  auto c0 = at(empty_set(), 1000), c1 = at(empty_set(), 1000);
  c0.reindex = halving_reindex(0);
  c1.reindex = halving_reindex(1);
  auto v0 = member_set(enum_jump(Variant::B1, c0, range_domain(20)));
  auto v1 = member_set(enum_jump(Variant::B1, c1, range_domain(20)));
  CHECK(v0 != v1);
  CHECK(v1.count(1) == 1);
  CHECK(v0.count(1) == 0);
}

TEST_CASE("finite-set restriction breaks the b0 -> b reduction; use-bounded keeps it") {
  SetView a = from_list({1});
  Nat code = triple(reads_one_zero(), const_index(5), 0);
  Nat g = b0_to_b(code);
  auto use = at(a, 10000);
  auto fin = use;
  fin.restriction = Restriction::FiniteSet;
  CHECK_FALSE(in_jump(Variant::B0, code, use));
  CHECK_FALSE(in_jump(Variant::B0, code, fin));
  CHECK_FALSE(in_jump(Variant::B, g, use));
  auto m = jump_member(Variant::B, g, fin);
  CHECK(m.member);
  CHECK(m.bound == 0);
}

TEST_CASE("deciding the bounded jump from a halting approximation") {
  for (SetView a : {empty_set(), evens()}) {
    auto cfg = at(a, 500);
    for (int n = 0; n < 30; ++n) {
      auto d = decide_with_halting(n, a, 500);
      CHECK(d.member == in_jump(Variant::B, n, cfg));
      if (!d.member) CHECK(d.fragile);
    }
  }
}

TEST_CASE("nested jump: level one is the plain jump") {
  NestedJump nj(2, {300});
  CHECK(nj.budget(2) == 300);
  CHECK(nj.budget(1) == 90000);
  auto cfg = at(empty_set(), 90000);
  for (int x = 0; x < 20; ++x) CHECK(nj.member(1, x) == in_jump(Variant::B, x, cfg));
  // the embedding lifts: x in empty^b  iff  embed(x) in empty^2b
  for (int x = 0; x < 12; ++x) CHECK(nj.member(2, embed_into_jump(x)) == nj.member(1, x));
}
