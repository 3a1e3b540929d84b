#include "doctest.h"

#include "bjump/assembler.hpp"
#include "bjump/constructions.hpp"
#include "bjump/jump.hpp"

using namespace bjump;

namespace {

// rows 2 -> 1 at n = 0, a single row-1 history at n = 1, constant elsewhere
Script descending_script() {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  s.entries.push_back({0, Ordinal::omega_power(1, 2), 1, 1});
  s.entries.push_back({0, Ordinal::from_coefficients({3, 1}), 0, 9});
  s.entries.push_back({0, Ordinal::from_coefficients({1, 1}), 1, 21});
  s.entries.push_back({1, Ordinal::from_coefficients({2, 1}), 1, 4});
  s.entries.push_back({1, Ordinal::finite(5), 0, 30});
  s.entries.push_back({3, Ordinal::from_coefficients({0, 1}), 1, 12});
  return s;
}

}  // namespace

TEST_CASE("theta plan: h recurrence and the slot chain") {
  Nat cfg = seq_encode({7, 8, 9});
  auto plan = build_theta_plan({2, 0, 1}, Nat(12345), cfg);
  REQUIRE(plan.g.size() == 3);
  CHECK(plan.h[0] == 2);
  Nat g0 = plan.g[0];
  CHECK(plan.h[1] == theta_h({plan.h[0]}, g0 + 1, 0));
  CHECK(plan.h[1] == plan.h[0] + (g0 * g0 * g0 - g0) / 6);
  for (std::uint64_t n = 0; n < 3; ++n) CHECK(plan.chain_ok(n));
  CHECK(plan.g[1] > plan.g[0]);
  CHECK(plan.g[2] > plan.g[1]);
}

TEST_CASE("shoenfield inversion on a scripted w^2 witness") {
  auto s = descending_script();
  auto res = shoenfield_inversion(s, 4, 60);
  AlphaCEWitness w = script_witness(s, Ordinal::omega_power(2));
  for (const auto& [x, c] : res.changes) CHECK(c <= x + 1);
  for (std::uint64_t n = 0; n < 4; ++n) {
    CHECK(Nat(res.definitions[n]) <= res.plan.h[n]);
    JumpConfig cfg;
    cfg.base = from_list(std::vector<Nat>(res.a.begin(), res.a.end()));
    cfg.budget = 2 * 60 + 1000;
    cfg.window = res.window;
    CHECK(limit_value(w, n, 60).value_or(0) == (in_jump(Variant::B, res.plan.g[n], cfg) ? 1 : 0));
  }
  auto rep = replay(res.trace);
  CHECK(rep.ok());
}

TEST_CASE("shoenfield: the live marker sits on the least row") {
  auto res = shoenfield_inversion(descending_script(), 4, 60);
  for (const auto& m : res.markers)
    if (m.value) CHECK(m.i == res.least_rows[m.n]);
}

TEST_CASE("shoenfield: a descent through every row takes one slot more than h") {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  s.entries.push_back({0, Ordinal::omega_power(1, 2), 1, 1});
  s.entries.push_back({0, Ordinal::omega_power(1, 1), 0, 8});
  s.entries.push_back({0, Ordinal::finite(0), 1, 16});
  auto res = shoenfield_inversion(s, 1, 30);
  CHECK(res.plan.h[0] == 2);
  CHECK(res.definitions[0] == 3);
  CHECK(res.b_limit[0] == 1);
}

TEST_CASE("shoenfield: tampered traces are caught") {
  auto res = shoenfield_inversion(descending_script(), 3, 40);
  auto t = ConstructionTrace::from_jsonl(res.trace.to_jsonl());
  REQUIRE(replay(t).ok());
  REQUIRE(t.records.size() >= 2);
  auto bad = t;
  bad.records[1]["events"][0]["x"] = 999;
  auto rep = replay(bad);
  CHECK_FALSE(rep.identical);
  CHECK(rep.first_divergent_line == 3);
  REQUIRE(rep.first_divergent_stage);
  CHECK(*rep.first_divergent_stage == t.records[1]["stage"].get<std::uint64_t>());

  auto old = t;
  old.header["schema"] = 99;
  CHECK_THROWS_AS(ConstructionTrace::from_jsonl(old.to_jsonl()), std::invalid_argument);
}

TEST_CASE("shoenfield rejects witnesses it cannot read") {
  Script s;
  s.entries.push_back({0, Ordinal::omega_power(1, 1), 1, 1});
  CHECK_THROWS_AS(shoenfield_inversion(s, 2, 20), ShoenfieldError);
  Script deep;
  deep.fallback = std::make_pair(0, std::uint64_t{1});
  deep.entries.push_back({0, Ordinal::omega_power(2, 1), 1, 1});
  CHECK_THROWS_AS(shoenfield_inversion(deep, 1, 20), ShoenfieldError);
}

TEST_CASE("strinc: each branch of the diagonal argument") {
  Nat g = const_index(64);
  SetView a = empty_set();

  auto value = diagonalize_strinc(const_bit_index(1), g, a, 20'000);
  CHECK(value.branch == Refutation::ValueContradiction);
  CHECK(value.m > value.g);

  auto member = diagonalize_strinc(const_bit_index(0), g, a, 20'000);
  CHECK(member.branch == Refutation::MembershipContradiction);
  CHECK(member.m_in_jump);
  REQUIRE(member.claim);
  CHECK(*member.claim == 0);

  auto diverge = diagonalize_strinc(encode(programs::tight_loop()), g, a, 5'000);
  CHECK(diverge.branch == Refutation::BoundedDivergence);

  CHECK_THROWS_AS(diagonalize_strinc(const_bit_index(0), encode(programs::tight_loop()), a, 1'000), NonTotalG);

  auto t = strinc_trace(member, "empty", 20'000);
  CHECK(replay(ConstructionTrace::from_jsonl(t.to_jsonl())).ok());
}

namespace {

// phi_q(q) runs about 2*delay steps, then outputs "A(p) = 0"
Nat late_condition(std::uint64_t p, std::uint64_t delay) {
  Assembler as(1);
  as.clear(0).halt();
  Nat wait = run_fixed_index(encode(as.build()), delay);
  TTCondition c{{Nat(p)}, Nat(1)};
  return compose_index(const_index(c.code()), wait);
}

std::vector<Adversary> adversary_table(const Nat& q) {
  return {{const_bit_index(0), const_index(8)},
          {compose_index(echo_index(), const_index(q)), const_index(q)},
          {const_bit_index(1), const_index(3)}};
}

}  // namespace

TEST_CASE("tt separation: Cantor-indexed requirements") {
  auto res = tt_separation(4, 80);
  for (std::uint64_t k = 1; k < res.a_enumeration.size(); ++k)
    for (std::uint64_t j = 0; j < k; ++j) CHECK(res.a_enumeration[j] != res.a_enumeration[k]);
  for (std::uint64_t n = 0; n < 4; ++n) CHECK(check_requirement(res, n, 5'000).unfalsified());
  CHECK(check_double_actions(res, 5'000).empty());
  CHECK(replay(res.trace).ok());
}

TEST_CASE("tt separation: an adversary that changes its mind") {
  Nat q = late_condition(3, 40);
  auto res = tt_separation(3, 200, adversary_table(q));
  for (std::uint64_t n = 0; n < 3; ++n) {
    auto c = check_requirement(res, n, 5'000);
    CHECK(c.bound_resolved);
    CHECK(c.unfalsified());
  }
  // the echo adversary forced both subcases on the same marker
  REQUIRE(res.attention[1].size() >= 2);
  CHECK(res.attention[1][0].subcase == 'A');
  CHECK(res.attention[1][1].subcase == 'B');
  CHECK(check_double_actions(res, 5'000).empty());
  bool saw_q = false;
  for (const auto& e : res.k_events) saw_q = saw_q || e.y == q;
  CHECK(saw_q);
  auto rep = replay(ConstructionTrace::from_jsonl(res.trace.to_jsonl()));
  CHECK(rep.ok());
}
