#include "doctest.h"

#include "bjump/ershov.hpp"
#include "bjump/jump.hpp"

using namespace bjump;

namespace {

Script flips_script(std::uint64_t count) {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  for (std::uint64_t n = 0; n < count; ++n) {
    if (n % 3 == 0) {
      s.entries.push_back({n, Ordinal::omega_power(1, 2), 0, 1});
      s.entries.push_back({n, Ordinal::omega_power(1, 1), 1, 6});
      s.entries.push_back({n, Ordinal::finite(4), 0, 25});
    } else if (n % 3 == 1) {
      s.entries.push_back({n, Ordinal::finite(5), 1, 3});
    }
  }
  return s;
}

// omega-c.e.: at most 3 changes, value settles to n % 2
Script omega_script(std::uint64_t count) {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  for (std::uint64_t n = 0; n < count; ++n) {
    int final = static_cast<int>(n % 2);
    std::uint64_t changes = n % 4;
    for (std::uint64_t c = 0; c <= changes; ++c)
      s.entries.push_back({n, Ordinal::finite(3 - c), static_cast<int>((final + changes - c) % 2), 1 + 7 * c});
  }
  return s;
}

}  // namespace

TEST_CASE("witness evaluation follows the least converged ordinal") {
  Script s;
  s.entries = {{0, Ordinal::omega_power(1), 1, 1}, {0, Ordinal::finite(3), 0, 5}, {2, Ordinal::finite(0), 1, 1}};
  auto w = script_witness(s);
  CHECK(w.bound == Ordinal::omega_power(2));
  auto e = eval_witness(w, 0, 3);
  REQUIRE(e);
  CHECK(e->value == 1);
  e = eval_witness(w, 0, 5);
  REQUIRE(e);
  CHECK(e->ord == Ordinal::finite(3));
  CHECK(e->value == 0);
  CHECK_FALSE(eval_witness(w, 1, 1000));
  CHECK(limit_value(w, 2, 10) == 1);
  // the stage convention delays w*1 + 7 until stage 9
  Script late;
  late.entries = {{0, Ordinal::from_coefficients({7, 1}), 1, 1}};
  CHECK_FALSE(eval_witness(script_witness(late), 0, 8));
  CHECK(eval_witness(script_witness(late), 0, 9));
  // program form agrees with the provider
  CHECK(run(w.psi, pair(0, Ordinal::finite(3).code()), 100).value == 0);
  CHECK_FALSE(run(w.psi, pair(0, Ordinal::finite(3).code()), 3).halted());
}

TEST_CASE("script json round trip and duplicate rejection") {
  auto s = flips_script(6);
  auto back = Script::from_json(s.to_json());
  CHECK(script_index(back) == script_index(s));
  auto bad = nlohmann::json::array({{{"n", 0}, {"ordinal", "w"}, {"value", 1}},
                                    {{"n", 0}, {"ordinal", nlohmann::json::array({0, 1})}, {"value", 0}}});
  CHECK_THROWS_AS(Script::from_json(bad), std::invalid_argument);
}

TEST_CASE("generic programs are scanned by weight") {
  // psi(n, beta) = 1 for every beta: least is 0
  auto w = AlphaCEWitness{const_index(1), Ordinal::omega_power(1)};
  auto e = eval_witness(w, 5, 50);
  REQUIRE(e);
  CHECK(e->ord == Ordinal{});
  CHECK(e->value == 1);
}

TEST_CASE("downward transform preserves limits") {
  auto wB = script_witness(flips_script(40));
  SUBCASE("identity reduction") {
    auto chi = downward_transform(echo_index(), identity_index(), wB, 2, {0, 1, 2});
    for (int n = 0; n < 12; ++n) CHECK(limit_value(chi, n, 4000) == limit_value(wB, n, 4000));
  }
  SUBCASE("A(n) = B(2n)") {
    auto chi = downward_transform(compose_index(echo_index(), affine_index(2, 0)), affine_index(2, 1), wB, 2);
    for (int n = 0; n < 12; ++n) CHECK(limit_value(chi, n, 4000) == limit_value(wB, 2 * n, 4000));
    auto tr = downward_trace(compose_index(echo_index(), affine_index(2, 0)), affine_index(2, 1), wB, 3, 4000);
    CHECK(tr.bound_value == 7);
    for (std::size_t i = 1; i < tr.writes.size(); ++i) CHECK(tr.writes[i].ord < tr.writes[i - 1].ord);
  }
  CHECK_THROWS_AS(downward_transform(echo_index(), 0, wB, 2, {3}), NonTotalBound);
}

TEST_CASE("jump transform matches the bounded jump enumerator") {
  for (auto [spec, script] : {std::pair{std::string("empty"), Script{{}, std::make_pair(0, std::uint64_t{1})}},
                              std::pair{std::string("evens&le:40"), Script{}}}) {
    if (spec != "empty") {
      script.fallback = std::make_pair(0, std::uint64_t{1});
      for (std::uint64_t n = 0; n <= 40; ++n) script.entries.push_back({n, Ordinal{}, n % 2 == 0 ? 1 : 0, 2});
    }
    auto wA = script_witness(script, Ordinal::omega_power(1));
    auto chi = jump_transform(wA, 1);
    JumpConfig cfg;
    cfg.base = parse_set_spec(spec);
    cfg.budget = 20000;
    for (int n = 0; n < 10; ++n) {
      CAPTURE(spec);
      CAPTURE(n);
      auto tr = jump_transform_trace(wA, 1, n, 20000);
      REQUIRE_FALSE(tr.writes.empty());
      CHECK(tr.writes[0].ord == Ordinal::omega_power(1, n));
      CHECK(tr.decrements <= static_cast<std::uint64_t>(n));
      CHECK_FALSE(tr.capped);
      CHECK(limit_value(chi, n, 20000) == (in_jump(Variant::B, n, cfg) ? 1 : 0));
    }
  }
}

TEST_CASE("omega-c.e. witnesses and bounded reductions to K") {
  auto w = script_witness(omega_script(20), Ordinal::omega_power(1));
  auto bt = omega_reduction_from_witness(w);
  auto k = halting_approx(5000);
  Oracle ko = as_oracle(k);
  for (int n = 0; n < 20; ++n) {
    CAPTURE(n);
    auto b = run(bt.bound, n, 5000);
    REQUIRE(b.halted());
    auto r = run(bt.functional, n, 5000, restrict_use(ko, b.value));
    REQUIRE(r.halted());
    CHECK(r.value == n % 2);
  }
  auto back = omega_witness_from_reduction(bt);
  for (int n = 0; n < 20; ++n) {
    CAPTURE(n);
    auto st = witness_state(back, n, 5000);
    REQUIRE(st.current);
    CHECK(st.value == n % 2);
    CHECK(st.strictly_decreasing());
  }
}

TEST_CASE("w^2-c.e. sets reduce into the second bounded jump") {
  auto w = script_witness(flips_script(12));
  NestedJump nj(2, {3000, 200000}, 2);
  for (int n = 0; n < 8; ++n) {
    CAPTURE(n);
    auto f = reduction_image(w.psi, n, 2, 100000);
    REQUIRE(f);
    auto u = reduction_u(w.psi, n, 2, 100000);
    REQUIRE(u);
    CHECK(*f > *u);
    CHECK(nj.member(2, *f) == (limit_value(w, n, 100000) == 1));
  }
}

TEST_CASE("w^3-c.e. sets reduce into the third bounded jump") {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  s.entries = {{0, Ordinal::omega_power(2, 1), 1, 1}, {0, Ordinal::from_coefficients({2, 1}), 0, 5},
               {1, Ordinal::omega_power(2, 2), 0, 1}, {1, Ordinal::from_coefficients({0, 3, 1}), 1, 4},
               {2, Ordinal::finite(3), 1, 2}};
  auto w = script_witness(s);
  REQUIRE(w.bound == Ordinal::omega_power(3));
  NestedJump nj(3, {2000, 20000, 200000}, 2);
  for (int n = 0; n < 4; ++n) {
    CAPTURE(n);
    auto f = reduction_image(w.psi, n, 3, 100000);
    REQUIRE(f);
    CHECK(nj.member(3, *f) == (limit_value(w, n, 100000) == 1));
  }
}
