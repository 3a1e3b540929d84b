#include "bjump/suites.hpp"

#include "bjump/assembler.hpp"
#include "bjump/constructions.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <stdexcept>

namespace bjump {

void PropertyResult::record(bool pass, const nlohmann::json& detail) {
  ++checked;
  if (pass) return;
  ++failed;
  if (failures.size() < 8) failures.push_back(detail);
}

nlohmann::json PropertyResult::to_json() const {
  nlohmann::json j{{"property", name}, {"checked", checked}, {"failed", failed}, {"passed", checked - failed}};
  if (failed) j["failures"] = failures;
  return j;
}

bool SuiteReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.ok(); });
}

const PropertyResult& SuiteReport::property(const std::string& name) const {
  for (const auto& p : properties)
    if (p.name == name) return p;
  throw std::out_of_range("no property " + name + " in suite " + suite);
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json props = nlohmann::json::array();
  for (const auto& p : properties) props.push_back(p.to_json());
  return {{"suite", suite}, {"ok", ok()}, {"seconds", seconds}, {"properties", props}, {"metrics", metrics}};
}

Script shoenfield_demo_script() {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  auto add = [&](std::uint64_t n, std::vector<std::uint64_t> c, int v, std::uint64_t t) {
    s.entries.push_back({n, Ordinal::from_coefficients(std::move(c)), v, t});
  };
  add(0, {0, 2}, 1, 1);
  add(0, {3, 1}, 0, 9);
  add(0, {1, 1}, 1, 21);
  add(1, {2, 1}, 1, 4);
  add(1, {5}, 0, 30);
  add(2, {4, 2}, 0, 2);
  add(2, {2, 2}, 1, 11);
  add(2, {1, 2}, 0, 40);
  add(3, {0, 1}, 1, 12);
  add(4, {6}, 1, 3);
  add(4, {2}, 0, 50);
  add(5, {1, 3}, 1, 7);
  add(5, {9, 1}, 0, 25);
  add(5, {4, 1}, 1, 60);
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

bool same_run(const RunResult& a, const RunResult& b) {
  return a.halted() == b.halted() && (!a.halted() || a.value == b.value);
}

// ---- acceptable numbering ----

SuiteReport suite_system() {
  SuiteReport rep;
  Nat succ = encode(programs::successor());
  std::vector<Nat> progs = {0,
                            identity_index(),
                            succ,
                            encode(programs::add_pair()),
                            encode(programs::tight_loop()),
                            encode(programs::const_value(3)),
                            const_index(5),
                            affine_index(2, 1),
                            compose_index(succ, succ),
                            pad(encode(programs::add_pair()), 7)};
  const std::uint64_t budget = 2000;

  PropertyResult smn_p{"smn"}, pad_p{"padding"}, fix_p{"fixed-point"};
  for (const auto& e : progs)
    for (std::uint64_t y = 0; y < 10; ++y)
      for (std::uint64_t x = 0; x < 10; ++x) {
        // specialisation costs one step
        auto lhs = run(smn(e, y), x, budget + 1);
        auto rhs = run(e, pair(y, x), budget);
        smn_p.record(same_run(lhs, rhs), {{"e", to_string(e)}, {"y", y}, {"x", x}});
        auto padded = run(pad(e, y), x, budget);
        pad_p.record(same_run(padded, run(e, x, budget)), {{"e", to_string(e)}, {"k", y}, {"x", x}});
      }

  std::vector<Nat> transformers = {native_index(kind::ConstIndex, 0), const_index(succ),
                                   const_index(identity_index()), const_index(const_index(7)),
                                   const_index(encode(programs::add_pair()))};
  for (const auto& t : transformers) {
    Nat m = fixed_point(t);
    auto image = run(t, m, 100'000);
    if (!image.halted()) {
      fix_p.record(false, {{"transformer", to_string(t)}, {"reason", "transformer diverged"}});
      continue;
    }
    for (std::uint64_t x = 0; x < 20; ++x) {
      // the fixed point pays a bounded overhead, so compare with slack both ways
      auto a = run(m, x, budget), a4 = run(m, x, 4 * budget);
      auto b = run(image.value, x, budget), b4 = run(image.value, x, 4 * budget);
      bool ok = (!a.halted() || same_run(a, b4)) && (!b.halted() || same_run(b, a4));
      fix_p.record(ok, {{"transformer", to_string(t)}, {"x", x}});
    }
  }
  rep.properties = {smn_p, pad_p, fix_p};
  return rep;
}

// ---- ordinals ----

std::vector<Ordinal> small_ordinals(unsigned len) {
  std::vector<Ordinal> out;
  std::uint64_t total = 1;
  for (unsigned i = 0; i < len; ++i) total *= 4;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::uint64_t> c(len);
    std::uint64_t v = code;
    for (unsigned i = 0; i < len; ++i, v /= 4) c[i] = v % 4;
    out.push_back(Ordinal::from_coefficients(c));
  }
  return out;
}

SuiteReport suite_ordinals() {
  SuiteReport rep;
  auto all = small_ordinals(3);
  PropertyResult comm{"natural-sum-commutative"}, assoc{"natural-sum-associative"},
      mono{"natural-sum-strictly-monotone"}, closure{"closure-below-w^d"}, step{"rank-step"};
  for (const auto& a : all)
    for (const auto& b : all) {
      comm.record(natural_sum(a, b) == natural_sum(b, a), {{"a", a.to_text()}, {"b", b.to_text()}});
      for (unsigned d = 1; d <= 3; ++d)
        if (a.below_omega_power(d) && b.below_omega_power(d))
          closure.record(natural_sum(a, b).below_omega_power(d), {{"a", a.to_text()}, {"b", b.to_text()}, {"d", d}});
      for (const auto& c : all) {
        assoc.record(natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c)),
                     {{"a", a.to_text()}, {"b", b.to_text()}, {"c", c.to_text()}});
        // replacing a summand by a smaller one lowers the sum
        if (b < a)
          mono.record(natural_sum({b, c}) < natural_sum({a, c}),
                      {{"smaller", b.to_text()}, {"larger", a.to_text()}, {"other", c.to_text()}});
      }
    }

  // r(l', beta) + 2 < r(l, alpha) + 1 whenever l' <= l and beta <= alpha
  // componentwise, with one of them strict
  for (unsigned k = 1; k <= 3; ++k) {
    auto below = small_ordinals(k);
    std::vector<std::vector<Ordinal>> tuples;
    if (k == 3)
      for (const auto& a : below) tuples.push_back({a});
    else
      for (const auto& a : below)
        for (const auto& b : below) tuples.push_back({a, b});
    std::vector<std::vector<Ordinal>> ranks(4);
    for (std::uint64_t l = 0; l <= 3; ++l)
      for (const auto& t : tuples) ranks[l].push_back(jump_rank(k, l, t));
    for (std::size_t ai = 0; ai < tuples.size(); ++ai)
      for (std::size_t bi = 0; bi < tuples.size(); ++bi) {
        const auto &alpha = tuples[ai], &beta = tuples[bi];
        bool le = true, eq = true;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          le = le && beta[i] <= alpha[i];
          eq = eq && beta[i] == alpha[i];
        }
        if (!le) continue;
        for (std::uint64_t l = 0; l <= 3; ++l)
          for (std::uint64_t l2 = 0; l2 <= l; ++l2) {
            if (eq && l2 == l) continue;
            bool ok = ranks[l2][bi].plus_finite(2) < ranks[l][ai].plus_finite(1);
            if (ok) {
              ++step.checked;
              continue;
            }
            nlohmann::json j{{"k", k}, {"l", l}, {"l2", l2}};
            for (const auto& x : alpha) j["alpha"].push_back(x.to_text());
            for (const auto& x : beta) j["beta"].push_back(x.to_text());
            step.record(false, j);
          }
      }
  }
  rep.properties = {comm, assoc, mono, closure, step};
  return rep;
}

// ---- jump definitions ----

JumpConfig config_at(SetView base, std::uint64_t budget) {
  JumpConfig c;
  c.base = std::move(base);
  c.budget = budget;
  return c;
}

void fold_equivalence(PropertyResult& p, const EquivReport& r, nlohmann::json& metrics, const std::string& key) {
  for (const auto& row : r.rows)
    p.record(row.outcome != Outcome::Disagree,
             {{"x", to_string(row.x)}, {"image", to_string(row.image)}, {"lhs", row.lhs}, {"rhs", row.rhs}});
  metrics[key] = {{"probes", r.rows.size()},
                  {"agree", r.count(Outcome::Agree)},
                  {"unresolved", r.count(Outcome::Unresolved)},
                  {"disagree", r.count(Outcome::Disagree)},
                  {"unresolved_fraction", r.unresolved_fraction()}};
}

SuiteReport suite_jump() {
  SuiteReport rep;
  const std::uint64_t budget = 100'000;
  auto dom = range_domain(15);
  MemberAt k = [](const Nat& x, std::uint64_t s) { return halts_on_self(x, s); };
  auto empty_b = jump_side(Variant::B, config_at(empty_set(), 0));

  PropertyResult to_jump{"halting-into-empty^b"}, from_jump{"empty^b-into-halting"};
  fold_equivalence(to_jump, check_equivalence(k, halting_to_jump, empty_b, dom, budget), rep.metrics, "halting_to_jump");
  fold_equivalence(from_jump, check_equivalence(empty_b, jump_to_halting, k, dom, budget), rep.metrics,
                   "jump_to_halting");

  // b0 -> b on a decidable base: hand-picked triples plus the first codes
  SetView a = parse_set_spec("evens&le:40");
  std::vector<Nat> probes = {triple(query_halt_index(4), const_index(10), 3),
                             triple(query_halt_index(4), const_index(2), 3),
                             triple(query_halt_index(5), const_index(10), 3),
                             triple(echo_index(), identity_index(), 8),
                             triple(echo_index(), 0, 8)};
  for (std::uint64_t c = 0; c < 15; ++c) probes.push_back(c);
  PropertyResult b0b{"b0-into-b"}, bb0{"b-into-b0"};
  fold_equivalence(b0b,
                   check_equivalence(jump_side(Variant::B0, config_at(a, 0)), b0_to_b,
                                     jump_side(Variant::B, config_at(a, 0)), probes, budget),
                   rep.metrics, "b0_to_b");

  MemberAt via_b0 = [a](const Nat& x, std::uint64_t s) {
    auto c = config_at(a, s);
    SetView b0{"b0", [c](const Nat& p) { return in_jump(Variant::B0, p, c) ? 1 : 0; }};
    return tt_eval(b_to_b0(x), b0) == 1;
  };
  fold_equivalence(bb0,
                   check_equivalence(jump_side(Variant::B, config_at(a, 0)), [](const Nat& x) { return x; }, via_b0,
                                     dom, budget, 4, false),
                   rep.metrics, "b_to_b0");
  rep.properties = {to_jump, from_jump, b0b, bb0};
  return rep;
}

// ---- Ershov transformations ----

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

// w-c.e. script: n changes its mind n % 4 times
Script omega_flips_script(std::uint64_t count) {
  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  for (std::uint64_t n = 0; n < count; ++n)
    for (std::uint64_t c = 0; c <= n % 4; ++c)
      s.entries.push_back({n, Ordinal::finite(4 - c), static_cast<int>((n + c) % 2), 1 + 5 * c});
  return s;
}

SuiteReport suite_ershov() {
  SuiteReport rep;
  const std::uint64_t budget = 4000;
  PropertyResult down{"downward-limit"}, jump{"jump-limit"}, decreasing{"histories-decreasing"},
      first{"jump-first-write"}, decs{"jump-decrements"};

  auto wB = script_witness(omega_flips_script(48), Ordinal::omega_power(1));
  Nat phi = compose_index(echo_index(), affine_index(2, 0));
  Nat f = affine_index(2, 1);
  auto chi = downward_transform(phi, f, wB, 1);
  for (std::uint64_t n = 0; n < 20; ++n) {
    // brute force: A(n) = B(2n), B read off the script's last entry
    auto want = limit_value(wB, 2 * n, budget);
    auto got = limit_value(chi, n, budget);
    down.record(want && got == want, {{"n", n}});
    decreasing.record(witness_state(chi, n, budget).strictly_decreasing(), {{"n", n}, {"witness", "downward"}});
    decreasing.record(witness_state(wB, n, budget).strictly_decreasing(), {{"n", n}, {"witness", "base"}});
  }

  for (const std::string spec : {"empty", "evens&le:40"}) {
    Script script;
    script.fallback = std::make_pair(0, std::uint64_t{1});
    SetView base = parse_set_spec(spec);
    for (std::uint64_t n = 0; n <= 40; ++n)
      if (base.member(n)) script.entries.push_back({n, Ordinal{}, 1, 2});
    auto wA = script_witness(script, Ordinal::omega_power(1));
    auto chiJ = jump_transform(wA, 1);
    auto cfg = config_at(base, 20'000);
    for (std::uint64_t n = 0; n < 10; ++n) {
      auto tr = jump_transform_trace(wA, 1, n, 20'000);
      nlohmann::json d{{"base", spec}, {"n", n}};
      first.record(!tr.writes.empty() && tr.writes[0].ord == Ordinal::omega_power(1, n), d);
      decs.record(tr.decrements <= n && !tr.capped, d);
      bool dec = true;
      for (std::size_t i = 1; i < tr.writes.size(); ++i) dec = dec && tr.writes[i].ord < tr.writes[i - 1].ord;
      decreasing.record(dec, {{"n", n}, {"witness", "jump"}, {"base", spec}});
      jump.record(limit_value(chiJ, n, 20'000) == (in_jump(Variant::B, n, cfg) ? 1 : 0), d);
    }
  }
  rep.properties = {down, jump, decreasing, first, decs};
  return rep;
}

SuiteReport suite_erbase() {
  SuiteReport rep;
  PropertyResult two{"w^2-into-second-jump"}, three{"w^3-into-third-jump"};
  auto w = script_witness(flips_script(12));
  NestedJump nj(2, {3000, 200'000}, 2);
  for (std::uint64_t n = 0; n < 8; ++n) {
    auto f = reduction_image(w.psi, n, 2, 100'000);
    bool ok = f && nj.member(2, *f) == (limit_value(w, n, 100'000) == 1);
    two.record(ok, {{"n", n}, {"image", f ? to_string(*f) : "none"}});
  }

  Script s;
  s.fallback = std::make_pair(0, std::uint64_t{1});
  s.entries = {{0, Ordinal::omega_power(2, 1), 1, 1}, {0, Ordinal::from_coefficients({2, 1}), 0, 5},
               {1, Ordinal::omega_power(2, 2), 0, 1}, {1, Ordinal::from_coefficients({0, 3, 1}), 1, 4},
               {2, Ordinal::finite(3), 1, 2},         {4, Ordinal::from_coefficients({1, 0, 1}), 1, 3}};
  auto w3 = script_witness(s);
  NestedJump nj3(3, {2000, 20'000, 200'000}, 2);
  for (std::uint64_t n = 0; n < 5; ++n) {
    auto f = reduction_image(w3.psi, n, 3, 100'000);
    bool ok = f && nj3.member(3, *f) == (limit_value(w3, n, 100'000) == 1);
    three.record(ok, {{"n", n}, {"image", f ? to_string(*f) : "none"}});
  }
  auto frag = nj.fragile();
  rep.metrics["fragile_answers"] = frag.size();
  rep.properties = {two, three};
  return rep;
}

// ---- constructions ----

SuiteReport suite_shoenfield() {
  SuiteReport rep;
  const std::uint64_t n_points = 6, stages = 20'000;
  auto script = shoenfield_demo_script();
  auto w = script_witness(script, Ordinal::omega_power(2));
  PropertyResult changes{"changes-at-most-x+1"}, defs{"definitions-at-most-h"}, jump{"B-equals-jump-image"},
      replayed{"replay-identical"}, rows{"marker-on-least-row"};
  ShoenfieldResult res;
  try {
    res = shoenfield_inversion(script, n_points, stages);
  } catch (const ShoenfieldError& e) {
    defs.record(false, {{"error", e.what()}});
    rep.properties = {changes, defs, jump, replayed, rows};
    return rep;
  }
  for (const auto& [x, c] : res.changes) changes.record(c <= x + 1, {{"x", x}, {"changes", c}});
  auto cfg = config_at(from_list(std::vector<Nat>(res.a.begin(), res.a.end()), "A"), 2 * stages + 1000);
  cfg.window = res.window;
  for (std::uint64_t n = 0; n < n_points; ++n) {
    defs.record(Nat(res.definitions[n]) <= res.plan.h[n], {{"n", n}, {"definitions", res.definitions[n]}});
    int b = limit_value(w, n, stages).value_or(0);
    int j = in_jump(Variant::B, res.plan.g[n], cfg) ? 1 : 0;
    jump.record(b == j, {{"n", n}, {"B", b}, {"jump", j}});
  }
  for (const auto& m : res.markers)
    if (m.value) rows.record(m.i == res.least_rows[m.n], {{"n", m.n}, {"row", m.i}});
  auto again = replay(ConstructionTrace::from_jsonl(res.trace.to_jsonl()));
  replayed.record(again.ok(), again.to_json());
  rep.metrics = {{"h0", to_string(res.plan.h[0])},
                 {"row0", res.plan.rows[0]},
                 {"positions", res.changes.size()},
                 {"trace_records", res.trace.records.size()}};
  rep.properties = {changes, defs, jump, replayed, rows};
  return rep;
}

SuiteReport suite_strinc() {
  SuiteReport rep;
  PropertyResult refuted{"concrete-refutation"};
  const std::uint64_t budget = 100'000;
  struct Candidate {
    std::string name;
    Nat gamma, g;
  };
  std::vector<Candidate> cands = {{"constant-0", const_bit_index(0), const_index(64)},
                                  {"constant-1", const_bit_index(1), const_index(64)},
                                  {"oracle-echo", echo_index(), affine_index(1, 8)}};
  for (const std::string spec : {"empty", "evens"}) {
    SetView a = parse_set_spec(spec);
    for (const auto& c : cands) {
      auto r = diagonalize_strinc(c.gamma, c.g, a, budget);
      refuted.record(r.branch != Refutation::BudgetUnresolved, {{"candidate", c.name}, {"base", spec}, {"report", r.to_json()}});
      rep.metrics[c.name + "@" + spec] = refutation_name(r.branch);
    }
  }
  rep.properties = {refuted};
  return rep;
}

// phi_q(q) waits about 2*delay steps, then outputs the condition "A(p) = 0"
Nat late_condition(std::uint64_t p, std::uint64_t delay) {
  Assembler as(1);
  as.clear(0).halt();
  Nat wait = run_fixed_index(encode(as.build()), delay);
  TTCondition c{{Nat(p)}, Nat(1)};
  return compose_index(const_index(c.code()), wait);
}

void check_ttsep(const TTSepResult& res, const std::string& label, std::uint64_t budget, PropertyResult& mono,
                 PropertyResult& unfalsified, PropertyResult& doubles, PropertyResult& replayed) {
  std::set<std::uint64_t> seen;
  for (auto x : res.a_enumeration) mono.record(seen.insert(x).second, {{"run", label}, {"x", x}});
  auto rep = replay(ConstructionTrace::from_jsonl(res.trace.to_jsonl()));
  for (const auto& v : rep.violations) mono.record(false, {{"run", label}, {"violation", v}});
  replayed.record(rep.identical, {{"run", label}, {"report", rep.to_json()}});
  for (std::uint64_t n = 0; n < res.markers.size(); ++n) {
    auto c = check_requirement(res, n, budget);
    nlohmann::json d{{"run", label}, {"n", n}, {"bound_resolved", c.bound_resolved}, {"jump", c.jump}};
    if (c.adversary) d["adversary"] = *c.adversary;
    unfalsified.record(c.unfalsified(), d);
  }
  auto bad = check_double_actions(res, budget);
  doubles.record(bad.empty(), {{"run", label}, {"violations", bad}});
}

SuiteReport suite_ttsep() {
  SuiteReport rep;
  const std::uint64_t n_req = 3, stages = 10'000, budget = 20'000;
  PropertyResult mono{"A-monotone"}, unfalsified{"requirements-unfalsified"}, doubles{"double-actions-separated"},
      replayed{"replay-identical"};
  auto plain = tt_separation(n_req, stages);
  check_ttsep(plain, "cantor", budget, mono, unfalsified, doubles, replayed);

  Nat q = late_condition(3, 200);
  std::vector<Adversary> table = {{const_bit_index(0), const_index(8)},
                                  {compose_index(echo_index(), const_index(q)), const_index(q)},
                                  {const_bit_index(1), const_index(3)}};
  auto forced = tt_separation(n_req, stages, table);
  check_ttsep(forced, "table", budget, mono, unfalsified, doubles, replayed);
  std::size_t actions = 0;
  for (const auto& a : forced.attention) actions += a.size();
  rep.metrics = {{"cantor_enumerated", plain.a_enumeration.size()},
                 {"table_enumerated", forced.a_enumeration.size()},
                 {"table_actions", actions},
                 {"table_k_events", forced.k_events.size()}};
  rep.properties = {mono, unfalsified, doubles, replayed};
  return rep;
}

const std::map<std::string, std::function<SuiteReport()>>& suites() {
  static const std::map<std::string, std::function<SuiteReport()>> m = {
      {"system", suite_system},     {"ordinals", suite_ordinals},     {"jump", suite_jump},
      {"ershov", suite_ershov},     {"erbase", suite_erbase},         {"shoenfield", suite_shoenfield},
      {"strinc", suite_strinc},     {"ttsep", suite_ttsep}};
  return m;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"system", "ordinals", "jump", "ershov", "erbase", "shoenfield", "strinc", "ttsep"};
}

SuiteReport run_suite(const std::string& name) {
  auto it = suites().find(name);
  if (it == suites().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  auto t0 = Clock::now();
  SuiteReport r = it->second();
  r.suite = name;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

}  // namespace bjump
