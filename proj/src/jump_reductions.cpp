#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>

namespace bjump {

namespace {

std::vector<Nat> params(const Nat& code, std::size_t n, Fuel& fuel) {
  auto ps = seq_decode(code);
  if (!ps || ps->size() != n) fuel.exhaust();
  return *ps;
}

// Run e on x with the oracle cut at `bound`. Queries past the cut make this
// computation diverge; blocking from an outer restriction still propagates.
Nat run_cut(const Nat& e, const Nat& x, const Nat& bound, Fuel& fuel, const Oracle& oracle) {
  int tag = 0;
  try {
    return evaluate(e, x, fuel, restrict_use(oracle, bound, &tag));
  } catch (const OracleBlocked& b) {
    if (b.source != &tag) throw;
    fuel.exhaust();
  }
}

// max_{y <= v} f(y)
Nat monotone_hull(const Nat& f, const Nat& v, Fuel& fuel) {
  Nat best = 0;
  for (Nat y = 0; y <= v; ++y) best = std::max(best, evaluate(f, y, fuel));
  return best;
}

Nat nat_run_fixed(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto [i, j] = unpair(p);
  return evaluate(i, j, fuel);
}

Nat nat_empty_run(const Nat& x, const Nat&, Fuel& fuel, const Oracle&) { return evaluate(x, x, fuel); }

// halts iff y is in the bounded jump of the empty set (use-bounded reading)
Nat nat_jump_search(const Nat& y, const Nat&, Fuel& fuel, const Oracle&) {
  for (std::uint64_t r = 1;; r *= 2) {
    Nat top = y < r ? y : Nat(r);
    for (Nat i = 0; i <= top; ++i) {
      auto b = try_evaluate(i, y, r, fuel);
      if (b.status != Status::Halted) continue;
      int tag = 0;
      try {
        auto f = try_evaluate(y, y, r, fuel, restrict_use(Oracle{}, b.value, &tag));
        if (f.status == Status::Halted) return 0;
      } catch (const OracleBlocked& blk) {
        if (blk.source != &tag) throw;
      }
    }
  }
}

Nat nat_b0_to_b(const Nat& code, const Nat&, Fuel& fuel, const Oracle& oracle) {
  auto [e, i, j] = untriple(code);
  Nat b = evaluate(i, j, fuel);
  return run_cut(e, j, b, fuel, oracle);
}

Nat nat_apply_mapped(const Nat& p, const Nat& x, Fuel& fuel, const Oracle&) {
  auto fi = lin_unpair(p);
  if (!fi) fuel.exhaust();
  Nat v = evaluate(fi->second, x, fuel);
  return monotone_hull(fi->first, v, fuel);
}

// param seq(e, k, j, psi, f); the input is ignored
Nat nat_ord_pres_g(const Nat& p, const Nat&, Fuel& fuel, const Oracle& oracle) {
  auto ps = params(p, 5, fuel);
  const Nat &e = ps[0], &k = ps[1], &j = ps[2], &psi = ps[3], &f = ps[4];
  Program kp = decode(k);
  auto* nc = std::get_if<NativeCall>(&kp);
  if (nc == nullptr || nc->kind != kind::ApplyMapped) fuel.exhaust();
  auto fi = lin_unpair(nc->param);
  if (!fi || fi->first != f) fuel.exhaust();
  Nat b = evaluate(fi->second, j, fuel);
  Nat fb = monotone_hull(f, b, fuel);
  int tag = 0;
  Oracle outer = restrict_use(oracle, fb, &tag);
  // A's bits below b, read through psi from C cut at f-hull(b)
  Oracle via_psi = [&](const Nat& q) -> int { return evaluate(psi, q, fuel, outer) != 0 ? 1 : 0; };
  try {
    return run_cut(e, j, b, fuel, via_psi);
  } catch (const OracleBlocked& blk) {
    if (blk.source != &tag) throw;
    fuel.exhaust();
  }
}

Nat nat_att_h(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 2, fuel);
  Nat c = evaluate(ps[0], ps[0], fuel);
  return evaluate(ps[1], c, fuel);
}

Nat nat_att_j(const Nat& p, const Nat&, Fuel& fuel, const Oracle& oracle) {
  auto ps = params(p, 2, fuel);
  Nat c = evaluate(ps[0], ps[0], fuel);
  if (evaluate(ps[1], c, fuel, oracle) == 1) return 0;
  fuel.exhaust();
}

Nat nat_tt_max_pos(const Nat&, const Nat& c, Fuel& fuel, const Oracle&) {
  TTCondition cond = TTCondition::decode(c);
  fuel.burn(cond.positions.size());
  Nat m = 0;
  for (const auto& q : cond.positions) m = std::max(m, q);
  return m;
}

}  // namespace

void install_jump_natives() {
  register_native(kind::RunFixed, "run-fixed", nat_run_fixed);
  register_native(kind::EmptyRun, "empty-run", nat_empty_run);
  register_native(kind::JumpSearch, "jump-search", nat_jump_search);
  register_native(kind::B0ToB, "b0-to-b", nat_b0_to_b);
  register_native(kind::ApplyMapped, "apply-mapped", nat_apply_mapped);
  register_native(kind::OrdPresG, "order-preserving-g", nat_ord_pres_g);
  register_native(kind::AttH, "att-bound", nat_att_h);
  register_native(kind::AttJ, "att-functional", nat_att_j);
  register_native(kind::TTMaxPos, "tt-max-position", nat_tt_max_pos);
}

// ---- reductions ----

Nat run_fixed_index(const Nat& i, const Nat& j) { return native_index(kind::RunFixed, pair(i, j)); }

Nat b0_to_b(const Nat& code) {
  auto [e, i, j] = untriple(code);
  Nat k = run_fixed_index(i, j);
  Nat g = pad(native_index(kind::B0ToB, code), k);
  register_witness_hint(g, k);
  return g;
}

TTCondition b_to_b0(const Nat& x, const Nat& max_x) {
  if (x > max_x) throw std::out_of_range("b -> b0 query set too large for " + to_string(x));
  std::vector<Nat> qs;
  for (Nat i = 0; i <= x; ++i) qs.push_back(triple(x, i, x));
  return TTCondition::disjunction(std::move(qs));
}

Nat OrderPreserving::h(const Nat& i) const { return native_index(kind::ApplyMapped, lin_pair(f, i)); }

Nat OrderPreserving::g(const Nat& e, const Nat& k, const Nat& j) const {
  return native_index(kind::OrdPresG, seq_encode({e, k, j, psi, f}));
}

Nat OrderPreserving::map(const Nat& code) const {
  auto [e, i, j] = untriple(code);
  Nat hi = h(i);
  return triple(g(e, hi, j), hi, j);
}

Nat AttToB0::h(const Nat& e) const { return native_index(kind::AttH, seq_encode({e, tt.bound})); }
Nat AttToB0::j(const Nat& e) const { return native_index(kind::AttJ, seq_encode({e, tt.functional})); }
Nat AttToB0::map(const Nat& x) const { return triple(j(x), h(x), z); }

Nat tt_max_position_index() { return native_index(kind::TTMaxPos, 0); }
BTWitness canonical_tt_witness() { return {tt_eval_index(), tt_max_position_index()}; }

Nat embed_into_jump(const Nat& x) {
  Nat i = const_index(x + 1);
  Nat y = pad(query_halt_index(x), i);
  register_witness_hint(y, i);
  return y;
}

Nat halting_to_jump(const Nat& x) { return native_index(kind::EmptyRun, x); }
Nat jump_to_halting(const Nat& y) { return native_index(kind::JumpSearch, y); }
bool halts_on_self(const Nat& x, std::uint64_t budget) { return run(x, x, budget).halted(); }

TurcharAnswer decide_with_halting(const Nat& n, const SetView& a, std::uint64_t stage, std::uint64_t window) {
  TurcharAnswer ans;
  Nat top = n < window ? n : Nat(window - 1);
  Oracle ao = as_oracle(a);
  for (Nat i = 0; i <= top && window > 0; ++i) {
    ++ans.questions;
    auto b = run(i, n, stage);
    if (!b.halted()) {
      ans.fragile = true;
      continue;
    }
    // the bounded existential: A below the bound is a finite string
    ++ans.questions;
    if (run(n, n, stage, restrict_use(ao, b.value)).halted()) {
      ans.member = true;
      ans.fragile = false;
      return ans;
    }
    ans.fragile = true;
  }
  return ans;
}

// ---- iterated jump ----

NestedJump::NestedJump(unsigned levels, std::vector<std::uint64_t> budgets, std::uint64_t window,
                       std::uint64_t inner_cap)
    : levels_(levels), budgets_(std::move(budgets)), window_(window), memo_(levels + 1) {
  if (levels == 0) throw std::invalid_argument("nested jump needs at least one level");
  if (budgets_.empty()) throw std::invalid_argument("nested jump needs an outer budget");
  // given budgets run outer to inner in the caller's list; store by level
  std::vector<std::uint64_t> by_level(levels, 0);
  for (unsigned k = 0; k < levels; ++k) {
    unsigned level = levels - k;
    if (k < budgets_.size()) {
      by_level[level - 1] = budgets_[k];
    } else {
      std::uint64_t outer = by_level[level];
      std::uint64_t sq = outer > inner_cap / std::max<std::uint64_t>(outer, 1) ? inner_cap : outer * outer;
      by_level[level - 1] = std::max(outer, std::min(sq, inner_cap));
    }
  }
  budgets_ = std::move(by_level);
}

std::size_t NestedJump::cached() const {
  std::size_t n = 0;
  for (const auto& m : memo_) n += m.size();
  return n;
}

bool NestedJump::compute(unsigned level, const Nat& x, std::uint64_t budget) {
  JumpConfig cfg;
  cfg.budget = budget;
  cfg.window = window_;
  if (level > 1) cfg.base = SetView{"nested", [this, level](const Nat& p) { return member(level - 1, p) ? 1 : 0; }};
  return in_jump(Variant::B, x, cfg);
}

bool NestedJump::member(unsigned level, const Nat& x) {
  if (level == 0) return false;
  auto& memo = memo_.at(level);
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  bool v = compute(level, x, budget(level));
  if (!v && probe_ && compute(level, x, 2 * budget(level))) fragile_.emplace_back(level, x);
  memo[x] = v;
  return v;
}

}  // namespace bjump
