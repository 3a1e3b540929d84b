#include "bjump/ershov.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace bjump {

namespace {

// largest oracle bound we are willing to simulate position by position
constexpr std::uint64_t kMaxPositions = std::uint64_t{1} << 14;
constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

std::optional<std::vector<Nat>> decode_params(const Nat& code, std::size_t n) {
  auto ps = seq_decode(code);
  if (!ps || ps->size() != n) return std::nullopt;
  return ps;
}

// least ordinal of each timeline as of some stage; pointers only move forward
struct Timelines {
  std::vector<std::vector<HistoryEntry>> lines;
  std::vector<std::size_t> next;
  std::vector<std::optional<HistoryEntry>> now;

  void advance(std::size_t upto, std::uint64_t s) {
    for (std::size_t j = 0; j < upto && j < lines.size(); ++j)
      while (next[j] < lines[j].size() && lines[j][next[j]].stage <= s) now[j] = lines[j][next[j]++];
  }
  bool defined(std::size_t upto) const {
    for (std::size_t j = 0; j < upto; ++j)
      if (!now[j]) return false;
    return true;
  }
};

Timelines timelines_for(const AlphaCEWitness& w, const Nat& n, std::uint64_t count, std::uint64_t horizon) {
  (void)n;
  Timelines t;
  t.lines.resize(count);
  t.next.assign(count, 0);
  t.now.assign(count, std::nullopt);
  for (std::uint64_t j = 0; j < count; ++j) t.lines[j] = prefix_minima(events_below(w, j, horizon));
  return t;
}

// sigma as an oracle: positions <= m answer the current values, beyond blocks
Oracle snapshot_oracle(const Timelines& t, std::uint64_t m) {
  std::vector<int> bits(m + 1);
  for (std::uint64_t j = 0; j <= m; ++j) bits[j] = t.now[j]->value;
  return [bits](const Nat& p) -> int {
    if (p >= bits.size()) throw OracleBlocked{p, &kMaxPositions};
    return bits[static_cast<std::size_t>(p)];
  };
}

HistoryEntry normalized(std::uint64_t stage, const Ordinal& o, int value) {
  return {convergence_stage(stage, o), o, value};
}

std::vector<WitnessEvent> as_events(const std::vector<HistoryEntry>& writes, std::uint64_t horizon) {
  std::vector<WitnessEvent> out;
  for (const auto& w : writes)
    if (w.stage <= horizon) out.push_back({w.stage, w.ord, w.value});
  return out;
}

}  // namespace

// ---- downward ----

DownwardTrace downward_trace(const Nat& phi, const Nat& f, const AlphaCEWitness& wB, const Nat& n,
                             std::uint64_t horizon) {
  DownwardTrace tr;
  horizon = std::min(horizon, kHorizonCap);
  auto fr = run(f, n, horizon);
  if (!fr.halted()) return tr;
  tr.bound_value = fr.value;
  auto m = to_u64(fr.value);
  if (!m || *m >= kMaxPositions) return tr;
  auto tl = timelines_for(wB, n, *m + 1, horizon);
  std::set<std::uint64_t> stages;
  for (const auto& line : tl.lines)
    for (const auto& e : line) stages.insert(std::max(e.stage, fr.steps));
  for (auto it = stages.begin(); it != stages.end(); ++it) {
    std::uint64_t s = *it;
    tl.advance(*m + 1, s);
    if (!tl.defined(*m + 1)) continue;
    // every later stage in the set changes some alpha, so the sum drops there
    std::uint64_t next = std::next(it) == stages.end() ? kNever : *std::next(it);
    std::vector<Ordinal> alphas;
    for (const auto& a : tl.now) alphas.push_back(a->ord);
    Ordinal sum = natural_sum(alphas);
    auto r = run(phi, n, horizon, snapshot_oracle(tl, *m));
    if (!r.halted()) continue;
    std::uint64_t at = std::max(s, r.steps);
    if (at < next && at <= horizon) tr.writes.push_back(normalized(at, sum, r.value != 0 ? 1 : 0));
  }
  return tr;
}

namespace {

std::vector<WitnessEvent> downward_events(const Nat& param, const Nat& n, std::uint64_t horizon) {
  auto ps = decode_params(param, 4);
  if (!ps) return {};
  Ordinal bound;
  try {
    bound = Ordinal::from_code((*ps)[3]);
  } catch (const std::out_of_range&) {
    return {};
  }
  return as_events(downward_trace((*ps)[0], (*ps)[1], AlphaCEWitness{(*ps)[2], bound}, n, horizon).writes, horizon);
}

}  // namespace

AlphaCEWitness downward_transform(const Nat& phi, const Nat& f, const AlphaCEWitness& wB, unsigned k,
                                  const std::vector<Nat>& probes, std::uint64_t probe_budget) {
  for (const auto& p : probes)
    if (!run(f, p, probe_budget).halted())
      throw NonTotalBound("bound function did not halt on " + to_string(p) + " within " +
                          std::to_string(probe_budget) + " steps");
  Nat psi = native_index(kind::Downward, seq_encode({phi, f, wB.psi, wB.bound.code()}));
  return {psi, Ordinal::omega_power(k)};
}

// ---- jump ----

JumpTrace jump_transform_trace(const AlphaCEWitness& wA, unsigned k, const Nat& n, std::uint64_t horizon) {
  JumpTrace tr;
  horizon = std::min(horizon, kHorizonCap);
  auto nn = to_u64(n);
  if (!nn) return tr;
  tr.writes.push_back(normalized(1, jump_rank(k, *nn, {}), 0));

  // bound candidates i <= n: the enumerator's window plus registered hints
  std::set<Nat> cands;
  for (std::uint64_t i = 1; i <= std::min<std::uint64_t>(*nn, 15); ++i) cands.insert(i);
  for (const auto& h : witness_hints(n))
    if (h <= n && h != 0) cands.insert(h);
  std::multimap<std::uint64_t, std::uint64_t> bounds;  // stage -> value
  std::uint64_t m_max = 0;
  bool any = false;
  for (const auto& i : cands) {
    auto r = run(i, n, horizon);
    if (!r.halted()) continue;
    auto v = to_u64(r.value);
    if (!v || *v >= kMaxPositions) {
      tr.capped = true;
      continue;
    }
    bounds.emplace(r.steps, *v);
    m_max = std::max(m_max, *v);
    any = true;
  }
  if (!any) return tr;

  auto tl = timelines_for(wA, n, m_max + 1, horizon);
  std::set<std::uint64_t> stages;
  for (const auto& [s, v] : bounds) stages.insert(s);
  for (const auto& line : tl.lines)
    for (const auto& e : line) stages.insert(e.stage);

  std::uint64_t l = *nn;
  std::int64_t m = -1;
  std::optional<std::pair<std::uint64_t, std::vector<Ordinal>>> last;
  std::optional<HistoryEntry> pending;  // the value-1 write waiting for its stage
  for (std::uint64_t s : stages) {
    if (s > horizon) break;
    if (pending && pending->stage < s) {
      tr.writes.push_back(normalized(pending->stage, pending->ord, pending->value));
      pending.reset();
    }
    auto [lo, hi] = bounds.equal_range(s);
    std::int64_t top = m;
    for (auto it = lo; it != hi; ++it) top = std::max<std::int64_t>(top, static_cast<std::int64_t>(it->second));
    if (top > m) {
      m = top;
      if (l > 0) --l;
      ++tr.decrements;
      tr.levels.emplace_back(s, l);
      pending.reset();
    }
    if (m < 0) continue;
    auto count = static_cast<std::size_t>(m) + 1;
    tl.advance(count, s);
    if (!tl.defined(count)) continue;
    std::vector<Ordinal> alphas;
    for (std::size_t j = 0; j < count; ++j) alphas.push_back(tl.now[j]->ord);
    if (last && last->first == l && last->second == alphas) continue;
    last = std::make_pair(l, alphas);
    pending.reset();
    Ordinal r = jump_rank(k, l, alphas);
    tr.writes.push_back(normalized(s, r.plus_finite(2), 0));
    auto phi = run(n, n, horizon, snapshot_oracle(tl, static_cast<std::uint64_t>(m)));
    if (phi.halted()) pending = HistoryEntry{std::max(s, phi.steps), r.plus_finite(1), 1};
  }
  if (pending && pending->stage <= horizon)
    tr.writes.push_back(normalized(pending->stage, pending->ord, pending->value));
  return tr;
}

namespace {

std::vector<WitnessEvent> jump_events(const Nat& param, const Nat& n, std::uint64_t horizon) {
  auto ps = decode_params(param, 2);
  if (!ps) return {};
  auto k = to_u64((*ps)[1]);
  if (!k || *k == 0 || *k > 64) return {};
  AlphaCEWitness wA{(*ps)[0], Ordinal::omega_power(static_cast<unsigned>(*k))};
  return as_events(jump_transform_trace(wA, static_cast<unsigned>(*k), n, horizon).writes, horizon);
}

}  // namespace

AlphaCEWitness jump_transform(const AlphaCEWitness& wA, unsigned k) {
  if (k == 0) throw std::invalid_argument("jump transform needs a bound w^k with k >= 1");
  return {native_index(kind::JumpChi, seq_encode({wA.psi, k})), Ordinal::omega_power(k + 1)};
}

// ---- omega-c.e. and bounded reductions to K ----

SetView halting_approx(std::uint64_t s) {
  return SetView{"K_" + std::to_string(s), [s](const Nat& p) { return run(p, p, s).halted() ? 1 : 0; }};
}

Nat mind_change_query(const Nat& psi, const Nat& n, const Nat& j) {
  return native_index(kind::MindChanges, lin_pair(seq_encode({psi, n}), j));
}

namespace {

// Mind-change history of an omega-c.e. witness at n, deepened until it has
// more than `need` entries; charges the stage of entry `need`.
std::vector<HistoryEntry> history_with(const Nat& psi, const Nat& n, std::size_t need, Fuel& fuel) {
  std::uint64_t limit = std::min(fuel.available() + 1, kHorizonCap);
  for (std::uint64_t h = std::min<std::uint64_t>(64, limit);; h = std::min(2 * h, limit)) {
    auto evs = witness_events(psi, n, h, 1);
    std::erase_if(evs, [](const WitnessEvent& e) { return e.ord.degree() > 0; });
    auto hist = prefix_minima(evs);
    if (hist.size() > need) {
      if (hist[need].stage > 1) fuel.burn(hist[need].stage - 1);
      return hist;
    }
    if (h >= limit) fuel.exhaust();
  }
}

Nat nat_mind_changes(const Nat& param, const Nat&, Fuel& fuel, const Oracle&) {
  auto pj = lin_unpair(param);
  if (!pj) fuel.exhaust();
  auto ps = decode_params(pj->first, 2);
  auto j = to_u64(pj->second);
  if (!ps || !j) fuel.exhaust();
  history_with((*ps)[0], (*ps)[1], *j, fuel);
  return 0;
}

Nat nat_omega_bound(const Nat& psi, const Nat& n, Fuel& fuel, const Oracle&) {
  auto hist = history_with(psi, n, 0, fuel);
  std::uint64_t a0 = hist[0].ord.units();
  return a0 == 0 ? Nat(0) : mind_change_query(psi, n, a0);
}

// count the changes K confirms, then read the value after that many
Nat nat_omega_functional(const Nat& psi, const Nat& n, Fuel& fuel, const Oracle& oracle) {
  auto hist = history_with(psi, n, 0, fuel);
  std::uint64_t a0 = hist[0].ord.units();
  std::size_t changes = 0;
  for (std::uint64_t j = 1; j <= a0; ++j) {
    fuel.burn();
    if (oracle && oracle(mind_change_query(psi, n, j)) == 1) changes = j;
  }
  hist = history_with(psi, n, changes, fuel);
  return hist[changes].value;
}

// Runs the functional against K_s, moving s to the next stage at which a
// queried position enters K. The ordinal is (f(n) + 1) minus the queried
// positions seen entering K, so it drops whenever the output can change.
std::vector<WitnessEvent> bt_omega_events(const Nat& param, const Nat& n, std::uint64_t horizon) {
  auto ps = decode_params(param, 2);
  if (!ps) return {};
  const Nat &functional = (*ps)[0], &bound = (*ps)[1];
  auto fr = run(bound, n, horizon);
  if (!fr.halted()) return {};
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  std::uint64_t start = fr.value + 1 < kCap ? static_cast<std::uint64_t>(fr.value + 1) : kCap;

  std::map<Nat, std::uint64_t> halt_time;
  auto t_of = [&](const Nat& p) {
    auto it = halt_time.find(p);
    if (it != halt_time.end()) return it->second;
    auto r = run(p, p, horizon);
    return halt_time[p] = r.halted() ? r.steps : kNever;
  };
  std::set<Nat> seen;
  std::vector<WitnessEvent> out;
  std::optional<int> last;
  std::uint64_t s = std::max<std::uint64_t>(fr.steps, 1);
  while (s <= horizon) {
    std::vector<Nat> asked;
    Oracle ks = [&](const Nat& p) -> int {
      asked.push_back(p);
      return t_of(p) <= s ? 1 : 0;
    };
    auto r = run(functional, n, horizon, restrict_use(ks, fr.value));
    std::uint64_t next = kNever;
    for (const auto& p : asked) {
      seen.insert(p);
      if (t_of(p) > s) next = std::min(next, t_of(p));
    }
    if (r.halted()) {
      std::uint64_t at = std::max(s, r.steps);
      int v = r.value != 0 ? 1 : 0;
      if (at < next && at <= horizon && (!last || *last != v)) {
        std::uint64_t entered = 0;
        for (const auto& p : seen) entered += t_of(p) <= at;
        out.push_back({at, Ordinal::finite(start > entered ? start - entered : 0), v});
        last = v;
      }
    }
    if (next == kNever) break;
    s = next;
  }
  return out;
}

}  // namespace

BTWitness omega_reduction_from_witness(const AlphaCEWitness& w) {
  return {native_index(kind::OmegaFromBT, w.psi), native_index(kind::OmegaBTBound, w.psi)};
}

AlphaCEWitness omega_witness_from_reduction(const BTWitness& bt) {
  return {native_index(kind::BTToOmega, seq_encode({bt.functional, bt.bound})), Ordinal::omega_power(1)};
}

void install_ershov_transform_kinds() {
  register_witness_kind(kind::Downward, "downward", downward_events);
  register_witness_kind(kind::JumpChi, "jump-chi", jump_events);
  register_witness_kind(kind::BTToOmega, "bt-to-omega", bt_omega_events);
  register_native(kind::MindChanges, "mind-changes", nat_mind_changes);
  register_native(kind::OmegaFromBT, "omega-functional", nat_omega_functional);
  register_native(kind::OmegaBTBound, "omega-bound", nat_omega_bound);
}

}  // namespace bjump
