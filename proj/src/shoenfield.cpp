#include "bjump/constructions.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>

namespace bjump {

void install_strinc_natives();
void install_ttsep_natives();

// ---- Theta_q ----

Nat theta_h(const std::vector<Nat>& h_before, const Nat& g_prev_plus_one, std::uint64_t row) {
  Nat h = row;
  for (const auto& x : h_before) h += x;
  // sum_{t=1}^{G} (t^2 - t)/2 = (G^3 - G)/6
  if (g_prev_plus_one >= 2) {
    Nat G = g_prev_plus_one - 1;
    h += (G * G * G - G) / 6;
  }
  return h;
}

namespace {

Nat slot_index(const Nat& cfg, const Nat& q, std::uint64_t n, const Nat& g1, const Nat& m) {
  return native_index(kind::ShoenSlot, lin_pair(seq_encode({cfg, q, n, g1}), g1 + m));
}

Nat gamma_index(const Nat& cfg, const Nat& q, std::uint64_t n, const Nat& above) {
  return native_index(kind::ShoenGamma, lin_pair(seq_encode({cfg, q, n}), above + 1));
}

struct ThetaState {
  std::vector<Nat> g, h;
  Nat g1(std::uint64_t n) const { return n == 0 ? Nat(0) : g[n - 1] + 1; }
};

// Slots run k(n,0..h(n)), h(n)+1 of them rather than h(n): the
// first definition of an n-marker also takes a slot.
void theta_extend(ThetaState& st, const Nat& cfg, const Nat& q, std::uint64_t row) {
  std::uint64_t n = st.g.size();
  Nat g1 = st.g1(n);
  Nat h = theta_h(st.h, g1, row);
  Nat last = slot_index(cfg, q, n, g1, h);
  st.h.push_back(h);
  st.g.push_back(gamma_index(cfg, q, n, last));
}

// ---- registry the controlled programs read ----

struct Registry {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>> slots;  // (n,r) -> (stage, value)
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> decls;  // n -> (stage, marker)
};

std::mutex registry_mutex;
std::map<Nat, std::shared_ptr<Registry>>& registries() {
  static std::map<Nat, std::shared_ptr<Registry>> r;
  return r;
}

std::shared_ptr<Registry> fresh_registry(const Nat& cfg) {
  std::lock_guard lock(registry_mutex);
  auto r = std::make_shared<Registry>();
  registries()[cfg] = r;
  return r;
}

std::shared_ptr<const Registry> find_registry(const Nat& cfg) {
  std::lock_guard lock(registry_mutex);
  auto it = registries().find(cfg);
  return it == registries().end() ? nullptr : it->second;
}

// i_t for the witness named in cfg, searched with the fuel at hand
std::uint64_t native_row(const Nat& psi, std::uint64_t t, Fuel& fuel) {
  std::uint64_t limit = std::min(fuel.available() + 1, kHorizonCap);
  for (std::uint64_t h = std::min<std::uint64_t>(64, limit);; h = std::min(2 * h, limit)) {
    fuel.burn();
    for (const auto& e : witness_events(psi, t, h, 2))
      if (e.ord.below_omega_power(2)) return e.ord.coefficient(1);
    if (h >= limit) fuel.exhaust();
  }
}

Nat native_g(const Nat& cfg, const Nat& q, std::uint64_t n, Fuel& fuel) {
  auto c = seq_decode(cfg);
  if (!c || c->empty()) fuel.exhaust();
  ThetaState st;
  for (std::uint64_t t = 0; t <= n; ++t) theta_extend(st, cfg, q, native_row((*c)[0], t, fuel));
  return st.g[n];
}

Nat nat_theta_g(const Nat& p, const Nat& x, Fuel& fuel, const Oracle&) {
  auto ps = seq_decode(p);
  auto n = to_u64(x);
  if (!ps || ps->size() != 2 || !n || *n > 4096) fuel.exhaust();
  return native_g((*ps)[0], (*ps)[1], *n, fuel);
}

Nat nat_theta_w(const Nat& cfg, const Nat& q, Fuel&, const Oracle&) {
  return native_index(kind::ThetaG, seq_encode({cfg, q}));
}

Nat nat_slot(const Nat& p, const Nat& y, Fuel& fuel, const Oracle&) {
  auto lp = lin_unpair(p);
  if (!lp) fuel.exhaust();
  auto ps = seq_decode(lp->first);
  if (!ps || ps->size() != 4 || lp->second < (*ps)[3]) fuel.exhaust();
  auto n = to_u64((*ps)[2]);
  auto m = to_u64(lp->second - (*ps)[3]);
  if (!n || !m) fuel.exhaust();
  if (y != native_g((*ps)[0], (*ps)[1], *n, fuel)) fuel.exhaust();
  auto reg = find_registry((*ps)[0]);
  if (!reg) fuel.exhaust();
  auto it = reg->slots.find({*n, *m});
  if (it == reg->slots.end()) fuel.exhaust();
  auto [stage, value] = it->second;
  if (stage > fuel.used()) fuel.burn(stage - fuel.used());
  return value;
}

// halts iff some declared n-marker reads 1
Nat nat_gamma(const Nat& p, const Nat& y, Fuel& fuel, const Oracle& oracle) {
  auto lp = lin_unpair(p);
  if (!lp) fuel.exhaust();
  auto ps = seq_decode(lp->first);
  if (!ps || ps->size() != 3) fuel.exhaust();
  auto n = to_u64((*ps)[2]);
  if (!n) fuel.exhaust();
  if (y != native_g((*ps)[0], (*ps)[1], *n, fuel)) fuel.exhaust();
  auto reg = find_registry((*ps)[0]);
  if (!reg) fuel.exhaust();
  auto it = reg->decls.find(*n);
  if (it != reg->decls.end())
    for (auto [stage, x] : it->second) {
      if (stage > fuel.used()) fuel.burn(stage - fuel.used());
      if (oracle && oracle(x) == 1) return 0;
    }
  fuel.exhaust();
}

}  // namespace

void install_construction_natives() {
  register_native(kind::ThetaG, "theta-g", nat_theta_g);
  register_native(kind::ThetaW, "theta-w", nat_theta_w);
  register_native(kind::ShoenSlot, "shoenfield-slot", nat_slot);
  register_native(kind::ShoenGamma, "shoenfield-gamma", nat_gamma);
  install_strinc_natives();
  install_ttsep_natives();
}

Nat ControlledIndexPlan::k(std::uint64_t n, const Nat& m) const {
  return slot_index(config, fixed_point, n, n == 0 ? Nat(0) : g.at(n - 1) + 1, m);
}

bool ControlledIndexPlan::chain_ok(std::uint64_t n) const {
  Nat prev = n == 0 ? Nat(-1) : g.at(n - 1);
  std::vector<Nat> ms = {0, 1, 2};
  for (Nat back : {Nat(2), Nat(1), Nat(0)})
    if (h.at(n) >= back) ms.push_back(h.at(n) - back);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  for (const auto& m : ms) {
    if (m > h.at(n)) continue;
    Nat km = k(n, m);
    if (!(km > prev)) return false;
    prev = km;
  }
  return g.at(n) > prev;
}

namespace {

// decimal printing is quadratic, and these run to millions of bits
nlohmann::json nat_digest(const Nat& x) {
  auto bits = bit_length(x);
  if (bits <= 256) return to_string(x);
  std::uint64_t low = static_cast<std::uint64_t>(x & Nat(std::numeric_limits<std::uint64_t>::max()));
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(low));
  return {{"bits", bits}, {"low64", hex}};
}

}  // namespace

nlohmann::json ControlledIndexPlan::to_json() const {
  nlohmann::json j{{"fixed_point", nat_digest(fixed_point)}, {"rows", rows}};
  auto gs = nlohmann::json::array(), hs = nlohmann::json::array();
  for (const auto& x : g) gs.push_back(nat_digest(x));
  for (const auto& x : h) hs.push_back(nat_digest(x));
  j["g"] = gs;
  j["h"] = hs;
  return j;
}

ControlledIndexPlan build_theta_plan(const std::vector<std::uint64_t>& rows, const Nat& q, const Nat& config) {
  ControlledIndexPlan plan;
  plan.config = config;
  plan.fixed_point = q;
  plan.rows = rows;
  ThetaState st;
  for (auto r : rows) theta_extend(st, config, q, r);
  plan.g = std::move(st.g);
  plan.h = std::move(st.h);
  return plan;
}

// ---- the construction ----

namespace {

struct LiveMarker {
  std::uint64_t i = 0, x = 0;
  std::size_t record = 0;  // index into markers
};

struct ShoenRun {
  ShoenfieldResult& out;
  std::map<std::uint64_t, LiveMarker> live;  // n -> its defined marker
  nlohmann::json events = nlohmann::json::array();

  void flip(std::uint64_t x, bool member) {
    bool was = out.a.count(x) > 0;
    if (was == member) return;
    if (member)
      out.a.insert(x);
    else
      out.a.erase(x);
    ++out.changes[x];
  }

  void extract(std::uint64_t n, std::uint64_t s) {
    auto it = live.find(n);
    if (it == live.end()) return;
    auto [i, x, rec] = it->second;
    flip(x, false);
    out.markers[rec].value.reset();
    out.markers[rec].history.push_back({s, std::nullopt, "extracted"});
    events.push_back({{"type", "extract"}, {"n", n}, {"i", i}, {"x", x}});
    live.erase(it);
  }

  void extract_above(std::uint64_t n, std::uint64_t s) {
    std::vector<std::uint64_t> doomed;
    for (const auto& [m, lm] : live)
      if (m > n) doomed.push_back(m);
    for (auto m : doomed) extract(m, s);
  }
};

}  // namespace

ShoenfieldResult shoenfield_inversion(const Script& wB, std::uint64_t n_points, std::uint64_t stages,
                                      std::uint64_t window) {
  if (n_points == 0 || stages == 0) throw ShoenfieldError("need at least one point and one stage");
  if (!wB.bound().below_omega_power(3) || wB.bound().degree() > 2)
    throw ShoenfieldError("witness bound must be at most w^2");
  AlphaCEWitness w = script_witness(wB, Ordinal::omega_power(2));
  ShoenfieldResult out;
  const Nat cfg = seq_encode({w.psi, n_points, stages});

  // rows of the first convergence, which Theta reads too
  for (std::uint64_t n = 0; n < n_points; ++n) {
    auto ev = witness_events(w.psi, n, std::min(stages, kHorizonCap), 2);
    if (ev.empty()) throw ShoenfieldError("witness unresolved below N at n=" + std::to_string(n));
    out.least_rows.push_back(ev.front().ord.coefficient(1));
  }
  std::vector<std::uint64_t> first_rows = out.least_rows;

  auto reg = fresh_registry(cfg);
  const Nat q = fixed_point(native_index(kind::ThetaW, cfg));
  out.plan = build_theta_plan(first_rows, q, cfg);
  for (std::uint64_t n = 0; n < std::min<std::uint64_t>(n_points, 4); ++n) {
    auto r = run(q, n, 1'000'000);
    if (!r.halted() || r.value != out.plan.g[n])
      throw ShoenfieldError("fixed point disagrees with the plan at " + std::to_string(n));
  }

  // bounds phi_e(g(k)) that appear during the run, e in the window
  out.window = window;
  std::map<std::uint64_t, std::uint64_t> monitor;  // stage -> least k
  for (std::uint64_t k = 0; k < n_points; ++k)
    for (std::uint64_t e = 1; e < window; ++e) {
      auto r = run(e, out.plan.g[k], stages);
      if (!r.halted()) continue;
      auto st = std::max<std::uint64_t>(r.steps, 1);
      auto [it, fresh] = monitor.emplace(st, k);
      if (!fresh) it->second = std::min(it->second, k);
    }

  out.trace.header = {{"schema", kTraceSchema},
                      {"construction", "shoenfield"},
                      {"params", {{"witness", wB.to_json()}, {"N", n_points}, {"stages", stages}, {"window", window}}}};
  out.definitions.assign(n_points, 0);
  std::vector<std::set<std::vector<std::uint64_t>>> patterns(n_points);
  std::vector<std::vector<std::uint64_t>> declared(n_points);
  ShoenRun st{out, {}, nlohmann::json::array()};

  for (std::uint64_t s = 1; s <= stages; ++s) {
    st.events = nlohmann::json::array();
    if (auto m = monitor.find(s); m != monitor.end()) {
      st.events.push_back({{"type", "step1"}, {"k", m->second}});
      st.extract_above(m->second, s);
    }

    for (std::uint64_t n = 0; n < std::min(n_points, s + 1); ++n) {
      auto est = eval_witness(w, n, s);
      if (!est) continue;
      std::uint64_t i = est->ord.coefficient(1);
      auto live = st.live.find(n);
      bool have = live != st.live.end() && live->second.i == i;
      bool member = est->value == 1;
      if (have && (out.a.count(live->second.x) > 0) == member) continue;

      if (!have) {
        std::uint64_t r = out.definitions[n];
        if (Nat(r) > out.plan.h[n])
          throw ShoenfieldError("n=" + std::to_string(n) + " needs more marker slots than h(n)");
        st.extract_above(n, s);
        st.extract(n, s);
        std::uint64_t x = s;
        reg->slots[{n, r}] = {s, x};
        reg->decls[n].push_back({s, x});
        declared[n].push_back(x);
        register_witness_hint(out.plan.g[n], out.plan.k(n, r));
        ++out.definitions[n];
        out.markers.push_back({n, i, x, {{s, x, "defined"}}});
        st.live[n] = {i, x, out.markers.size() - 1};
        st.events.push_back({{"type", "define"}, {"n", n}, {"i", i}, {"x", x}, {"slot", r}});
      }
      std::uint64_t x = st.live[n].x;
      if ((out.a.count(x) > 0) != member) {
        st.flip(x, member);
        st.events.push_back({{"type", "set"}, {"x", x}, {"member", member}});
      }
      break;  // one requirement acts per stage
    }

    for (std::uint64_t n = 0; n < n_points; ++n) {
      std::vector<std::uint64_t> seen;
      for (auto x : declared[n])
        if (out.a.count(x)) seen.push_back(x);
      patterns[n].insert(seen);
    }
    if (!st.events.empty()) out.trace.records.push_back({{"stage", s}, {"events", st.events}});
  }

  Nat h_total = 0;
  for (std::uint64_t n = 0; n < n_points; ++n) {
    auto lim = eval_witness(w, n, stages);
    out.b_limit.push_back(lim ? lim->value : 0);
    out.least_rows[n] = lim ? lim->ord.coefficient(1) : first_rows[n];
    out.oracle_patterns.push_back(patterns[n].size());
    h_total += out.plan.h[n];
  }
  out.trace.records.push_back({{"summary",
                                {{"plan", out.plan.to_json()},
                                 {"definitions", out.definitions},
                                 {"oracle_patterns", out.oracle_patterns},
                                 {"h_total", nat_digest(h_total)}}}});
  return out;
}

}  // namespace bjump
