#include "bjump/ershov.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>

namespace bjump {

std::uint64_t ordinal_weight(const Ordinal& o) {
  std::uint64_t w = o.degree();
  for (auto c : o.coefficients()) w += c;
  return w;
}

std::uint64_t convergence_stage(std::uint64_t steps, const Ordinal& o) {
  std::uint64_t s = std::max<std::uint64_t>(steps, 1);
  return o.degree() >= 1 ? std::max(s, o.units() + 2) : s;
}

bool WitnessState::strictly_decreasing() const {
  for (std::size_t k = 1; k < history.size(); ++k)
    if (!(history[k].ord < history[k - 1].ord)) return false;
  return true;
}

std::size_t WitnessState::flips() const {
  std::size_t f = 0;
  for (std::size_t k = 1; k < history.size(); ++k) f += history[k].value != history[k - 1].value;
  return f;
}

nlohmann::json WitnessState::to_json() const {
  auto h = nlohmann::json::array();
  for (const auto& e : history) h.push_back({{"stage", e.stage}, {"ordinal", e.ord.to_text()}, {"value", e.value}});
  nlohmann::json j{{"history", h}};
  if (current) {
    j["ordinal"] = current->to_text();
    j["value"] = value;
  } else {
    j["status"] = "unresolved";
  }
  return j;
}

// ---- providers and the event cache ----

namespace {

std::array<EventProvider, kNativeKinds>& providers() {
  static std::array<EventProvider, kNativeKinds> p{};
  return p;
}

struct CacheEntry {
  std::uint64_t horizon = 0;
  std::vector<WitnessEvent> events;
};

std::mutex cache_mutex;
std::map<std::tuple<Nat, Nat, unsigned>, CacheEntry>& event_cache() {
  static std::map<std::tuple<Nat, Nat, unsigned>, CacheEntry> c;
  return c;
}

// every ordinal below w^cap with weight <= w_max
void ordinals_by_weight(unsigned cap, std::uint64_t w_max, std::vector<Ordinal>& out) {
  std::vector<std::uint64_t> c(cap, 0);
  auto rec = [&](auto&& self, unsigned pos, std::uint64_t used) -> void {
    if (pos == cap) {
      Ordinal o = Ordinal::from_coefficients(c);
      if (ordinal_weight(o) <= w_max) out.push_back(o);
      return;
    }
    for (std::uint64_t v = 0; used + v <= w_max; ++v) {
      c[pos] = v;
      self(self, pos + 1, used + v);
    }
    c[pos] = 0;
  };
  rec(rec, 0, 0);
}

std::vector<WitnessEvent> scan_program(const Nat& psi, const Nat& n, std::uint64_t horizon, unsigned cap) {
  std::uint64_t w_max = cap <= 1 ? 4096 : cap == 2 ? 96 : 24;
  w_max = std::min(w_max, horizon);
  std::vector<Ordinal> cands;
  ordinals_by_weight(std::max(cap, 1u), w_max, cands);
  std::vector<WitnessEvent> out;
  for (const auto& o : cands) {
    if (o.units() + 2 > horizon) continue;
    auto r = run(psi, pair(n, o.code()), horizon);
    if (!r.halted()) continue;
    std::uint64_t t = std::max(convergence_stage(r.steps, o), ordinal_weight(o));
    if (t <= horizon) out.push_back({t, o, r.value != 0 ? 1 : 0});
  }
  return out;
}

std::optional<std::vector<WitnessEvent>> compute_events(const Nat& psi, const Nat& n, std::uint64_t horizon,
                                                        unsigned cap, bool may_scan) {
  Program p = decode(psi);
  std::vector<WitnessEvent> evs;
  if (auto* nc = std::get_if<NativeCall>(&p); nc != nullptr && providers()[nc->kind] != nullptr) {
    (void)native_name(0);  // make sure every module has registered
    evs = providers()[nc->kind](nc->param, n, horizon);
  } else {
    if (!may_scan) return std::nullopt;
    evs = scan_program(psi, n, horizon, cap);
  }
  std::sort(evs.begin(), evs.end(), [](const WitnessEvent& a, const WitnessEvent& b) {
    return std::tie(a.stage, a.ord) < std::tie(b.stage, b.ord);
  });
  return evs;
}

std::vector<WitnessEvent> upto(const std::vector<WitnessEvent>& evs, std::uint64_t horizon) {
  std::vector<WitnessEvent> out;
  for (const auto& e : evs) {
    if (e.stage > horizon) break;
    out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<WitnessEvent> witness_events(const Nat& psi, const Nat& n, std::uint64_t horizon, unsigned degree_cap) {
  (void)native_name(0);
  horizon = std::min(horizon, kHorizonCap);
  auto key = std::make_tuple(psi, n, degree_cap);
  std::uint64_t prev = 0;
  {
    std::lock_guard lock(cache_mutex);
    auto it = event_cache().find(key);
    if (it != event_cache().end()) {
      if (it->second.horizon >= horizon) return upto(it->second.events, horizon);
      prev = it->second.horizon;
    }
  }
  std::uint64_t h = std::min(std::max(horizon, 2 * prev), kHorizonCap);
  // witnesses whose programs read other witnesses nest here with fresh
  // budgets; past a small depth the inner ones count as silent, and nothing
  // computed under a cut is cached. Plain programs are scanned only at the
  // outermost level.
  thread_local unsigned depth = 0;
  thread_local bool cut = false;
  if (depth >= kMaxWitnessNesting) {
    cut = true;
    return {};
  }
  bool outer_cut = std::exchange(cut, false);
  ++depth;
  std::vector<WitnessEvent> evs;
  try {
    // a scan costs about h^2 runs, so only the outermost level scans
    auto got = compute_events(psi, n, h, degree_cap, depth == 1);
    if (got)
      evs = std::move(*got);
    else
      cut = true;
  } catch (...) {
    --depth;
    cut = outer_cut;
    throw;
  }
  --depth;
  bool was_cut = std::exchange(cut, outer_cut || cut);
  if (!was_cut) {
    std::lock_guard lock(cache_mutex);
    auto& slot = event_cache()[key];
    if (slot.horizon < h) slot = CacheEntry{h, evs};
  }
  return upto(evs, horizon);
}

std::vector<HistoryEntry> prefix_minima(const std::vector<WitnessEvent>& events) {
  std::vector<HistoryEntry> h;
  for (const auto& e : events)
    if (h.empty() || e.ord < h.back().ord) {
      if (!h.empty() && h.back().stage == e.stage) h.pop_back();
      h.push_back({e.stage, e.ord, e.value});
    }
  return h;
}

std::vector<WitnessEvent> events_below(const AlphaCEWitness& w, const Nat& n, std::uint64_t s) {
  auto evs = witness_events(w.psi, n, s, w.bound.degree() + (w.bound.degree() == 0 ? 1 : 0));
  std::erase_if(evs, [&](const WitnessEvent& e) { return !(e.ord < w.bound); });
  return evs;
}

WitnessState witness_state(const AlphaCEWitness& w, const Nat& n, std::uint64_t s) {
  WitnessState st;
  st.history = prefix_minima(events_below(w, n, s));
  if (!st.history.empty()) {
    st.current = st.history.back().ord;
    st.value = st.history.back().value;
  }
  return st;
}

std::optional<Estimate> eval_witness(const AlphaCEWitness& w, const Nat& n, std::uint64_t s) {
  auto st = witness_state(w, n, s);
  if (!st.current) return std::nullopt;
  return Estimate{*st.current, st.value};
}

std::optional<int> limit_value(const AlphaCEWitness& w, const Nat& n, std::uint64_t budget) {
  auto e = eval_witness(w, n, budget);
  if (!e) return std::nullopt;
  return e->value;
}

// ---- native form of provider witnesses ----

namespace {

Nat answer_from_events(std::uint32_t kind, const Nat& param, const Nat& input, Fuel& fuel) {
  auto [n, code] = unpair(input);
  Ordinal target;
  try {
    target = Ordinal::from_code(code);
  } catch (const std::out_of_range&) {
    fuel.exhaust();
  }
  std::uint64_t horizon = std::min(fuel.available() + 1, kHorizonCap);
  auto evs = providers()[kind](param, n, horizon);
  for (const auto& e : evs)
    if (e.ord == target && e.stage <= horizon) {
      if (e.stage > 1) fuel.burn(e.stage - 1);
      return e.value;
    }
  fuel.exhaust();
}

template <std::size_t K>
Nat witness_native(const Nat& param, const Nat& input, Fuel& fuel, const Oracle&) {
  return answer_from_events(static_cast<std::uint32_t>(K), param, input, fuel);
}

template <std::size_t... Ks>
constexpr std::array<NativeFn, sizeof...(Ks)> make_table(std::index_sequence<Ks...>) {
  return {&witness_native<Ks>...};
}

constexpr auto kWitnessNatives = make_table(std::make_index_sequence<kNativeKinds>{});

}  // namespace

void register_witness_kind(std::uint32_t kind, const char* name, EventProvider provider) {
  if (kind >= kNativeKinds) throw std::invalid_argument("witness kind out of range");
  providers()[kind] = provider;
  register_native(kind, name, kWitnessNatives[kind]);
}

// ---- scripts ----

namespace {

struct ScriptData {
  std::map<std::uint64_t, std::vector<WitnessEvent>> rows;
  std::optional<WitnessEvent> fallback;
};

std::mutex script_mutex;

std::shared_ptr<const ScriptData> script_data(const Nat& param) {
  static std::map<Nat, std::shared_ptr<const ScriptData>> cache;
  {
    std::lock_guard lock(script_mutex);
    if (auto it = cache.find(param); it != cache.end()) return it->second;
  }
  auto data = std::make_shared<ScriptData>();
  auto xs = seq_decode(param);
  if (xs && xs->size() >= 3 && (xs->size() - 3) % 4 == 0) {
    const auto& v = *xs;
    if (v[0] != 0) {
      Ordinal zero;
      data->fallback = WitnessEvent{convergence_stage(static_cast<std::uint64_t>(v[2]), zero), zero, v[1] != 0 ? 1 : 0};
    }
    for (std::size_t k = 3; k + 3 < v.size(); k += 4) {
      auto n = to_u64(v[k]);
      auto t = to_u64(v[k + 3]);
      if (!n || !t) continue;
      Ordinal o;
      try {
        o = Ordinal::from_code(v[k + 1]);
      } catch (const std::out_of_range&) {
        continue;
      }
      data->rows[*n].push_back({convergence_stage(*t, o), o, v[k + 2] != 0 ? 1 : 0});
    }
  }
  std::lock_guard lock(script_mutex);
  cache.emplace(param, data);
  return data;
}

std::vector<WitnessEvent> script_events(const Nat& param, const Nat& n, std::uint64_t horizon) {
  auto data = script_data(param);
  std::vector<WitnessEvent> out;
  auto nn = to_u64(n);
  auto it = nn ? data->rows.find(*nn) : data->rows.end();
  if (it != data->rows.end()) {
    for (const auto& e : it->second)
      if (e.stage <= horizon) out.push_back(e);
  } else if (data->fallback && data->fallback->stage <= horizon) {
    out.push_back(*data->fallback);
  }
  return out;
}

Ordinal ordinal_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Ordinal::parse(j.get<std::string>());
  if (j.is_array()) return Ordinal::from_coefficients(j.get<std::vector<std::uint64_t>>());
  if (j.is_number_unsigned() || j.is_number_integer()) return Ordinal::finite(j.get<std::uint64_t>());
  throw std::invalid_argument("ordinal must be a coefficient array or text");
}

}  // namespace

Ordinal Script::bound() const {
  unsigned d = 0;
  for (const auto& e : entries) d = std::max(d, e.ord.degree());
  return Ordinal::omega_power(d + 1);
}

nlohmann::json Script::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& e : entries)
    arr.push_back({{"n", e.n}, {"ordinal", e.ord.coefficients()}, {"value", e.value}, {"time", e.time}});
  nlohmann::json j{{"entries", arr}};
  if (fallback) j["default"] = {{"value", fallback->first}, {"time", fallback->second}};
  return j;
}

Script Script::from_json(const nlohmann::json& j) {
  Script s;
  const nlohmann::json* list = &j;
  if (j.is_object()) {
    if (!j.contains("entries")) throw std::invalid_argument("witness script object needs 'entries'");
    list = &j.at("entries");
    if (j.contains("default"))
      s.fallback = std::make_pair(j["default"].at("value").get<int>(), j["default"].value("time", std::uint64_t{1}));
  }
  if (!list->is_array()) throw std::invalid_argument("witness script entries must be a list");
  std::set<std::pair<std::uint64_t, Ordinal>> seen;
  for (const auto& e : *list) {
    ScriptEntry se{e.at("n").get<std::uint64_t>(), ordinal_from_json(e.at("ordinal")), e.at("value").get<int>(),
                   e.value("time", std::uint64_t{1})};
    if (se.value != 0 && se.value != 1) throw std::invalid_argument("witness values must be 0 or 1");
    if (!seen.insert({se.n, se.ord}).second)
      throw std::invalid_argument("witness script defines n=" + std::to_string(se.n) + " twice at one ordinal");
    s.entries.push_back(se);
  }
  return s;
}

Script Script::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open witness script " + path);
  return from_json(nlohmann::json::parse(in));
}

Nat script_index(const Script& s) {
  std::vector<Nat> v{s.fallback ? 1 : 0, s.fallback ? s.fallback->first : 0, s.fallback ? s.fallback->second : 0};
  for (const auto& e : s.entries) {
    v.push_back(e.n);
    v.push_back(e.ord.code());
    v.push_back(e.value);
    v.push_back(e.time);
  }
  return native_index(kind::Script, seq_encode(v));
}

AlphaCEWitness script_witness(const Script& s) { return {script_index(s), s.bound()}; }
AlphaCEWitness script_witness(const Script& s, const Ordinal& bound) { return {script_index(s), bound}; }

AlphaCEWitness constant_witness(int value) {
  Script s;
  s.fallback = std::make_pair(value ? 1 : 0, std::uint64_t{1});
  return script_witness(s);
}

void install_ershov_transform_kinds();
void install_erbase_kinds();

void install_ershov_natives() {
  register_witness_kind(kind::Script, "script", script_events);
  install_ershov_transform_kinds();
  install_erbase_kinds();
}

}  // namespace bjump
