#include "bjump/constructions.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace bjump {

namespace {

constexpr std::uint64_t kMaxBoundScan = 4096;      // K is watched up to here
constexpr std::uint64_t kMaxRestraint = 1u << 16;  // restraints and L are capped here

struct Declarations {
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> bound;  // j -> (stage, L)
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::vector<bool>>>> strings;
};

std::mutex decl_mutex;
std::map<Nat, std::shared_ptr<Declarations>>& declarations() {
  static std::map<Nat, std::shared_ptr<Declarations>> d;
  return d;
}

std::shared_ptr<Declarations> fresh_declarations(const Nat& cfg) {
  std::lock_guard lock(decl_mutex);
  auto d = std::make_shared<Declarations>();
  declarations()[cfg] = d;
  return d;
}

std::shared_ptr<const Declarations> find_declarations(const Nat& cfg) {
  std::lock_guard lock(decl_mutex);
  auto it = declarations().find(cfg);
  return it == declarations().end() ? nullptr : it->second;
}

Nat bound_index(const Nat& cfg, std::uint64_t j) { return native_index(kind::TTSepBound, lin_pair(cfg, j)); }

Nat marker_index(const Nat& cfg, std::uint64_t j) {
  return pad(native_index(kind::TTSepFunctional, lin_pair(cfg, j)), bound_index(cfg, j));
}

struct Unpacked {
  Nat cfg;
  std::uint64_t j = 0;
  std::shared_ptr<const Declarations> decl;
};

Unpacked unpack(const Nat& p, const Nat& y, Fuel& fuel) {
  auto lp = lin_unpair(p);
  if (!lp) fuel.exhaust();
  auto j = to_u64(lp->second);
  if (!j || y != marker_index(lp->first, *j)) fuel.exhaust();
  auto d = find_declarations(lp->first);
  if (!d) fuel.exhaust();
  return {lp->first, *j, d};
}

void wait_until(Fuel& fuel, std::uint64_t stage) {
  if (stage > fuel.used()) fuel.burn(stage - fuel.used());
}

// phi_{c_j}(e_j) = L once declared
Nat nat_bound(const Nat& p, const Nat& y, Fuel& fuel, const Oracle&) {
  auto u = unpack(p, y, fuel);
  auto it = u.decl->bound.find(u.j);
  if (it == u.decl->bound.end()) fuel.exhaust();
  wait_until(fuel, it->second.first);
  return it->second.second;
}

// Phi_{e_j}^C(e_j) halts iff C below L is one of the declared strings
Nat nat_functional(const Nat& p, const Nat& y, Fuel& fuel, const Oracle& oracle) {
  auto u = unpack(p, y, fuel);
  auto it = u.decl->strings.find(u.j);
  if (it == u.decl->strings.end()) fuel.exhaust();
  for (const auto& [stage, sigma] : it->second) {
    wait_until(fuel, stage);
    bool match = true;
    for (std::size_t x = 0; x < sigma.size() && match; ++x) {
      fuel.burn();
      int bit = oracle ? oracle(Nat(x)) : 0;
      match = (bit == 1) == sigma[x];
    }
    if (match) return 0;
  }
  fuel.exhaust();
}

}  // namespace

void install_ttsep_natives() {
  register_native(kind::TTSepBound, "ttsep-bound", nat_bound);
  register_native(kind::TTSepFunctional, "ttsep-functional", nat_functional);
}

namespace {

struct KWatch {
  std::uint64_t stages;
  std::map<Nat, std::optional<std::pair<std::uint64_t, Nat>>> cache;  // y -> (steps, value)

  const std::optional<std::pair<std::uint64_t, Nat>>& at(const Nat& y) {
    auto it = cache.find(y);
    if (it != cache.end()) return it->second;
    auto r = run(y, y, stages);
    std::optional<std::pair<std::uint64_t, Nat>> v;
    if (r.halted()) v = std::make_pair(std::max<std::uint64_t>(r.steps, 1), r.value);
    return cache.emplace(y, v).first->second;
  }
  bool halted_by(const Nat& y, std::uint64_t s) {
    const auto& v = at(y);
    return v && v->first <= s;
  }
};

std::uint64_t cap_u64(const Nat& x) {
  auto v = to_u64(x);
  return v && *v < kMaxRestraint ? *v : kMaxRestraint;
}

// 1 + largest position read by the condition phi_y(y)
std::uint64_t condition_reach(const Nat& code) {
  std::uint64_t r = 0;
  auto c = TTCondition::decode(code);
  for (const auto& p : c.positions) r = std::max(r, std::min(cap_u64(p) + 1, kMaxRestraint));
  return r;
}

struct Req {
  std::optional<std::uint64_t> j;  // x_n = e_j
  std::optional<std::pair<std::uint64_t, Nat>> bound;  // phi_n(x_n): (steps, value)
};

}  // namespace

TTSepResult tt_separation(std::uint64_t n_req, std::uint64_t stages, std::vector<Adversary> adversaries) {
  TTSepResult out;
  std::vector<Nat> cfg_parts = {n_req, stages};
  auto adv_json = nlohmann::json::array();
  for (const auto& a : adversaries) {
    cfg_parts.push_back(a.functional);
    cfg_parts.push_back(a.bound);
    adv_json.push_back({{"functional", to_string(a.functional)}, {"bound", to_string(a.bound)}});
  }
  const Nat cfg = seq_encode(cfg_parts);
  for (std::uint64_t n = 0; n < n_req; ++n) {
    if (n < adversaries.size()) {
      out.adversaries.push_back(adversaries[n]);
    } else {
      auto [f, b] = unpair(n);
      out.adversaries.push_back({f, b});
    }
  }
  out.trace.header = {{"schema", kTraceSchema},
                      {"construction", "ttsep"},
                      {"params", {{"N", n_req}, {"stages", stages}, {"adversaries", adv_json}}}};
  out.attention.resize(n_req);
  out.markers.assign(n_req, std::nullopt);

  auto decl = fresh_declarations(cfg);
  KWatch k{stages, {}};
  std::set<std::uint64_t> a;
  std::vector<Req> req(n_req);
  std::uint64_t next_j = 0;
  Nat max_bound_seen = 0;

  auto bound_at = [&](std::uint64_t n, std::uint64_t s) -> std::optional<Nat> {
    const auto& b = req[n].bound;
    if (b && b->first <= s) return b->second;
    return std::nullopt;
  };
  // r(m) for m = 0..n_req: restraint from the requirements above m
  auto restraints = [&](std::uint64_t s) {
    std::vector<std::uint64_t> r(n_req + 1, 0);
    for (std::uint64_t l = 0; l < n_req; ++l) {
      std::uint64_t here = 0;
      if (req[l].j)
        if (auto b = bound_at(l, s)) {
          max_bound_seen = std::max(max_bound_seen, *b);
          // the small indices, plus whatever the adversaries have asked about
          std::uint64_t top = std::min(cap_u64(*b), kMaxBoundScan);
          for (std::uint64_t y = 0; y <= top; ++y) k.at(y);
          for (const auto& [y, v] : k.cache)
            if (y <= *b && v && v->first <= s) here = std::max(here, condition_reach(v->second));
        }
      r[l + 1] = std::max(r[l], here);
    }
    return r;
  };
  auto jump_now = [&](std::uint64_t j) {
    auto it = decl->strings.find(j);
    if (it == decl->strings.end()) return 0;
    for (const auto& [stage, sigma] : it->second) {
      bool match = true;
      for (std::size_t x = 0; x < sigma.size() && match; ++x) match = (a.count(x) > 0) == sigma[x];
      if (match) return 1;
    }
    return 0;
  };
  auto undefine_from = [&](std::uint64_t m0, nlohmann::json& events) {
    for (std::uint64_t m = m0; m < n_req; ++m)
      if (req[m].j) {
        events.push_back({{"type", "undefine"}, {"n", m}, {"j", *req[m].j}});
        req[m] = {};
      }
  };

  std::vector<std::uint64_t> prev = restraints(0);
  for (std::uint64_t s = 1; s <= stages; ++s) {
    auto events = nlohmann::json::array();
    auto r = restraints(s);
    for (std::uint64_t m = 0; m < n_req; ++m)
      if (r[m] > prev[m]) {
        undefine_from(m, events);
        break;
      }

    // A_tt at stage s
    Oracle att = [&](const Nat& y) -> int {
      if (!k.halted_by(y, s)) return 0;
      auto cond = TTCondition::decode(k.at(y)->second);
      Nat row = 0;
      for (std::size_t i = 0; i < cond.positions.size(); ++i) {
        auto pv = to_u64(cond.positions[i]);
        if (pv && a.count(*pv)) row += Nat(1) << i;
      }
      return cond.row_value(row);
    };

    bool acted = false;
    for (std::uint64_t n = 0; n < n_req && !acted; ++n) {
      if (!req[n].j) continue;
      auto b = bound_at(n, s);
      if (!b) continue;
      Nat x = marker_index(cfg, *req[n].j);
      auto adv = run(out.adversaries[n].functional, x, s, restrict_use(att, *b));
      if (!adv.halted() || adv.value > 1) continue;
      int jb = jump_now(*req[n].j);
      if (int(adv.value) != jb) continue;

      std::uint64_t j = *req[n].j;
      // own restraint included, so the enumeration never disturbs A_tt below the bound
      std::uint64_t room = r[n + 1];
      std::uint64_t top = a.empty() ? 0 : *a.rbegin() + 1;
      std::uint64_t L = decl->bound.count(j) ? decl->bound[j].second
                                             : std::min(room + top + cap_u64(*b) + 1, kMaxRestraint);
      std::uint64_t y = room;
      while (a.count(y)) ++y;
      if (jb == 1 && y >= L) continue;  // nothing left to enumerate below L

      acted = true;
      undefine_from(n + 1, events);
      if (!decl->bound.count(j)) {
        decl->bound[j] = {s, L};
        register_witness_hint(x, bound_index(cfg, j));
        events.push_back({{"type", "bound"}, {"n", n}, {"j", j}, {"L", L}});
      }
      if (jb == 0) {
        std::vector<bool> sigma(L);
        for (std::uint64_t p = 0; p < L; ++p) sigma[p] = a.count(p) > 0;
        decl->strings[j].push_back({s, std::move(sigma)});
        out.attention[n].push_back({s, x, 'A'});
        events.push_back({{"type", "declare"}, {"n", n}, {"j", j}});
      } else {
        out.attention[n].push_back({s, x, 'B'});
        a.insert(y);
        out.a_enumeration.push_back(y);
        events.push_back({{"type", "enumerate"}, {"n", n}, {"x", y}});
      }
    }

    if (!acted)
      for (std::uint64_t n = 0; n < n_req; ++n)
        if (!req[n].j) {
          std::uint64_t j = next_j++;
          Nat x = marker_index(cfg, j);
          auto br = run(out.adversaries[n].bound, x, stages);
          req[n].j = j;
          if (br.halted()) req[n].bound = std::make_pair(std::max<std::uint64_t>(br.steps, 1), br.value);
          events.push_back({{"type", "define"}, {"n", n}, {"j", j}});
          break;
        }

    prev = restraints(s);
    if (!events.empty()) {
      std::vector<std::uint64_t> shown(prev.begin(), prev.end() - 1);
      out.trace.records.push_back({{"stage", s}, {"restraint", shown}, {"events", events}});
    }
  }

  for (std::uint64_t n = 0; n < n_req; ++n)
    if (req[n].j) out.markers[n] = marker_index(cfg, *req[n].j);
  for (const auto& [y, v] : k.cache)
    if (v && y <= max_bound_seen) out.k_events.push_back({v->first, y});
  std::sort(out.k_events.begin(), out.k_events.end(),
            [](const KEvent& l, const KEvent& r) { return l.stage < r.stage || (l.stage == r.stage && l.y < r.y); });
  out.trace.records.push_back({{"summary", {{"enumerated", out.a_enumeration}, {"configuration", to_string(cfg)}}}});
  return out;
}

namespace {

SetView final_set(const TTSepResult& r) {
  std::vector<Nat> xs(r.a_enumeration.begin(), r.a_enumeration.end());
  return from_list(xs, "A");
}

std::optional<Nat> final_bound(const TTSepResult& r, std::uint64_t n, std::uint64_t budget) {
  if (n >= r.markers.size() || !r.markers[n]) return std::nullopt;
  auto b = run(r.adversaries[n].bound, *r.markers[n], budget);
  if (!b.halted()) return std::nullopt;
  return b.value;
}

}  // namespace

RequirementCheck check_requirement(const TTSepResult& r, std::uint64_t n, std::uint64_t budget) {
  RequirementCheck c;
  auto b = final_bound(r, n, budget);
  if (!b) return c;
  c.bound_resolved = true;
  const Nat x = *r.markers[n];
  SetView a = final_set(r);
  Oracle att = [&](const Nat& y) -> int {
    auto k = run(y, y, budget);
    if (!k.halted()) return 0;
    return tt_eval(TTCondition::decode(k.value), a);
  };
  auto adv = run(r.adversaries[n].functional, x, budget, restrict_use(att, *b));
  if (adv.halted() && adv.value <= 1) c.adversary = int(adv.value);
  JumpConfig cfg;
  cfg.base = a;
  cfg.budget = budget;
  c.jump = in_jump(Variant::B, x, cfg) ? 1 : 0;
  return c;
}

std::vector<std::string> check_double_actions(const TTSepResult& r, std::uint64_t budget) {
  std::vector<std::string> bad;
  for (std::uint64_t n = 0; n < r.attention.size(); ++n) {
    std::map<Nat, std::vector<std::uint64_t>> by_marker;
    for (const auto& at : r.attention[n]) by_marker[at.x].push_back(at.stage);
    for (const auto& [x, stages] : by_marker) {
      auto b = run(r.adversaries[n].bound, x, budget);
      for (std::size_t k = 0; k + 1 < stages.size(); ++k) {
        bool seen = false;
        for (const auto& e : r.k_events)
          if (b.halted() && e.y <= b.value && e.stage > stages[k] && e.stage <= stages[k + 1]) {
            seen = true;
            break;
          }
        if (!seen)
          bad.push_back("R" + std::to_string(n) + " acted at stages " + std::to_string(stages[k]) + " and " +
                        std::to_string(stages[k + 1]) + " with no halting below its bound in between");
      }
    }
  }
  return bad;
}

}  // namespace bjump
