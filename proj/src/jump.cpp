#include "bjump/jump.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace bjump {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::B: return "b";
    case Variant::B0: return "b0";
    case Variant::B1: return "b1";
    case Variant::I: return "i";
    case Variant::Tt: return "tt";
    case Variant::Bk: return "bk";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  for (Variant v : {Variant::B, Variant::B0, Variant::B1, Variant::I, Variant::Tt, Variant::Bk})
    if (variant_name(v) == s) return v;
  throw std::invalid_argument("unknown jump variant '" + s + "' (b, b0, b1, i, tt, bk)");
}

// ---- hint registry ----

namespace {

std::shared_mutex hint_mutex;
std::map<Nat, std::vector<Nat>>& hint_table() {
  static std::map<Nat, std::vector<Nat>> t;
  return t;
}

}  // namespace

void register_witness_hint(const Nat& x, const Nat& i) {
  std::unique_lock lock(hint_mutex);
  auto& v = hint_table()[x];
  if (std::find(v.begin(), v.end(), i) == v.end()) v.push_back(i);
}

std::vector<Nat> witness_hints(const Nat& x) {
  std::shared_lock lock(hint_mutex);
  auto it = hint_table().find(x);
  return it == hint_table().end() ? std::vector<Nat>{} : it->second;
}

Reindex halving_reindex(unsigned shift) {
  return [shift](const Nat& n) { return Nat((n + shift) / 2); };
}

// ---- membership ----

nlohmann::json Membership::to_json() const {
  nlohmann::json j{{"x", nat_to_json(x)}, {"status", member ? "in" : "pending"}};
  if (member) {
    nlohmann::json w{{"bound", nat_to_json(bound)}, {"steps", steps}};
    w["i"] = witness ? nat_to_json(*witness) : nlohmann::json(nullptr);
    j["witness"] = w;
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

Oracle restricted(const JumpConfig& cfg, const Nat& bound) {
  Oracle base = as_oracle(cfg.base);
  if (cfg.restriction == Restriction::UseBounded) return restrict_use(base, bound);
  return [base, bound](const Nat& p) { return p <= bound ? base(p) : 0; };
}

std::vector<Nat> candidates(const Nat& x, const JumpConfig& cfg) {
  std::vector<Nat> out;
  Nat top = x < cfg.window ? x : Nat(cfg.window - 1);
  if (cfg.window > 0)
    for (Nat i = 0; i <= top; ++i) out.push_back(i);
  auto add = [&](const std::vector<Nat>& hs) {
    for (const auto& h : hs)
      if (h <= x) out.push_back(h);
  };
  if (cfg.hints) add(cfg.hints(x));
  add(witness_hints(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Phi_e(input) under the restriction to `bound`; fills m on success.
bool bounded_halts(const Nat& e, const Nat& input, const Nat& bound, const JumpConfig& cfg, Membership& m) {
  auto r = run(e, input, cfg.budget, restricted(cfg, bound));
  if (!r.halted()) return false;
  m.member = true;
  m.bound = bound;
  m.steps = r.steps;
  return true;
}

Membership member_b(const Nat& x, const JumpConfig& cfg) {
  Membership m;
  m.x = x;
  // (bound, index) for every candidate bound index that converges on x
  std::vector<std::pair<Nat, Nat>> bounds;
  for (const auto& i : candidates(x, cfg)) {
    auto r = run(i, x, cfg.budget);
    if (r.halted()) bounds.emplace_back(r.value, i);
  }
  if (bounds.empty()) return m;
  if (cfg.restriction == Restriction::UseBounded) {
    // a larger bound only answers more queries, so the largest one decides
    auto best = *std::max_element(bounds.begin(), bounds.end());
    if (bounded_halts(x, x, best.first, cfg, m)) m.witness = best.second;
    return m;
  }
  std::map<Nat, Nat> by_bound;
  for (auto& [b, i] : bounds) by_bound.emplace(b, i);
  for (auto& [b, i] : by_bound)
    if (bounded_halts(x, x, b, cfg, m)) {
      m.witness = i;
      return m;
    }
  return m;
}

Membership member_b0(const Nat& x, const JumpConfig& cfg) {
  Membership m;
  m.x = x;
  auto [e, i, j] = untriple(x);
  auto r = run(i, j, cfg.budget);
  if (r.halted() && bounded_halts(e, j, r.value, cfg, m)) m.witness = i;
  return m;
}

Membership member_b1(const Nat& x, const JumpConfig& cfg) {
  Membership m;
  m.x = x;
  Nat idx = cfg.reindex ? cfg.reindex(x) : x;
  auto r = run(idx, x, cfg.budget);
  if (r.halted() && bounded_halts(idx, x, r.value, cfg, m)) m.witness = idx;
  return m;
}

Membership member_i(const Nat& x, const JumpConfig& cfg) {
  Membership m;
  m.x = x;
  bounded_halts(x, x, x, cfg, m);
  return m;
}

Membership member_tt(const Nat& x, const JumpConfig& cfg, bool norm_bounded) {
  Membership m;
  m.x = x;
  auto r = run(x, x, cfg.budget);
  if (!r.halted()) return m;
  TTCondition c = TTCondition::decode(r.value);
  if (norm_bounded && c.positions.size() > cfg.tt_k) {
    m.note = "norm " + std::to_string(c.positions.size()) + " exceeds k";
    return m;
  }
  if (tt_eval(c, cfg.base)) {
    m.member = true;
    m.bound = r.value;
    m.steps = r.steps;
  }
  return m;
}

}  // namespace

Membership jump_member(Variant v, const Nat& x, const JumpConfig& cfg) {
  switch (v) {
    case Variant::B: return member_b(x, cfg);
    case Variant::B0: return member_b0(x, cfg);
    case Variant::B1: return member_b1(x, cfg);
    case Variant::I: return member_i(x, cfg);
    case Variant::Tt: return member_tt(x, cfg, false);
    case Variant::Bk: return member_tt(x, cfg, true);
  }
  Membership m;
  m.x = x;
  return m;
}

bool in_jump(Variant v, const Nat& x, const JumpConfig& cfg) { return jump_member(v, x, cfg).member; }

// ---- stage views ----

bool JumpStageView::contains(const Nat& x) const {
  return std::any_of(members.begin(), members.end(), [&](const Membership& m) { return m.x == x; });
}

nlohmann::json JumpStageView::to_json() const {
  auto mem = nlohmann::json::array();
  for (const auto& m : members) mem.push_back(m.to_json());
  auto pend = nlohmann::json::array();
  for (const auto& p : pending) pend.push_back(nat_to_json(p));
  return {{"base", base}, {"variant", variant_name(variant)}, {"stage", stage}, {"members", mem}, {"pending", pend}};
}

namespace {

JumpStageView assemble(Variant v, const JumpConfig& cfg, const std::vector<Nat>& domain,
                       std::vector<Membership>& rows) {
  JumpStageView view{cfg.base.name, v, cfg.budget, {}, {}};
  for (std::size_t k = 0; k < domain.size(); ++k) {
    if (rows[k].member) view.members.push_back(std::move(rows[k]));
    else view.pending.push_back(domain[k]);
  }
  return view;
}

}  // namespace

JumpStageView enum_jump(Variant v, const JumpConfig& cfg, const std::vector<Nat>& domain) {
  std::vector<Membership> rows(domain.size());
  const long n = static_cast<long>(domain.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) rows[k] = jump_member(v, domain[k], cfg);
  return assemble(v, cfg, domain, rows);
}

JumpStageView enum_jump_serial(Variant v, const JumpConfig& cfg, const std::vector<Nat>& domain) {
  std::vector<Membership> rows(domain.size());
  for (std::size_t k = 0; k < domain.size(); ++k) rows[k] = jump_member(v, domain[k], cfg);
  return assemble(v, cfg, domain, rows);
}

std::vector<Nat> range_domain(std::uint64_t n) {
  std::vector<Nat> d;
  d.reserve(n);
  for (std::uint64_t x = 0; x < n; ++x) d.emplace_back(x);
  return d;
}

// ---- matched budgets ----

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Agree: return "agree";
    case Outcome::Unresolved: return "unresolved";
    case Outcome::Disagree: return "disagree";
  }
  return "?";
}

std::size_t EquivReport::count(Outcome o) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [o](const EquivRow& r) { return r.outcome == o; }));
}

double EquivReport::unresolved_fraction() const {
  return rows.empty() ? 0.0 : static_cast<double>(count(Outcome::Unresolved)) / static_cast<double>(rows.size());
}

nlohmann::json EquivReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"x", nat_to_json(r.x)}, {"image", nat_to_json(r.image)}, {"lhs", r.lhs}, {"rhs", r.rhs},
                   {"outcome", outcome_name(r.outcome)}});
  return {{"rows", arr},
          {"agree", count(Outcome::Agree)},
          {"unresolved", count(Outcome::Unresolved)},
          {"disagree", count(Outcome::Disagree)}};
}

EquivReport check_equivalence(const MemberAt& lhs, const NatMap& map, const MemberAt& rhs,
                              const std::vector<Nat>& domain, std::uint64_t budget, std::uint64_t slack,
                              bool parallel) {
  EquivReport rep;
  rep.rows.resize(domain.size());
  const long n = static_cast<long>(domain.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long k = 0; k < n; ++k) {
    EquivRow& row = rep.rows[k];
    row.x = domain[k];
    row.image = map(row.x);
    row.lhs = lhs(row.x, budget);
    row.rhs = rhs(row.image, budget);
    if (row.lhs == row.rhs) continue;
    bool l2 = lhs(row.x, budget * slack), r2 = rhs(row.image, budget * slack);
    row.outcome = l2 == r2 ? Outcome::Unresolved : Outcome::Disagree;
  }
  return rep;
}

MemberAt jump_side(Variant v, JumpConfig cfg) {
  return [v, cfg](const Nat& x, std::uint64_t budget) {
    JumpConfig c = cfg;
    c.budget = budget;
    return in_jump(v, x, c);
  };
}

}  // namespace bjump
