#include "bjump/constructions.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

namespace bjump {

std::string refutation_name(Refutation r) {
  switch (r) {
    case Refutation::ValueContradiction: return "value-contradiction";
    case Refutation::MembershipContradiction: return "membership-contradiction";
    case Refutation::BoundedDivergence: return "bounded-divergence";
    case Refutation::BudgetUnresolved: return "budget-unresolved";
  }
  return "?";
}

nlohmann::json StrincReport::to_json() const {
  nlohmann::json j{{"gamma", to_string(gamma)},   {"g", to_string(g)},
                   {"m", to_string(m)},           {"bound", to_string(bound)},
                   {"m_in_jump", m_in_jump},      {"self_halts", self_halts},
                   {"branch", refutation_name(branch)}};
  j["claim"] = claim ? nlohmann::json(to_string(*claim)) : nlohmann::json(nullptr);
  return j;
}

namespace {

// Phi_{f(e)}: 0 off the diagonal; on it, 0 if gamma says 0 and
// Phi_e(e) + 1 if gamma says anything else
Nat nat_strinc_body(const Nat& p, const Nat& x, Fuel& fuel, const Oracle& oracle) {
  auto ps = seq_decode(p);
  if (!ps || ps->size() != 2) fuel.exhaust();
  const Nat &gamma = (*ps)[0], &e = (*ps)[1];
  if (x != e) return 0;
  if (evaluate(gamma, e, fuel, oracle) == 0) return 0;
  return evaluate(e, e, fuel, oracle) + 1;
}

Nat nat_strinc_f(const Nat& gamma, const Nat& e, Fuel&, const Oracle&) {
  return native_index(kind::StrincBody, seq_encode({gamma, e}));
}

}  // namespace

void install_strinc_natives() {
  register_native(kind::StrincBody, "strinc-body", nat_strinc_body);
  register_native(kind::StrincF, "strinc-f", nat_strinc_f);
}

StrincReport diagonalize_strinc(const Nat& gamma, const Nat& g, const SetView& a, std::uint64_t budget,
                                std::uint64_t probes) {
  for (std::uint64_t p = 0; p < probes; ++p)
    if (!run(g, p, budget).halted())
      throw NonTotalG("use bound does not halt on " + std::to_string(p) + " within " + std::to_string(budget) +
                      " steps");
  StrincReport r;
  r.gamma = gamma;
  r.g = g;
  r.transformer = native_index(kind::StrincF, gamma);
  r.m = fixed_point_set(r.transformer, 1, g)[0];
  auto gm = run(g, r.m, budget);
  if (!gm.halted()) throw NonTotalG("use bound does not halt on the fixed point");
  r.bound = gm.value;
  register_witness_hint(r.m, g);

  Oracle ao = as_oracle(a);
  auto claim = run(gamma, r.m, budget, restrict_use(ao, r.bound));
  if (claim.halted()) r.claim = claim.value;
  r.self_halts = run(r.m, r.m, budget, ao).halted();
  JumpConfig cfg;
  cfg.base = a;
  cfg.budget = budget;
  r.m_in_jump = in_jump(Variant::B, r.m, cfg);

  if (!r.claim)
    r.branch = Refutation::BoundedDivergence;
  else if (*r.claim != 0)
    r.branch = Refutation::ValueContradiction;
  else
    r.branch = r.m_in_jump ? Refutation::MembershipContradiction : Refutation::BudgetUnresolved;
  return r;
}

ConstructionTrace strinc_trace(const StrincReport& r, const std::string& set_spec, std::uint64_t budget) {
  ConstructionTrace t;
  t.header = {{"schema", kTraceSchema},
              {"construction", "strinc"},
              {"params", {{"gamma", to_string(r.gamma)}, {"g", to_string(r.g)}, {"base", set_spec}, {"budget", budget}}}};
  t.records.push_back({{"stage", 1}, {"report", r.to_json()}});
  return t;
}

}  // namespace bjump
