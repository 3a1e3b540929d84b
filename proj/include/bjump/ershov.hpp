#pragma once

#include "bjump/oracle.hpp"
#include "bjump/ordinal.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bjump {

// psi(n, code(beta)) -> {0,1}; A(n) is psi at the least converging beta < bound.
struct AlphaCEWitness {
  Nat psi;
  Ordinal bound;
};

// psi_s(n, beta) converges iff psi halts within s steps and, for infinite
// beta, units(beta) + 1 < s (the stage convention the constructions rely
// on). Plain programs are scanned by weight, so for them weight(beta) <= s is
// required as well.
std::uint64_t ordinal_weight(const Ordinal& o);
std::uint64_t convergence_stage(std::uint64_t steps, const Ordinal& o);

struct WitnessEvent {
  std::uint64_t stage = 0;  // first stage at which psi_s(n, ord) converges
  Ordinal ord;
  int value = 0;
};

struct HistoryEntry {
  std::uint64_t stage = 0;
  Ordinal ord;
  int value = 0;
};

struct WitnessState {
  std::optional<Ordinal> current;
  int value = 0;
  std::vector<HistoryEntry> history;  // successive least converged ordinals
  bool strictly_decreasing() const;
  std::size_t flips() const;
  nlohmann::json to_json() const;
};

// Stages above this are never simulated; programs asking for more diverge.
inline constexpr std::uint64_t kHorizonCap = std::uint64_t{1} << 22;
// how deeply witness programs may consult other witnesses
inline constexpr unsigned kMaxWitnessNesting = 2;

// All convergences of psi at n up to `horizon`, sorted by stage. Native
// witnesses answer from their own simulation; other programs are scanned over
// ordinals below w^degree_cap in order of weight.
std::vector<WitnessEvent> witness_events(const Nat& psi, const Nat& n, std::uint64_t horizon, unsigned degree_cap = 2);
std::vector<HistoryEntry> prefix_minima(const std::vector<WitnessEvent>& events);

struct Estimate {
  Ordinal ord;
  int value = 0;
};
std::optional<Estimate> eval_witness(const AlphaCEWitness& w, const Nat& n, std::uint64_t s);
std::optional<int> limit_value(const AlphaCEWitness& w, const Nat& n, std::uint64_t budget);
WitnessState witness_state(const AlphaCEWitness& w, const Nat& n, std::uint64_t s);
std::vector<WitnessEvent> events_below(const AlphaCEWitness& w, const Nat& n, std::uint64_t s);

using EventProvider = std::vector<WitnessEvent> (*)(const Nat& param, const Nat& n, std::uint64_t horizon);
// Registers a native witness kind. Its program form answers psi(n, code) from
// the provider's events, charging the convergence stage.
void register_witness_kind(std::uint32_t kind, const char* name, EventProvider provider);

// ---- scripted witnesses ----

struct ScriptEntry {
  std::uint64_t n = 0;
  Ordinal ord;
  int value = 0;
  std::uint64_t time = 1;
};

struct Script {
  std::vector<ScriptEntry> entries;
  // every n without entries converges at ordinal 0 with this (value, time)
  std::optional<std::pair<int, std::uint64_t>> fallback;

  Ordinal bound() const;  // least w^k above every scripted ordinal
  nlohmann::json to_json() const;
  static Script from_json(const nlohmann::json& j);
  static Script load(const std::string& path);
};

Nat script_index(const Script& s);
AlphaCEWitness script_witness(const Script& s);
AlphaCEWitness script_witness(const Script& s, const Ordinal& bound);
AlphaCEWitness constant_witness(int value);

// ---- transformations ----

struct DownwardTrace {
  Nat bound_value;  // f(n)
  std::vector<HistoryEntry> writes;
};

struct NonTotalBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// chi for A from (phi, f) : A <=bT B and a witness for B. Throws NonTotalBound
// if f fails to halt on a probe point within probe_budget.
AlphaCEWitness downward_transform(const Nat& phi, const Nat& f, const AlphaCEWitness& wB, unsigned k,
                                  const std::vector<Nat>& probes = {}, std::uint64_t probe_budget = 100'000);
DownwardTrace downward_trace(const Nat& phi, const Nat& f, const AlphaCEWitness& wB, const Nat& n,
                             std::uint64_t horizon);

struct JumpTrace {
  std::vector<HistoryEntry> writes;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> levels;  // (stage, l) after each decrement
  std::uint64_t decrements = 0;
  bool capped = false;  // some bound value was too large to simulate
};

// chi for A^b from a witness for A with bound w^k.
AlphaCEWitness jump_transform(const AlphaCEWitness& wA, unsigned k);
JumpTrace jump_transform_trace(const AlphaCEWitness& wA, unsigned k, const Nat& n, std::uint64_t horizon);

// ---- omega-c.e. vs bounded reductions to the halting set ----

// the halting set approximated by s steps
SetView halting_approx(std::uint64_t s);
// phi_q(q) halts iff the witness changes its least ordinal at least j times at n
Nat mind_change_query(const Nat& psi, const Nat& n, const Nat& j);
BTWitness omega_reduction_from_witness(const AlphaCEWitness& w);
AlphaCEWitness omega_witness_from_reduction(const BTWitness& bt);

// ---- w^k-c.e. sets into the iterated jump ----

// Sigma_1 questions about row i (ordinals w^d*i + beta, beta < w^d) of psi at n,
// posed as members of the bounded jump of the empty set.
Nat slice_question(const Nat& psi, const Nat& n, const Nat& i, unsigned d);
Nat row_question_bounded(const Nat& psi, const Nat& n, const Nat& i, const Nat& x);

// index of the total f with n in A iff f(n) in empty^{kb}; k >= 2
Nat erbase_reduce(const AlphaCEWitness& w);
Nat inductive_reduce(const AlphaCEWitness& w, unsigned k);
// index of that f for a witness program with bound w^k
Nat level_f_index(const Nat& psi, unsigned k);

// f(n) and u(n) evaluated directly; nullopt when psi shows nothing within the
// budget. Images register their bound indices as witness hints.
std::optional<Nat> reduction_image(const Nat& psi, const Nat& n, unsigned k, std::uint64_t budget);
std::optional<Nat> reduction_u(const Nat& psi, const Nat& n, unsigned k, std::uint64_t budget);

// w restricted to row i at n, 0 elsewhere (the slice witness of the induction)
AlphaCEWitness slice_witness(const Nat& psi, const Nat& n, const Nat& i, unsigned d);

}  // namespace bjump
