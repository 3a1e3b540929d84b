#pragma once

#include "bjump/oracle.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bjump {

enum class Variant { B, B0, B1, I, Tt, Bk };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);  // b, b0, b1, i, tt, bk

// How A restricted to a bound reaches the functional.
//  UseBounded: positions above the bound block (the computation does not count).
//  FiniteSet:  positions above the bound read 0.
enum class Restriction { UseBounded, FiniteSet };

using HintFn = std::function<std::vector<Nat>(const Nat& x)>;
using Reindex = std::function<Nat(const Nat& n)>;

struct JumpConfig {
  SetView base = empty_set();
  std::uint64_t budget = 10'000;
  // bound indices tried for x: 0..min(x, window-1), plus hints and registered hints
  std::uint64_t window = 16;
  HintFn hints;
  Restriction restriction = Restriction::UseBounded;
  unsigned tt_k = 1;           // norm bound for Bk
  Reindex reindex;             // numbering used by B1; empty means the standard one
};

struct Membership {
  Nat x;
  bool member = false;
  std::optional<Nat> witness;  // bound index i (B, B0's i), empty otherwise
  Nat bound;                   // the use bound actually applied
  std::uint64_t steps = 0;     // steps of the accepting functional run
  std::string note;
  nlohmann::json to_json() const;
};

// One point of a jump at a stage.
Membership jump_member(Variant v, const Nat& x, const JumpConfig& cfg);
bool in_jump(Variant v, const Nat& x, const JumpConfig& cfg);

struct JumpStageView {
  std::string base;
  Variant variant = Variant::B;
  std::uint64_t stage = 0;
  std::vector<Membership> members;
  std::vector<Nat> pending;  // probed and not (yet) in
  bool contains(const Nat& x) const;
  nlohmann::json to_json() const;
};

// OpenMP across points; the serial one is the reference.
JumpStageView enum_jump(Variant v, const JumpConfig& cfg, const std::vector<Nat>& domain);
JumpStageView enum_jump_serial(Variant v, const JumpConfig& cfg, const std::vector<Nat>& domain);
std::vector<Nat> range_domain(std::uint64_t n);

// Constructions record the bound index that makes their images members, so
// the enumerators try it even when it lies outside the window.
void register_witness_hint(const Nat& x, const Nat& i);
std::vector<Nat> witness_hints(const Nat& x);

// Numberings for the b1 demonstration: n -> (n + shift) / 2 lists every
// program twice.
Reindex halving_reindex(unsigned shift);

// ---- matched-budget equivalence ----

enum class Outcome { Agree, Unresolved, Disagree };
std::string outcome_name(Outcome o);

using MemberAt = std::function<bool(const Nat& x, std::uint64_t budget)>;
using NatMap = std::function<Nat(const Nat& x)>;

struct EquivRow {
  Nat x, image;
  bool lhs = false, rhs = false;
  Outcome outcome = Outcome::Agree;
};

struct EquivReport {
  std::vector<EquivRow> rows;
  std::size_t count(Outcome o) const;
  double unresolved_fraction() const;
  nlohmann::json to_json() const;
};

// lhs(x) vs rhs(map(x)) at `budget`; points that differ are re-checked at
// slack * budget and become Unresolved if they then agree. Sides must be
// thread-safe unless parallel is false.
EquivReport check_equivalence(const MemberAt& lhs, const NatMap& map, const MemberAt& rhs,
                              const std::vector<Nat>& domain, std::uint64_t budget, std::uint64_t slack = 4,
                              bool parallel = true);

MemberAt jump_side(Variant v, JumpConfig cfg);

// ---- explicit reductions ----

// b0 -> b: k(i,j) returns phi_i(j); g(<e,i,j>) runs Phi_e(j) under the bound
// phi_k(x) and is padded above k(i,j).
Nat run_fixed_index(const Nat& i, const Nat& j);
Nat b0_to_b(const Nat& code);

// b -> b0: x is in A^b iff one of the triples <x,i,x>, i <= x, is in A^b0.
TTCondition b_to_b0(const Nat& x, const Nat& max_x = 4096);

// A <=bT B via (psi, f)  =>  A^b0 <=1 B^b0.
struct OrderPreserving {
  Nat psi, f;
  Nat h(const Nat& i) const;  // phi_h(i)(x) = max_{y <= phi_i(x)} f(y)
  Nat g(const Nat& e, const Nat& k, const Nat& j) const;
  Nat map(const Nat& code) const;  // <e,i,j> -> <g(<e,h(i),j>), h(i), j>
};

// A_tt <=1 A^b0 from a bT witness of A^tt <=bT A.
struct AttToB0 {
  BTWitness tt;
  Nat z = 0;
  Nat h(const Nat& e) const;
  Nat j(const Nat& e) const;
  Nat map(const Nat& x) const;  // x -> <j(x), h(x), z>
};
// Phi^C(c) = value of condition c on C, bound = largest position of c
BTWitness canonical_tt_witness();
Nat tt_max_position_index();

// A <=1 A^b: query x, with the constant bound x+1 registered as witness.
Nat embed_into_jump(const Nat& x);

// empty^b vs the halting set
Nat halting_to_jump(const Nat& x);  // x in K iff image in empty^b
Nat jump_to_halting(const Nat& y);  // y in empty^b iff phi_image(image) halts
bool halts_on_self(const Nat& x, std::uint64_t budget);

// Decide A^b(n) from A and a halting-set approximation at stage s. Every
// halting question answered "no" makes the answer fragile.
struct TurcharAnswer {
  bool member = false;
  bool fragile = false;
  std::size_t questions = 0;
};
TurcharAnswer decide_with_halting(const Nat& n, const SetView& a, std::uint64_t stage, std::uint64_t window = 16);

// ---- iterated jump of the empty set ----

class NestedJump {
 public:
  // budgets[k-1] is the step budget at level k. Missing inner budgets default
  // to the square of the next outer one, capped at inner_cap.
  NestedJump(unsigned levels, std::vector<std::uint64_t> budgets, std::uint64_t window = 16,
             std::uint64_t inner_cap = 4'000'000);
  bool member(unsigned level, const Nat& x);
  bool member(const Nat& x) { return member(levels_, x); }
  // answers that changed when the level budget was doubled
  std::vector<std::pair<unsigned, Nat>> fragile() const { return fragile_; }
  void set_fragility_probe(bool on) { probe_ = on; }
  std::uint64_t budget(unsigned level) const { return budgets_.at(level - 1); }
  std::size_t cached() const;

 private:
  bool compute(unsigned level, const Nat& x, std::uint64_t budget);
  unsigned levels_;
  std::vector<std::uint64_t> budgets_;
  std::uint64_t window_;
  bool probe_ = false;
  std::vector<std::map<Nat, bool>> memo_;
  std::vector<std::pair<unsigned, Nat>> fragile_;
};

}  // namespace bjump
