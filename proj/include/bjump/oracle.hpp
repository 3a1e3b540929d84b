#pragma once

#include "bjump/machine.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bjump {

nlohmann::json nat_to_json(const Nat& n);
Nat nat_from_json(const nlohmann::json& j);

// ---- sets ----

// A total 0/1 set given by a membership function; safe to call concurrently.
struct SetView {
  std::string name;
  std::function<int(const Nat&)> member;
  int operator()(const Nat& p) const { return member(p); }
};

class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::set<Nat> elems) : elems_(std::move(elems)) {}
  int at(const Nat& p) const { return elems_.count(p) ? 1 : 0; }
  void insert(const Nat& p) { elems_.insert(p); }
  // elements <= x
  FiniteSet restrict(const Nat& x) const;
  const std::set<Nat>& elements() const { return elems_; }
  SetView view(std::string name = "finite") const;
  nlohmann::json to_json() const;
  static FiniteSet from_json(const nlohmann::json& j);
  bool operator==(const FiniteSet&) const = default;

 private:
  std::set<Nat> elems_;
};

// Stage-s approximation: positions not present read 0. Records every flip.
class ApproxSet {
 public:
  explicit ApproxSet(std::uint64_t stage = 0) : stage_(stage) {}
  std::uint64_t stage() const { return stage_; }
  void set_stage(std::uint64_t s) { stage_ = s; }
  int at(const Nat& p) const;
  void set(const Nat& p, int bit);
  std::uint64_t changes(const Nat& p) const;
  const std::map<Nat, int>& bits() const { return bits_; }
  SetView view(std::string name = "approx") const;
  nlohmann::json to_json() const;

 private:
  std::uint64_t stage_;
  std::map<Nat, int> bits_;
  std::map<Nat, std::uint64_t> changes_;
};

// A (+) B : 2n from A, 2n+1 from B. Stages must agree.
ApproxSet join(const ApproxSet& a, const ApproxSet& b);
SetView join(const SetView& a, const SetView& b);

SetView empty_set();
SetView evens();
SetView primes();
SetView from_list(const std::vector<Nat>& xs, std::string name = "list");
// "empty", "evens", "primes", "list:1,2,3", optionally "...&le:N" to cut at N
SetView parse_set_spec(const std::string& spec);

// ---- applying functionals ----

// Queries read the finite set D (absent positions are 0).
RunResult apply_bounded(const Nat& e, const FiniteSet& d, const Nat& x, std::uint64_t budget);
// Queries at or beyond |sigma| block the computation.
RunResult apply_prefix(const Nat& e, const std::vector<bool>& sigma, const Nat& x, std::uint64_t budget);

// Oracle answering like `base` for positions <= bound and blocking beyond it.
// This is the use-bounded reading of A restricted to [0, bound].
Oracle restrict_use(const Oracle& base, const Nat& bound, const void* tag = nullptr);
Oracle as_oracle(const SetView& s);

// ---- bounded Turing reductions ----

struct BTWitness {
  Nat functional;  // Phi
  Nat bound;       // phi_bound(x) caps the use
};

struct BTFailure {
  Nat x;
  std::string reason;  // "bound-diverges", "functional-diverges", "wrong-value", "blocked"
};

struct BTReport {
  std::size_t checked = 0;
  std::vector<BTFailure> failures;
  bool ok() const { return failures.empty(); }
};

// A(x) = Phi^{B|bound(x)}(x) on every x in the domain, at the given budget.
BTReport verify_bT(const BTWitness& w, const SetView& a, const SetView& b, const std::vector<Nat>& domain,
                   std::uint64_t budget);

// ---- truth-table conditions ----

struct TTCondition {
  std::vector<Nat> positions;  // x_1..x_k
  // bit r is the table's value on row r; row r has bit i set iff A(x_{i+1}) = 1
  Nat table;

  int row_value(const Nat& row) const;
  // code = pair(list code of positions, table). Every natural decodes; table
  // bits beyond the 2^k rows are simply never read.
  Nat code() const;
  static TTCondition decode(const Nat& code);
  static TTCondition disjunction(std::vector<Nat> positions);
  static TTCondition single(const Nat& position);
  nlohmann::json to_json() const;
};

struct UndecidedPosition : std::runtime_error {
  Nat position;
  explicit UndecidedPosition(const Nat& p)
      : std::runtime_error("tt-condition reads undecided position " + to_string(p)), position(p) {}
};

// Evaluate against a set; positions >= decided_limit (if given) throw.
int tt_eval(const TTCondition& c, const SetView& a, const std::optional<Nat>& decided_limit = std::nullopt);

// A^tt restricted to codes < limit
std::vector<Nat> enum_Att_base(const SetView& a, const Nat& limit);

// ---- standard functionals ----

Nat query_halt_index(const Nat& p);  // halts iff oracle(p) = 1
Nat echo_index();                    // Gamma^C(x) = C(x)
Nat const_bit_index(int bit);        // Gamma^C(x) = bit
Nat tt_eval_index();                 // Phi^C(c) = condition c evaluated on C
Nat affine_index(const Nat& a, const Nat& b);  // x -> a*x + b

}  // namespace bjump
