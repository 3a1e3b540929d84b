#pragma once

#include "bjump/ershov.hpp"
#include "bjump/oracle.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bjump {

// ---- traces ----

inline constexpr int kTraceSchema = 1;

// JSON lines: a header naming the construction and its inputs, then one
// record per stage at which something happened, then a summary record.
struct ConstructionTrace {
  nlohmann::json header;
  std::vector<nlohmann::json> records;

  std::string to_jsonl() const;
  static ConstructionTrace from_jsonl(const std::string& text);
  void save(const std::string& path) const;
  static ConstructionTrace load(const std::string& path);
};

struct ReplayReport {
  bool identical = false;
  std::optional<std::uint64_t> first_divergent_stage;
  std::size_t first_divergent_line = 0;
  std::vector<std::string> violations;  // invariant failures found in the given trace
  bool ok() const { return identical && violations.empty(); }
  nlohmann::json to_json() const;
};

// Re-runs the construction named in the header and compares line by line.
ReplayReport replay(const ConstructionTrace& trace);

// ---- diagonalization: the bounded jump is strictly above its base ----

enum class Refutation { ValueContradiction, MembershipContradiction, BoundedDivergence, BudgetUnresolved };
std::string refutation_name(Refutation r);

struct NonTotalG : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StrincReport {
  Nat gamma, g;
  Nat transformer;          // index of e -> f(e)
  Nat m;                    // fixed point above g
  Nat bound;                // g(m)
  std::optional<Nat> claim; // Gamma^{A|g(m)}(m), if it converged
  bool m_in_jump = false;   // m in A^b at the budget (window plus the g hint)
  bool self_halts = false;  // Phi_m^A(m) converged at the budget
  Refutation branch = Refutation::BudgetUnresolved;
  nlohmann::json to_json() const;
};

// gamma: functional claiming to compute A^b from A; g: its use bound.
StrincReport diagonalize_strinc(const Nat& gamma, const Nat& g, const SetView& a, std::uint64_t budget,
                                std::uint64_t probes = 16);
ConstructionTrace strinc_trace(const StrincReport& r, const std::string& set_spec, std::uint64_t budget);

// ---- Shoenfield inversion for the bounded jump ----

struct MarkerEvent {
  std::uint64_t stage = 0;
  std::optional<std::uint64_t> value;
  std::string event;  // defined, undefined, extracted
};

struct Marker {
  std::uint64_t n = 0, i = 0;
  std::optional<std::uint64_t> value;
  std::vector<MarkerEvent> history;
};

struct ControlledIndexPlan {
  Nat config;                       // names the construction run the programs consult
  Nat fixed_point;                  // i with phi_i = g
  std::vector<std::uint64_t> rows;  // i_n: row of the first convergence found at n
  std::vector<Nat> g, h;
  Nat k(std::uint64_t n, const Nat& m) const;  // closed form, increasing in m
  // g(n-1) < k(n,0) < ... < k(n,h(n)-1) < g(n), checked at the ends and a few inner slots
  bool chain_ok(std::uint64_t n) const;
  nlohmann::json to_json() const;
};

// h(n) = sum_{t<n} h(t) + sum_{t=1}^{g(n-1)} (t^2-t)/2 + i_n, h(0) = i_0
Nat theta_h(const std::vector<Nat>& h_before, const Nat& g_prev_plus_one, std::uint64_t row);

// Theta_q for the first rows.size() points; with q the fixed point this is the plan.
ControlledIndexPlan build_theta_plan(const std::vector<std::uint64_t>& rows, const Nat& q, const Nat& config);

struct ShoenfieldResult {
  std::set<std::uint64_t> a;                   // final approximation
  std::map<std::uint64_t, std::uint64_t> changes;  // position -> number of flips
  std::vector<std::uint64_t> definitions;      // per n, marker definitions
  std::vector<Marker> markers;
  std::vector<int> b_limit;                    // limit of the witness per n
  std::vector<std::uint64_t> least_rows;       // least row with a convergence, per n
  std::vector<std::uint64_t> oracle_patterns;  // distinct marker sets seen in A, per n
  ControlledIndexPlan plan;
  std::uint64_t window = 0;                    // bound indices 1..window-1 were watched
  ConstructionTrace trace;
};

struct ShoenfieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The jump enumerator's window bound indices are watched on each g(k), so
// membership of g(n) should be read with the same window.
inline constexpr std::uint64_t kShoenfieldWindow = 2;
ShoenfieldResult shoenfield_inversion(const Script& wB, std::uint64_t n_points, std::uint64_t stages,
                                      std::uint64_t window = kShoenfieldWindow);

// ---- c.e. set with A^b not bT below A_tt ----

struct Adversary {
  Nat functional;  // Phi, queried on A_tt
  Nat bound;       // phi, its use bound
};

struct Attention {
  std::uint64_t stage = 0;
  Nat x;  // the marker value it acted for
  char subcase = 'A';
};

struct KEvent {
  std::uint64_t stage = 0;
  Nat y;  // phi_y(y) converged at this stage
};

struct TTSepResult {
  std::vector<std::uint64_t> a_enumeration;  // elements in order of entry
  std::vector<std::optional<Nat>> markers;   // x_n at the end
  std::vector<std::vector<Attention>> attention;
  std::vector<KEvent> k_events;
  std::vector<Adversary> adversaries;
  ConstructionTrace trace;
};

// Requirements R_n for n < n_req. Without adversaries, R_n uses Phi_{pi1(n)} and
// phi_{pi2(n)} under the Cantor pairing.
TTSepResult tt_separation(std::uint64_t n_req, std::uint64_t stages, std::vector<Adversary> adversaries = {});

// Evaluation of R_n at the final stage.
struct RequirementCheck {
  bool bound_resolved = false;
  std::optional<int> adversary;  // Phi^{A_tt | bound}(x_n)
  int jump = 0;                  // A^b(x_n)
  bool unfalsified() const { return !bound_resolved || !adversary || *adversary != jump; }
};
RequirementCheck check_requirement(const TTSepResult& r, std::uint64_t n, std::uint64_t budget);

// Every two further actions of R_n for one x_n are separated by a logged K
// convergence below the bound. Returns the violations.
std::vector<std::string> check_double_actions(const TTSepResult& r, std::uint64_t budget);

}  // namespace bjump
