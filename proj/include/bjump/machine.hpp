#pragma once

#include "bjump/nat.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bjump {

// ---- programs and the numbering ----

enum class Op : std::uint8_t { Halt, Inc, DecJz, Query };

struct Instruction {
  Op op = Op::Halt;
  std::uint32_t a = 0;  // register (Inc, DecJz) or address register (Query)
  std::uint32_t b = 0;  // jump target (DecJz) or destination register (Query)
  bool operator==(const Instruction&) const = default;
};

struct RegisterProgram {
  std::vector<Instruction> code;
  bool operator==(const RegisterProgram&) const = default;
};

struct Diverger {
  bool operator==(const Diverger&) const = default;
};

// phi_{Curried{e,y}}(x) = phi_e(pair(y, x))
struct Curried {
  Nat base, arg;
  bool operator==(const Curried&) const = default;
};

// same function as base
struct Padded {
  Nat base, pad;
  bool operator==(const Padded&) const = default;
};

// a built-in macro program; unknown kinds diverge
struct NativeCall {
  std::uint32_t kind = 0;
  Nat param;
  bool operator==(const NativeCall&) const = default;
};

using Program = std::variant<Diverger, RegisterProgram, Curried, Padded, NativeCall>;

inline constexpr std::uint32_t kMaxRegister = 1u << 12;
inline constexpr std::uint32_t kMaxTarget = 1u << 24;
inline constexpr std::uint32_t kNativeKinds = 64;
inline constexpr std::size_t kMaxProgramBits = 1u << 14;

Nat encode(const Program& p);
// Total. Register programs naming absurd registers decode to the diverger.
Program decode(const Nat& e);

std::string to_text(const RegisterProgram& p);
RegisterProgram parse_program(const std::string& text);
std::string describe(const Nat& e);

// ---- execution ----

class Fuel;

struct OutOfFuel {
  const Fuel* source;
};

// Thrown by a restricted oracle for a position beyond its bound. `source`
// identifies the restriction so a native can tell its own from an outer one.
struct OracleBlocked {
  Nat position;
  const void* source = nullptr;
};

// Step counter. A nested counter draws from its ancestors as well; running
// out anywhere on the chain throws OutOfFuel naming the outermost counter that
// ran dry, so a caller catching its own child counter never swallows an
// ancestor's exhaustion.
class Fuel {
 public:
  explicit Fuel(std::uint64_t limit, Fuel* parent = nullptr) : limit_(limit), parent_(parent) {}
  Fuel(const Fuel&) = delete;
  Fuel& operator=(const Fuel&) = delete;

  void burn(std::uint64_t n = 1);
  [[noreturn]] void exhaust();
  std::uint64_t used() const { return used_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  // least remaining along the chain
  std::uint64_t available() const;

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  Fuel* parent_;
};

// Oracle answers 0/1 and may throw OracleBlocked. An empty function is the
// empty set.
using Oracle = std::function<int(const Nat&)>;

Nat evaluate(const Nat& e, const Nat& x, Fuel& fuel, const Oracle& oracle = {});

enum class Status { Halted, Running, Blocked };

struct RunResult {
  Status status = Status::Running;
  Nat value;
  std::uint64_t steps = 0;
  Nat use;  // 1 + largest queried position, 0 if none
  Nat blocked_at;
  bool halted() const { return status == Status::Halted; }
};

RunResult run(const Nat& e, const Nat& x, std::uint64_t budget, const Oracle& oracle = {});

// Sub-computation inside a native. Returns Running instead of throwing when
// its own limit runs out; ancestor exhaustion and blocking propagate.
struct SubRun {
  Status status = Status::Running;
  Nat value;
  std::uint64_t steps = 0;
};
SubRun try_evaluate(const Nat& e, const Nat& x, std::uint64_t limit, Fuel& parent,
                    const Oracle& oracle = {});

// ---- natives ----

using NativeFn = Nat (*)(const Nat& param, const Nat& input, Fuel& fuel, const Oracle& oracle);

void register_native(std::uint32_t kind, const char* name, NativeFn fn);
const char* native_name(std::uint32_t kind);
Nat native_index(std::uint32_t kind, const Nat& param);

// ---- s-m-n, padding, recursion theorem ----

Nat smn(const Nat& e, const Nat& y);
Nat pad(const Nat& e, const Nat& k);

struct NonTotalTransformer : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// m with phi_m = phi_{phi_t(m)}. Distinct offsets give distinct fixed points.
// Throws NonTotalTransformer if phi_t(m) does not halt within check_budget.
Nat fixed_point(const Nat& transformer, const Nat& offset = 0, std::uint64_t check_budget = 1'000'000);

// count fixed points of t, strictly increasing, all above `above`
std::vector<Nat> fixed_point_set(const Nat& transformer, std::size_t count, const Nat& above = 0,
                                 std::uint64_t check_budget = 1'000'000);

// ---- a few standard indices ----

Nat const_index(const Nat& c);
Nat compose_index(const Nat& outer, const Nat& inner);
Nat identity_index();  // the empty register program
Nat diag_eval_index();

}  // namespace bjump
