#include "bjump/machine.hpp"
#include "bjump/native_kinds.hpp"

#include <array>
#include <mutex>

namespace bjump {

// ---- fuel ----

void Fuel::burn(std::uint64_t n) {
  const Fuel* dry = nullptr;
  for (Fuel* f = this; f != nullptr; f = f->parent_)
    if (f->remaining() < n) dry = f;
  if (dry != nullptr) throw OutOfFuel{dry};
  for (Fuel* f = this; f != nullptr; f = f->parent_) f->used_ += n;
}

void Fuel::exhaust() {
  burn(available());
  const Fuel* dry = this;
  for (Fuel* f = this; f != nullptr; f = f->parent_)
    if (f->remaining() == 0) dry = f;
  throw OutOfFuel{dry};
}

std::uint64_t Fuel::available() const {
  std::uint64_t m = remaining();
  for (const Fuel* f = parent_; f != nullptr; f = f->parent_) m = std::min(m, f->remaining());
  return m;
}

// ---- native registry ----

namespace {

struct NativeEntry {
  const char* name = "unknown";
  NativeFn fn = nullptr;
};

std::array<NativeEntry, kNativeKinds>& registry() {
  static std::array<NativeEntry, kNativeKinds> r;
  return r;
}

void ensure_installed() {
  static std::once_flag once;
  std::call_once(once, [] {
    install_core_natives();
    install_oracle_natives();
    install_jump_natives();
    install_ershov_natives();
    install_construction_natives();
  });
}

}  // namespace

void register_native(std::uint32_t kind, const char* name, NativeFn fn) {
  if (kind >= kNativeKinds) throw std::invalid_argument("native kind out of range");
  registry()[kind] = NativeEntry{name, fn};
}

const char* native_name(std::uint32_t kind) {
  ensure_installed();
  if (kind >= kNativeKinds) return "unknown";
  return registry()[kind].name;
}

// ---- interpreter ----

namespace {

Nat run_registers(const RegisterProgram& p, const Nat& x, Fuel& fuel, const Oracle& oracle) {
  std::uint32_t nregs = 1;
  for (const auto& ins : p.code) {
    nregs = std::max(nregs, ins.a + 1);
    if (ins.op == Op::Query) nregs = std::max(nregs, ins.b + 1);
  }
  std::vector<Nat> reg(nregs);
  reg[0] = x;
  std::size_t pc = 0;
  const std::size_t n = p.code.size();
  while (pc < n) {
    const Instruction& ins = p.code[pc];
    fuel.burn();
    switch (ins.op) {
      case Op::Halt: return reg[0];
      case Op::Inc:
        ++reg[ins.a];
        ++pc;
        break;
      case Op::DecJz:
        if (reg[ins.a] == 0) {
          pc = ins.b;
        } else {
          --reg[ins.a];
          ++pc;
        }
        break;
      case Op::Query: {
        int bit = oracle ? oracle(reg[ins.a]) : 0;
        reg[ins.b] = bit ? 1 : 0;
        ++pc;
        break;
      }
    }
  }
  return reg[0];
}

}  // namespace

namespace {

// Self-referential natives can recurse a few steps per level; a budget of
// millions would blow the thread stack long before the fuel runs dry.
constexpr int kMaxEvalNesting = 1500;
thread_local int eval_nesting = 0;

struct NestingGuard {
  NestingGuard() { ++eval_nesting; }
  ~NestingGuard() { --eval_nesting; }
  NestingGuard(const NestingGuard&) = delete;
  NestingGuard& operator=(const NestingGuard&) = delete;
};

}  // namespace

Nat evaluate(const Nat& e, const Nat& x, Fuel& fuel, const Oracle& oracle) {
  NestingGuard guard;
  if (eval_nesting > kMaxEvalNesting) fuel.exhaust();
  Program p = decode(e);
  if (std::holds_alternative<Diverger>(p)) fuel.exhaust();
  if (auto* r = std::get_if<RegisterProgram>(&p)) return run_registers(*r, x, fuel, oracle);
  fuel.burn();
  if (auto* c = std::get_if<Curried>(&p)) return evaluate(c->base, pair(c->arg, x), fuel, oracle);
  if (auto* d = std::get_if<Padded>(&p)) return evaluate(d->base, x, fuel, oracle);
  auto& nc = std::get<NativeCall>(p);
  ensure_installed();
  NativeFn fn = registry()[nc.kind].fn;
  if (fn == nullptr) fuel.exhaust();
  return fn(nc.param, x, fuel, oracle);
}

RunResult run(const Nat& e, const Nat& x, std::uint64_t budget, const Oracle& oracle) {
  RunResult out;
  Fuel fuel(budget);
  Nat use = 0;
  Oracle tracked;
  if (oracle) {
    tracked = [&](const Nat& pos) {
      if (pos + 1 > use) use = pos + 1;
      return oracle(pos);
    };
  } else {
    tracked = [&](const Nat& pos) {
      if (pos + 1 > use) use = pos + 1;
      return 0;
    };
  }
  try {
    out.value = evaluate(e, x, fuel, tracked);
    out.status = Status::Halted;
  } catch (const OutOfFuel&) {
    out.status = Status::Running;
  } catch (const OracleBlocked& b) {
    out.status = Status::Blocked;
    out.blocked_at = b.position;
  }
  out.steps = fuel.used();
  out.use = use;
  return out;
}

SubRun try_evaluate(const Nat& e, const Nat& x, std::uint64_t limit, Fuel& parent, const Oracle& oracle) {
  SubRun out;
  Fuel child(limit, &parent);
  try {
    out.value = evaluate(e, x, child, oracle);
    out.status = Status::Halted;
  } catch (const OutOfFuel& o) {
    if (o.source != &child) throw;
    out.status = Status::Running;
  }
  out.steps = child.used();
  return out;
}

// ---- standard indices and the recursion theorem ----

Nat const_index(const Nat& c) { return native_index(kind::Const, c); }
Nat compose_index(const Nat& outer, const Nat& inner) {
  return native_index(kind::Compose, seq_encode({outer, inner}));
}
Nat identity_index() { return encode(RegisterProgram{}); }
Nat diag_eval_index() { return native_index(kind::DiagEval, 0); }

Nat fixed_point(const Nat& transformer, const Nat& offset, std::uint64_t check_budget) {
  Nat v = native_index(kind::FixedPointStep, transformer);
  Nat m = smn(diag_eval_index(), pad(v, offset));
  if (!run(transformer, m, check_budget).halted())
    throw NonTotalTransformer("transformer does not halt on " + to_string(m) + " within budget");
  return m;
}

std::vector<Nat> fixed_point_set(const Nat& transformer, std::size_t count, const Nat& above,
                                 std::uint64_t check_budget) {
  Nat v = native_index(kind::FixedPointStep, transformer);
  Nat u = diag_eval_index();
  // smn and pad are monotone, so the fixed points increase with the offset;
  // binary search for the first offset clearing `above`.
  Nat lo = 0, hi = 1;
  while (smn(u, pad(v, hi)) <= above) hi *= 2;
  while (lo < hi) {
    Nat mid = (lo + hi) / 2;
    if (smn(u, pad(v, mid)) > above) hi = mid;
    else lo = mid + 1;
  }
  std::vector<Nat> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(fixed_point(transformer, lo + k, check_budget));
  return out;
}

// ---- core natives ----

namespace {

Nat nat_const(const Nat& c, const Nat&, Fuel&, const Oracle&) { return c; }

Nat nat_diag_eval(const Nat&, const Nat& input, Fuel& fuel, const Oracle& oracle) {
  auto [y, x] = unpair(input);
  Nat z = evaluate(y, y, fuel, oracle);
  return evaluate(z, x, fuel, oracle);
}

Nat nat_fixed_point_step(const Nat& t, const Nat& y, Fuel& fuel, const Oracle& oracle) {
  return evaluate(t, smn(diag_eval_index(), y), fuel, oracle);
}

Nat nat_const_index(const Nat&, const Nat& e, Fuel&, const Oracle&) { return const_index(e); }

Nat nat_compose(const Nat& param, const Nat& x, Fuel& fuel, const Oracle& oracle) {
  auto ps = seq_decode(param);
  if (!ps || ps->size() != 2) fuel.exhaust();
  Nat mid = evaluate((*ps)[1], x, fuel, oracle);
  return evaluate((*ps)[0], mid, fuel, oracle);
}

Nat nat_affine(const Nat& param, const Nat& x, Fuel& fuel, const Oracle&) {
  auto ps = seq_decode(param);
  if (!ps || ps->size() != 2) fuel.exhaust();
  return (*ps)[0] * x + (*ps)[1];
}

}  // namespace

void install_core_natives() {
  register_native(kind::Const, "const", nat_const);
  register_native(kind::DiagEval, "diag-eval", nat_diag_eval);
  register_native(kind::FixedPointStep, "fixed-point-step", nat_fixed_point_step);
  register_native(kind::ConstIndex, "const-index", nat_const_index);
  register_native(kind::Compose, "compose", nat_compose);
  register_native(kind::Affine, "affine", nat_affine);
}

}  // namespace bjump
