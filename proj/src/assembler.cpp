#include "bjump/assembler.hpp"

#include <stdexcept>

namespace bjump {

Assembler& Assembler::inc(std::uint32_t r) {
  code_.push_back({Op::Inc, r, 0});
  return *this;
}

Assembler& Assembler::decjz(std::uint32_t r, const std::string& label) {
  fixups_.push_back({code_.size(), label});
  code_.push_back({Op::DecJz, r, 0});
  return *this;
}

Assembler& Assembler::jump(const std::string& label) { return decjz(zero_, label); }

Assembler& Assembler::query(std::uint32_t addr, std::uint32_t dest) {
  code_.push_back({Op::Query, addr, dest});
  return *this;
}

Assembler& Assembler::halt() {
  code_.push_back({Op::Halt, 0, 0});
  return *this;
}

Assembler& Assembler::label(const std::string& name) {
  if (!labels_.emplace(name, static_cast<std::uint32_t>(code_.size())).second)
    throw std::invalid_argument("duplicate label " + name);
  return *this;
}

std::string Assembler::fresh_label() { return "__" + std::to_string(fresh_++); }

Assembler& Assembler::move_add(std::uint32_t src, std::uint32_t dst) {
  std::string top = fresh_label(), done = fresh_label();
  label(top).decjz(src, done).inc(dst).jump(top).label(done);
  return *this;
}

Assembler& Assembler::clear(std::uint32_t r) {
  std::string top = fresh_label(), done = fresh_label();
  label(top).decjz(r, done).jump(top).label(done);
  return *this;
}

RegisterProgram Assembler::build() const {
  RegisterProgram p{code_};
  for (const auto& f : fixups_) {
    auto it = labels_.find(f.label);
    if (it == labels_.end()) throw std::invalid_argument("undefined label " + f.label);
    p.code[f.at].b = it->second;
  }
  return p;
}

namespace programs {

RegisterProgram identity() { return {}; }

RegisterProgram successor() { return RegisterProgram{{{Op::Inc, 0, 0}}}; }

RegisterProgram tight_loop() { return RegisterProgram{{{Op::DecJz, 1, 0}}}; }

// r0 = z, r1 zero, r2 = x-part, r3 = y-part. Walks the Cantor diagonal z
// times, then returns the sum of the two components.
RegisterProgram add_pair() {
  Assembler a(1);
  a.label("loop")
      .decjz(0, "done")
      .decjz(2, "xzero")
      .inc(3)
      .jump("loop")
      .label("xzero")
      .move_add(3, 2)
      .inc(2)
      .jump("loop")
      .label("done")
      .move_add(3, 0)
      .move_add(2, 0)
      .halt();
  return a.build();
}

RegisterProgram query_constant(std::uint64_t p) {
  Assembler a(1);
  a.clear(0);
  for (std::uint64_t k = 0; k < p; ++k) a.inc(2);
  a.query(2, 0).halt();
  return a.build();
}

RegisterProgram query_input() { return RegisterProgram{{{Op::Query, 0, 0}, {Op::Halt, 0, 0}}}; }

RegisterProgram const_value(std::uint64_t c) {
  Assembler a(1);
  a.clear(0);
  for (std::uint64_t k = 0; k < c; ++k) a.inc(0);
  a.halt();
  return a.build();
}

}  // namespace programs

}  // namespace bjump
