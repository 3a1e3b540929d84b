#pragma once

#include "bjump/machine.hpp"

#include <map>
#include <string>

namespace bjump {

// Label-resolving builder for register programs. Jumps use a register that
// the caller promises stays zero.
class Assembler {
 public:
  explicit Assembler(std::uint32_t zero_register) : zero_(zero_register) {}

  Assembler& inc(std::uint32_t r);
  Assembler& decjz(std::uint32_t r, const std::string& label);
  Assembler& jump(const std::string& label);
  Assembler& query(std::uint32_t addr, std::uint32_t dest);
  Assembler& halt();
  Assembler& label(const std::string& name);
  // dst += src, src = 0
  Assembler& move_add(std::uint32_t src, std::uint32_t dst);
  Assembler& clear(std::uint32_t r);

  RegisterProgram build() const;

 private:
  struct Pending {
    std::size_t at;
    std::string label;
  };
  std::uint32_t zero_;
  std::vector<Instruction> code_;
  std::vector<Pending> fixups_;
  std::map<std::string, std::uint32_t> labels_;
  int fresh_ = 0;
  std::string fresh_label();
};

namespace programs {

RegisterProgram identity();                // empty program
RegisterProgram successor();
RegisterProgram tight_loop();              // never halts, never queries
RegisterProgram add_pair();                // pair(y, x) -> y + x
RegisterProgram query_constant(std::uint64_t p);  // returns D(p)
RegisterProgram query_input();             // returns D(x)
RegisterProgram const_value(std::uint64_t c);

}  // namespace programs

}  // namespace bjump
