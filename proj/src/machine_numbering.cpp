#include "bjump/machine.hpp"

#include <sstream>

namespace bjump {

namespace {

// instruction code = 4 * payload + type
Nat encode_instruction(const Instruction& ins) {
  switch (ins.op) {
    case Op::Halt: return 0;
    case Op::Inc: return 4 * Nat(ins.a) + 1;
    case Op::DecJz: return 4 * pair(Nat(ins.a), Nat(ins.b)) + 2;
    case Op::Query: return 4 * pair(Nat(ins.a), Nat(ins.b)) + 3;
  }
  return 0;
}

std::optional<Instruction> decode_instruction(const Nat& c) {
  auto type = static_cast<unsigned>(c % 4);
  Nat payload = c / 4;
  Instruction ins;
  auto small = [](const Nat& v, std::uint32_t cap) -> std::optional<std::uint32_t> {
    if (v >= cap) return std::nullopt;
    return static_cast<std::uint32_t>(v);
  };
  switch (type) {
    case 0: ins.op = Op::Halt; return ins;
    case 1: {
      auto r = small(payload, kMaxRegister);
      if (!r) return std::nullopt;
      ins.op = Op::Inc;
      ins.a = *r;
      return ins;
    }
    default: {
      auto [x, y] = unpair(payload);
      auto r = small(x, kMaxRegister);
      auto t = small(y, type == 2 ? kMaxTarget : kMaxRegister);
      if (!r || !t) return std::nullopt;
      ins.op = type == 2 ? Op::DecJz : Op::Query;
      ins.a = *r;
      ins.b = *t;
      return ins;
    }
  }
}

constexpr unsigned kTagRegister = 0, kTagCurried = 1, kTagPadded = 2, kTagNative = 3;

Nat wrap(unsigned tag, const Nat& payload) { return 1 + 4 * payload + tag; }

}  // namespace

Nat encode(const Program& p) {
  struct V {
    Nat operator()(const Diverger&) const { return 0; }
    Nat operator()(const RegisterProgram& r) const {
      std::vector<Nat> codes;
      codes.reserve(r.code.size());
      for (const auto& ins : r.code) codes.push_back(encode_instruction(ins));
      return wrap(kTagRegister, list_encode(codes));
    }
    Nat operator()(const Curried& c) const { return wrap(kTagCurried, lin_pair(c.base, c.arg)); }
    Nat operator()(const Padded& c) const { return wrap(kTagPadded, lin_pair(c.pad, c.base)); }
    Nat operator()(const NativeCall& n) const {
      if (n.kind >= kNativeKinds) throw std::invalid_argument("native kind out of range");
      return wrap(kTagNative, Nat(n.kind) + kNativeKinds * n.param);
    }
  };
  return std::visit(V{}, p);
}

Program decode(const Nat& e) {
  if (e <= 0) return Diverger{};
  Nat d = e - 1;
  auto tag = static_cast<unsigned>(d % 4);
  Nat payload = d / 4;
  switch (tag) {
    case kTagRegister: {
      // absurdly long programs are treated as garbage
      if (bit_length(payload) > kMaxProgramBits) return Diverger{};
      RegisterProgram prog;
      for (const Nat& c : list_decode(payload)) {
        auto ins = decode_instruction(c);
        if (!ins) return Diverger{};
        prog.code.push_back(*ins);
      }
      return prog;
    }
    case kTagCurried: {
      auto lp = lin_unpair(payload);
      if (!lp) return Diverger{};
      return Curried{lp->first, lp->second};
    }
    case kTagPadded: {
      auto lp = lin_unpair(payload);
      if (!lp) return Diverger{};
      return Padded{lp->second, lp->first};
    }
    default:
      return NativeCall{static_cast<std::uint32_t>(payload % kNativeKinds), payload / kNativeKinds};
  }
}

std::string to_text(const RegisterProgram& p) {
  std::ostringstream os;
  for (const auto& ins : p.code) {
    switch (ins.op) {
      case Op::Halt: os << "HALT\n"; break;
      case Op::Inc: os << "INC r" << ins.a << "\n"; break;
      case Op::DecJz: os << "DECJZ r" << ins.a << " " << ins.b << "\n"; break;
      case Op::Query: os << "QRY r" << ins.a << " r" << ins.b << "\n"; break;
    }
  }
  return os.str();
}

namespace {

std::uint32_t parse_operand(const std::string& tok, bool is_register, std::size_t line) {
  std::string digits = tok;
  if (is_register) {
    if (tok.size() < 2 || tok[0] != 'r')
      throw std::invalid_argument("line " + std::to_string(line) + ": expected register, got '" + tok + "'");
    digits = tok.substr(1);
  }
  Nat v;
  try {
    v = parse_nat(digits);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("line " + std::to_string(line) + ": bad operand '" + tok + "'");
  }
  std::uint32_t cap = is_register ? kMaxRegister : kMaxTarget;
  if (v >= cap) throw std::invalid_argument("line " + std::to_string(line) + ": operand too large");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

RegisterProgram parse_program(const std::string& text) {
  RegisterProgram p;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    Instruction ins;
    const std::string& m = tok[0];
    auto want = [&](std::size_t n) {
      if (tok.size() != n)
        throw std::invalid_argument("line " + std::to_string(line) + ": wrong operand count for " + m);
    };
    if (m == "HALT") {
      want(1);
      ins.op = Op::Halt;
    } else if (m == "INC") {
      want(2);
      ins.op = Op::Inc;
      ins.a = parse_operand(tok[1], true, line);
    } else if (m == "DECJZ") {
      want(3);
      ins.op = Op::DecJz;
      ins.a = parse_operand(tok[1], true, line);
      ins.b = parse_operand(tok[2], false, line);
    } else if (m == "QRY") {
      want(3);
      ins.op = Op::Query;
      ins.a = parse_operand(tok[1], true, line);
      ins.b = parse_operand(tok[2], true, line);
    } else {
      throw std::invalid_argument("line " + std::to_string(line) + ": unknown mnemonic '" + m + "'");
    }
    p.code.push_back(ins);
  }
  return p;
}

std::string describe(const Nat& e) {
  Program p = decode(e);
  std::ostringstream os;
  if (std::holds_alternative<Diverger>(p)) {
    os << "diverger";
  } else if (auto* r = std::get_if<RegisterProgram>(&p)) {
    os << "register program, " << r->code.size() << " instructions";
  } else if (auto* c = std::get_if<Curried>(&p)) {
    os << "smn(" << c->base << ", " << c->arg << ")";
  } else if (auto* d = std::get_if<Padded>(&p)) {
    os << "pad(" << d->base << ", " << d->pad << ")";
  } else if (auto* n = std::get_if<NativeCall>(&p)) {
    os << "native " << native_name(n->kind) << " param " << n->param;
  }
  return os.str();
}

Nat smn(const Nat& e, const Nat& y) { return encode(Curried{e, y}); }
Nat pad(const Nat& e, const Nat& k) { return encode(Padded{e, k}); }

Nat native_index(std::uint32_t kind, const Nat& param) { return encode(NativeCall{kind, param}); }

}  // namespace bjump
