#include "bjump/cli_support.hpp"

#include "bjump/assembler.hpp"

#include <cctype>
#include <stdexcept>

namespace bjump {

SetView resolve_set_spec(const std::string& spec, std::uint64_t budget) {
  if (spec.rfind("wscript:", 0) != 0) return parse_set_spec(spec);
  std::string path = spec.substr(8);
  std::optional<Nat> cut;
  if (auto amp = path.find("&le:"); amp != std::string::npos) {
    cut = parse_nat(path.substr(amp + 4));
    path = path.substr(0, amp);
  }
  auto w = script_witness(Script::load(path));
  return {spec, [w, cut, budget](const Nat& p) {
            if (cut && p > *cut) return 0;
            return limit_value(w, p, budget).value_or(0);
          }};
}

namespace {

std::pair<std::string, std::string> split_once(const std::string& s, char sep, const std::string& what) {
  auto at = s.find(sep);
  if (at == std::string::npos) throw std::invalid_argument(what + " needs two parts separated by '" + sep + "'");
  return {s.substr(0, at), s.substr(at + 1)};
}

}  // namespace

Nat parse_index(const std::string& text) {
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text[0]))) return parse_nat(text);
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "identity") return identity_index();
  if (head == "succ") return encode(programs::successor());
  if (head == "echo") return echo_index();
  if (head == "tt-eval") return tt_eval_index();
  if (head == "loop") return encode(programs::tight_loop());
  if (head == "const") return const_index(parse_nat(arg));
  if (head == "bit") return const_bit_index(arg == "1" ? 1 : 0);
  if (head == "query") return query_halt_index(parse_nat(arg));
  if (head == "affine") {
    auto [a, b] = split_once(arg, ',', "affine");
    return affine_index(parse_nat(a), parse_nat(b));
  }
  if (head == "compose") {
    auto [o, i] = split_once(arg, ';', "compose");
    return compose_index(parse_index(o), parse_index(i));
  }
  if (head == "pad") {
    auto [e, k] = split_once(arg, ';', "pad");
    return pad(parse_index(e), parse_nat(k));
  }
  throw std::invalid_argument("unknown program '" + text + "'");
}

Adversary parse_adversary(const std::string& text) {
  auto [f, b] = split_once(text, '/', "adversary");
  return {parse_index(f), parse_index(b)};
}

}  // namespace bjump
