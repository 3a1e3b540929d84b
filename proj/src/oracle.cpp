#include "bjump/oracle.hpp"
#include "bjump/native_kinds.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <random>
#include <sstream>

namespace bjump {

nlohmann::json nat_to_json(const Nat& n) {
  if (auto v = to_u64(n)) return *v;
  return to_string(n);
}

Nat nat_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw std::invalid_argument("negative number in json");
    return Nat(j.get<std::uint64_t>());
  }
  if (j.is_string()) return parse_nat(j.get<std::string>());
  throw std::invalid_argument("expected a natural number in json");
}

// ---- finite and approximate sets ----

FiniteSet FiniteSet::restrict(const Nat& x) const {
  std::set<Nat> out;
  for (const auto& p : elems_) {
    if (p > x) break;
    out.insert(p);
  }
  return FiniteSet(std::move(out));
}

SetView FiniteSet::view(std::string name) const {
  auto shared = std::make_shared<std::set<Nat>>(elems_);
  return {std::move(name), [shared](const Nat& p) { return shared->count(p) ? 1 : 0; }};
}

nlohmann::json FiniteSet::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& p : elems_) arr.push_back(nat_to_json(p));
  return arr;
}

FiniteSet FiniteSet::from_json(const nlohmann::json& j) {
  FiniteSet s;
  for (const auto& v : j) s.insert(nat_from_json(v));
  return s;
}

int ApproxSet::at(const Nat& p) const {
  auto it = bits_.find(p);
  return it == bits_.end() ? 0 : it->second;
}

void ApproxSet::set(const Nat& p, int bit) {
  bit = bit ? 1 : 0;
  if (at(p) != bit) ++changes_[p];
  bits_[p] = bit;
}

std::uint64_t ApproxSet::changes(const Nat& p) const {
  auto it = changes_.find(p);
  return it == changes_.end() ? 0 : it->second;
}

SetView ApproxSet::view(std::string name) const {
  auto shared = std::make_shared<std::map<Nat, int>>(bits_);
  return {std::move(name), [shared](const Nat& p) {
            auto it = shared->find(p);
            return it == shared->end() ? 0 : it->second;
          }};
}

nlohmann::json ApproxSet::to_json() const {
  auto members = nlohmann::json::array();
  for (const auto& [p, b] : bits_)
    if (b) members.push_back(nat_to_json(p));
  return {{"stage", stage_}, {"members", members}};
}

ApproxSet join(const ApproxSet& a, const ApproxSet& b) {
  if (a.stage() != b.stage()) throw std::invalid_argument("join of approximations at different stages");
  ApproxSet out(a.stage());
  for (const auto& [p, bit] : a.bits()) out.set(2 * p, bit);
  for (const auto& [p, bit] : b.bits()) out.set(2 * p + 1, bit);
  return out;
}

SetView join(const SetView& a, const SetView& b) {
  return {a.name + "+" + b.name, [a, b](const Nat& p) { return (p % 2 == 0) ? a(p / 2) : b(p / 2); }};
}

SetView empty_set() {
  return {"empty", [](const Nat&) { return 0; }};
}

SetView evens() {
  return {"evens", [](const Nat& p) { return p % 2 == 0 ? 1 : 0; }};
}

namespace {

bool is_prime(const Nat& n) {
  if (n < 2) return false;
  if (n < 1'000'000) {
    auto v = static_cast<std::uint64_t>(n);
    for (std::uint64_t d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  }
  std::mt19937_64 rng(12345);
  return boost::multiprecision::miller_rabin_test(n, 25, rng);
}

}  // namespace

SetView primes() {
  return {"primes", [](const Nat& p) { return is_prime(p) ? 1 : 0; }};
}

SetView from_list(const std::vector<Nat>& xs, std::string name) {
  return FiniteSet(std::set<Nat>(xs.begin(), xs.end())).view(std::move(name));
}

SetView parse_set_spec(const std::string& spec) {
  std::string base = spec;
  std::optional<Nat> cut;
  if (auto amp = spec.find("&le:"); amp != std::string::npos) {
    base = spec.substr(0, amp);
    cut = parse_nat(spec.substr(amp + 4));
  }
  SetView v;
  if (base == "empty") {
    v = empty_set();
  } else if (base == "evens") {
    v = evens();
  } else if (base == "primes") {
    v = primes();
  } else if (base.rfind("list:", 0) == 0) {
    std::vector<Nat> xs;
    std::stringstream ss(base.substr(5));
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) xs.push_back(parse_nat(tok));
    v = from_list(xs);
  } else {
    throw std::invalid_argument("unknown set spec '" + spec + "' (empty, evens, primes, list:a,b,...)");
  }
  if (cut) {
    Nat c = *cut;
    SetView inner = v;
    v = {spec, [inner, c](const Nat& p) { return p <= c ? inner(p) : 0; }};
  }
  v.name = spec;
  return v;
}

// ---- applying functionals ----

Oracle as_oracle(const SetView& s) {
  return [s](const Nat& p) { return s(p); };
}

Oracle restrict_use(const Oracle& base, const Nat& bound, const void* tag) {
  return [base, bound, tag](const Nat& p) -> int {
    if (p > bound) throw OracleBlocked{p, tag};
    return base ? base(p) : 0;
  };
}

RunResult apply_bounded(const Nat& e, const FiniteSet& d, const Nat& x, std::uint64_t budget) {
  return run(e, x, budget, [&d](const Nat& p) { return d.at(p); });
}

RunResult apply_prefix(const Nat& e, const std::vector<bool>& sigma, const Nat& x, std::uint64_t budget) {
  return run(e, x, budget, [&sigma](const Nat& p) -> int {
    if (p >= sigma.size()) throw OracleBlocked{p, &sigma};
    return sigma[static_cast<std::size_t>(p)] ? 1 : 0;
  });
}

BTReport verify_bT(const BTWitness& w, const SetView& a, const SetView& b, const std::vector<Nat>& domain,
                   std::uint64_t budget) {
  BTReport rep;
  Oracle bo = as_oracle(b);
  for (const Nat& x : domain) {
    ++rep.checked;
    auto br = run(w.bound, x, budget);
    if (!br.halted()) {
      rep.failures.push_back({x, "bound-diverges"});
      continue;
    }
    auto fr = run(w.functional, x, budget, restrict_use(bo, br.value));
    if (fr.status == Status::Blocked) {
      rep.failures.push_back({x, "blocked"});
    } else if (!fr.halted()) {
      rep.failures.push_back({x, "functional-diverges"});
    } else if ((fr.value != 0 ? 1 : 0) != a(x) || fr.value > 1) {
      rep.failures.push_back({x, "wrong-value"});
    }
  }
  return rep;
}

// ---- tt-conditions ----

int TTCondition::row_value(const Nat& row) const {
  if (table == 0 || row > boost::multiprecision::msb(table)) return 0;
  return boost::multiprecision::bit_test(table, static_cast<unsigned>(row)) ? 1 : 0;
}

Nat TTCondition::code() const { return pair(list_encode(positions), table); }

TTCondition TTCondition::decode(const Nat& code) {
  auto [pl, t] = unpair(code);
  return {list_decode(pl), t};
}

TTCondition TTCondition::disjunction(std::vector<Nat> positions) {
  TTCondition c{std::move(positions), 0};
  std::size_t rows = std::size_t{1} << c.positions.size();
  for (std::size_t r = 1; r < rows; ++r) boost::multiprecision::bit_set(c.table, static_cast<unsigned>(r));
  return c;
}

TTCondition TTCondition::single(const Nat& position) { return {{position}, 2}; }

nlohmann::json TTCondition::to_json() const {
  auto pos = nlohmann::json::array();
  for (const auto& p : positions) pos.push_back(nat_to_json(p));
  return {{"positions", pos}, {"table", nat_to_json(table)}};
}

namespace {

template <class Read>
int tt_eval_with(const TTCondition& c, Read&& read) {
  Nat row = 0;
  for (std::size_t i = 0; i < c.positions.size(); ++i)
    if (read(c.positions[i])) row += Nat(1) << static_cast<unsigned>(i);
  return c.row_value(row);
}

}  // namespace

int tt_eval(const TTCondition& c, const SetView& a, const std::optional<Nat>& decided_limit) {
  return tt_eval_with(c, [&](const Nat& p) {
    if (decided_limit && p >= *decided_limit) throw UndecidedPosition(p);
    return a(p);
  });
}

std::vector<Nat> enum_Att_base(const SetView& a, const Nat& limit) {
  std::vector<Nat> out;
  for (Nat c = 0; c < limit; ++c)
    if (tt_eval(TTCondition::decode(c), a)) out.push_back(c);
  return out;
}

// ---- natives ----

Nat query_halt_index(const Nat& p) { return native_index(kind::QueryHalt, p); }
Nat echo_index() { return native_index(kind::Echo, 0); }
Nat const_bit_index(int bit) { return native_index(kind::ConstBit, bit ? 1 : 0); }
Nat tt_eval_index() { return native_index(kind::TTEval, 0); }
Nat affine_index(const Nat& a, const Nat& b) { return native_index(kind::Affine, seq_encode({a, b})); }

namespace {

int ask(const Oracle& o, const Nat& p) { return o ? (o(p) ? 1 : 0) : 0; }

Nat nat_query_halt(const Nat& p, const Nat&, Fuel& fuel, const Oracle& o) {
  if (ask(o, p)) return 0;
  fuel.exhaust();
}

Nat nat_echo(const Nat&, const Nat& x, Fuel&, const Oracle& o) { return ask(o, x); }

Nat nat_const_bit(const Nat& c, const Nat&, Fuel&, const Oracle&) { return c; }

Nat nat_tt_eval(const Nat&, const Nat& c, Fuel& fuel, const Oracle& o) {
  TTCondition cond = TTCondition::decode(c);
  fuel.burn(cond.positions.size());
  return tt_eval_with(cond, [&](const Nat& p) { return ask(o, p); });
}

}  // namespace

void install_oracle_natives() {
  register_native(kind::QueryHalt, "query-halt", nat_query_halt);
  register_native(kind::Echo, "echo", nat_echo);
  register_native(kind::ConstBit, "const-bit", nat_const_bit);
  register_native(kind::TTEval, "tt-eval", nat_tt_eval);
}

}  // namespace bjump
