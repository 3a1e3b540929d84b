#include "bjump/ershov.hpp"
#include "bjump/jump.hpp"
#include "bjump/native_kinds.hpp"

#include <algorithm>
#include <functional>

namespace bjump {

namespace {

std::vector<Nat> params(const Nat& code, std::size_t n, Fuel& fuel) {
  auto ps = seq_decode(code);
  if (!ps || ps->size() != n) fuel.exhaust();
  return *ps;
}

unsigned small(const Nat& v, Fuel& fuel, std::uint64_t max = 64) {
  auto u = to_u64(v);
  if (!u || *u > max) fuel.exhaust();
  return static_cast<unsigned>(*u);
}

// ordinal = w^d * row + rest with rest < w^d
std::uint64_t row_of(const Ordinal& o, unsigned d) { return o.coefficient(d); }

Ordinal below_row(const Ordinal& o, unsigned d) {
  auto c = o.coefficients();
  if (c.size() > d) c.resize(d);
  return Ordinal::from_coefficients(c);
}

// First event (in stage order) of psi at n below w^cap satisfying pred.
// Charges its stage; diverges if none shows up within the fuel.
WitnessEvent first_event(const Nat& psi, const Nat& n, unsigned cap, const std::function<bool(const WitnessEvent&)>& pred,
                         Fuel& fuel) {
  std::uint64_t limit = std::min(fuel.available() + 1, kHorizonCap);
  for (std::uint64_t h = std::min<std::uint64_t>(64, limit);; h = std::min(2 * h, limit)) {
    for (const auto& e : witness_events(psi, n, h, cap))
      if (e.ord.below_omega_power(cap) && pred(e)) {
        if (e.stage > 1) fuel.burn(e.stage - 1);
        return e;
      }
    if (h >= limit) fuel.exhaust();
  }
}

WitnessEvent any_event(const Nat& psi, const Nat& n, unsigned cap, Fuel& fuel) {
  return first_event(psi, n, cap, [](const WitnessEvent&) { return true; }, fuel);
}

Nat embed_times(Nat x, unsigned times) {
  while (times-- > 0) x = embed_into_jump(x);
  return x;
}

}  // namespace

Nat slice_question(const Nat& psi, const Nat& n, const Nat& i, unsigned d) {
  return native_index(kind::SearchSlice, seq_encode({psi, n, i, d}));
}

Nat row_question_bounded(const Nat& psi, const Nat& n, const Nat& i, const Nat& x) {
  return native_index(kind::SearchRowBounded, seq_encode({psi, n, i, x}));
}

AlphaCEWitness slice_witness(const Nat& psi, const Nat& n, const Nat& i, unsigned d) {
  return {native_index(kind::SliceWitness, seq_encode({psi, n, i, d})), Ordinal::omega_power(d)};
}

Nat level_f_index(const Nat& psi, unsigned k) {
  if (k < 2) throw std::invalid_argument("iterated-jump reductions start at w^2");
  return k == 2 ? native_index(kind::ErbaseF, psi) : native_index(kind::InductiveF, seq_encode({psi, k}));
}

namespace {

std::optional<std::uint64_t> as_u64(const Nat& v) { return to_u64(v); }

Nat nat_search_slice(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 4, fuel);
  unsigned d = small(ps[3], fuel);
  auto i = as_u64(ps[2]);
  if (!i || d == 0) fuel.exhaust();
  first_event(ps[0], ps[1], d + 1, [&](const WitnessEvent& e) { return row_of(e.ord, d) == *i; }, fuel);
  return 0;
}

Nat nat_row_bounded(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 4, fuel);
  auto i = as_u64(ps[2]);
  auto z = as_u64(ps[3]);
  if (!i || !z) fuel.exhaust();
  first_event(ps[0], ps[1], 2, [&](const WitnessEvent& e) { return row_of(e.ord, 1) == *i && e.ord.units() <= *z; },
              fuel);
  return 0;
}

std::vector<WitnessEvent> slice_events(const Nat& param, const Nat& n, std::uint64_t horizon) {
  auto ps = seq_decode(param);
  if (!ps || ps->size() != 4) return {};
  auto i = to_u64((*ps)[2]);
  auto d = to_u64((*ps)[3]);
  if (!i || !d || *d == 0 || *d > 64) return {};
  unsigned dd = static_cast<unsigned>(*d);
  if (n != (*ps)[1]) return {WitnessEvent{1, Ordinal{}, 0}};
  std::vector<WitnessEvent> out;
  for (const auto& e : witness_events((*ps)[0], n, horizon, dd + 1))
    if (e.ord.below_omega_power(dd + 1) && row_of(e.ord, dd) == *i) out.push_back({e.stage, below_row(e.ord, dd), e.value});
  return out;
}

// ---- w^2: rows, then positions inside the least row ----

std::uint64_t top_row(const Nat& psi, const Nat& n, unsigned k, Fuel& fuel) {
  return row_of(any_event(psi, n, k, fuel).ord, k - 1);
}

Nat erbase_v_index(const Nat& psi, const Nat& n, std::uint64_t i) {
  return native_index(kind::ErbaseV, seq_encode({psi, n, i}));
}

Nat nat_erbase_v(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 3, fuel);
  const Nat &psi = ps[0], &n = ps[1];
  auto i = as_u64(ps[2]);
  if (!i) fuel.exhaust();
  std::uint64_t g = top_row(psi, n, 2, fuel);
  Nat best = 0;
  for (std::uint64_t x = 0; x <= g; ++x) {
    fuel.burn();
    best = std::max(best, slice_question(psi, n, x, 1));
  }
  auto first = first_event(psi, n, 2, [&](const WitnessEvent& e) { return row_of(e.ord, 1) == *i; }, fuel);
  for (std::uint64_t z = 0; z <= first.ord.units(); ++z) {
    fuel.burn();
    best = std::max(best, row_question_bounded(psi, n, *i, z));
  }
  return best;
}

Nat nat_erbase_phi(const Nat& p, const Nat&, Fuel& fuel, const Oracle& oracle) {
  auto ps = params(p, 2, fuel);
  const Nat &psi = ps[0], &n = ps[1];
  auto ask = [&](const Nat& q) { return oracle && oracle(q) == 1; };
  std::uint64_t g = top_row(psi, n, 2, fuel);
  std::optional<std::uint64_t> row;
  for (std::uint64_t x = 0; x <= g && !row; ++x)
    if (ask(slice_question(psi, n, x, 1))) row = x;
  if (!row) fuel.exhaust();
  auto first = first_event(psi, n, 2, [&](const WitnessEvent& e) { return row_of(e.ord, 1) == *row; }, fuel);
  std::optional<std::uint64_t> pos;
  for (std::uint64_t z = 0; z <= first.ord.units() && !pos; ++z)
    if (ask(row_question_bounded(psi, n, *row, z))) pos = z;
  if (!pos) fuel.exhaust();
  Ordinal target = Ordinal::from_coefficients({*pos, *row});
  auto e = first_event(psi, n, 2, [&](const WitnessEvent& ev) { return ev.ord == target; }, fuel);
  if (e.value == 1) return 0;
  fuel.exhaust();
}

Nat nat_erbase_f(const Nat& psi, const Nat& n, Fuel& fuel, const Oracle&) {
  std::uint64_t g = top_row(psi, n, 2, fuel);
  Nat u = 0;
  for (std::uint64_t i = 0; i <= g; ++i) {
    fuel.burn();
    u = std::max(u, erbase_v_index(psi, n, i));
  }
  return pad(native_index(kind::ErbasePhi, seq_encode({psi, n})), u);
}

// ---- w^k, k >= 3: the least top row, then the slice one level down ----

Nat lifted_row_question(const Nat& psi, const Nat& n, std::uint64_t x, unsigned k) {
  return embed_times(slice_question(psi, n, x, k - 1), k - 2);
}

Nat slice_image(const Nat& psi, const Nat& n, std::uint64_t i, unsigned k, Fuel& fuel) {
  return evaluate(level_f_index(slice_witness(psi, n, i, k - 1).psi, k - 1), n, fuel);
}

Nat nat_inductive_v(const Nat& p, const Nat&, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 4, fuel);
  const Nat &psi = ps[0], &n = ps[1];
  auto i = as_u64(ps[2]);
  unsigned k = small(ps[3], fuel);
  if (!i || k < 3) fuel.exhaust();
  std::uint64_t g = top_row(psi, n, k, fuel);
  Nat best = slice_image(psi, n, *i, k, fuel);
  for (std::uint64_t x = 0; x <= g; ++x) {
    fuel.burn();
    best = std::max(best, lifted_row_question(psi, n, x, k));
  }
  return best;
}

Nat nat_inductive_phi(const Nat& p, const Nat&, Fuel& fuel, const Oracle& oracle) {
  auto ps = params(p, 3, fuel);
  const Nat &psi = ps[0], &n = ps[1];
  unsigned k = small(ps[2], fuel);
  if (k < 3) fuel.exhaust();
  auto ask = [&](const Nat& q) { return oracle && oracle(q) == 1; };
  std::uint64_t g = top_row(psi, n, k, fuel);
  std::optional<std::uint64_t> row;
  for (std::uint64_t x = 0; x <= g && !row; ++x)
    if (ask(lifted_row_question(psi, n, x, k))) row = x;
  if (!row) fuel.exhaust();
  if (ask(slice_image(psi, n, *row, k, fuel))) return 0;
  fuel.exhaust();
}

Nat inductive_v_index(const Nat& psi, const Nat& n, std::uint64_t i, unsigned k) {
  return native_index(kind::InductiveV, seq_encode({psi, n, i, k}));
}

Nat nat_inductive_f(const Nat& p, const Nat& n, Fuel& fuel, const Oracle&) {
  auto ps = params(p, 2, fuel);
  unsigned k = small(ps[1], fuel);
  if (k < 3) fuel.exhaust();
  std::uint64_t g = top_row(ps[0], n, k, fuel);
  Nat u = 0;
  for (std::uint64_t i = 0; i <= g; ++i) {
    fuel.burn();
    u = std::max(u, inductive_v_index(ps[0], n, i, k));
  }
  return pad(native_index(kind::InductivePhi, seq_encode({ps[0], n, k})), u);
}

std::optional<std::uint64_t> host_top_row(const Nat& psi, const Nat& n, unsigned k, std::uint64_t budget) {
  Fuel fuel(budget);
  try {
    return top_row(psi, n, k, fuel);
  } catch (const OutOfFuel&) {
    return std::nullopt;
  }
}

Nat v_index(const Nat& psi, const Nat& n, std::uint64_t i, unsigned k) {
  return k == 2 ? erbase_v_index(psi, n, i) : inductive_v_index(psi, n, i, k);
}

}  // namespace

Nat erbase_reduce(const AlphaCEWitness& w) { return level_f_index(w.psi, 2); }

Nat inductive_reduce(const AlphaCEWitness& w, unsigned k) { return level_f_index(w.psi, k); }

std::optional<Nat> reduction_u(const Nat& psi, const Nat& n, unsigned k, std::uint64_t budget) {
  auto g = host_top_row(psi, n, k, budget);
  if (!g) return std::nullopt;
  Nat u = 0;
  for (std::uint64_t i = 0; i <= *g; ++i) u = std::max(u, v_index(psi, n, i, k));
  return u;
}

std::optional<Nat> reduction_image(const Nat& psi, const Nat& n, unsigned k, std::uint64_t budget) {
  auto r = run(level_f_index(psi, k), n, budget);
  auto g = host_top_row(psi, n, k, budget);
  if (!r.halted() || !g) return std::nullopt;
  for (std::uint64_t i = 0; i <= *g; ++i) {
    register_witness_hint(r.value, v_index(psi, n, i, k));
    // slice images are members one level down; their bounds need hints too
    if (k > 2) (void)reduction_image(slice_witness(psi, n, i, k - 1).psi, n, k - 1, budget);
  }
  return r.value;
}

void install_erbase_kinds() {
  register_native(kind::SearchSlice, "search-slice", nat_search_slice);
  register_native(kind::SearchRowBounded, "search-row-bounded", nat_row_bounded);
  register_witness_kind(kind::SliceWitness, "slice-witness", slice_events);
  register_native(kind::ErbaseV, "erbase-v", nat_erbase_v);
  register_native(kind::ErbasePhi, "erbase-phi", nat_erbase_phi);
  register_native(kind::ErbaseF, "erbase-f", nat_erbase_f);
  register_native(kind::InductiveV, "inductive-v", nat_inductive_v);
  register_native(kind::InductivePhi, "inductive-phi", nat_inductive_phi);
  register_native(kind::InductiveF, "inductive-f", nat_inductive_f);
}

}  // namespace bjump
