#include "bjump/ordinal.hpp"

#include <climits>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bjump {

namespace {

constexpr unsigned kMaxDegree = 1u << 12;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("ordinal coefficient overflow");
  return a + b;
}

std::uint64_t small(const Nat& n) {
  auto v = to_u64(n);
  if (!v) throw std::out_of_range("ordinal coefficient too large");
  return *v;
}

}  // namespace

void Ordinal::trim() {
  while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
}

Ordinal Ordinal::finite(std::uint64_t n) { return from_coefficients({n}); }

Ordinal Ordinal::omega_power(unsigned k, std::uint64_t c) {
  std::vector<std::uint64_t> v(k + 1, 0);
  v[k] = c;
  return from_coefficients(std::move(v));
}

Ordinal Ordinal::from_coefficients(std::vector<std::uint64_t> low_to_high) {
  Ordinal o;
  o.coeff_ = std::move(low_to_high);
  o.trim();
  return o;
}

unsigned Ordinal::degree() const { return coeff_.empty() ? 0 : static_cast<unsigned>(coeff_.size() - 1); }

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
  if (coeff_.size() != o.coeff_.size()) return coeff_.size() <=> o.coeff_.size();
  for (std::size_t d = coeff_.size(); d-- > 0;)
    if (coeff_[d] != o.coeff_[d]) return coeff_[d] <=> o.coeff_[d];
  return std::strong_ordering::equal;
}

Ordinal Ordinal::plus_finite(std::uint64_t n) const {
  Ordinal r = *this;
  if (r.coeff_.empty()) r.coeff_.push_back(0);
  r.coeff_[0] = checked_add(r.coeff_[0], n);
  r.trim();
  return r;
}

Nat Ordinal::code() const {
  unsigned d = degree();
  if (d == 0) return pair(0, units());
  Nat rest = coeff_[0];
  for (unsigned i = 1; i < d; ++i) rest = pair(coeff_[i], rest);
  return pair(d, pair(coeff_[d] - 1, rest));
}

unsigned Ordinal::degree_of_code(const Nat& code) {
  Nat d = unpair(code).first;
  if (d > UINT_MAX) return UINT_MAX;
  return static_cast<unsigned>(d);
}

Ordinal Ordinal::from_code(const Nat& code) {
  auto [dn, body] = unpair(code);
  if (dn > kMaxDegree) throw std::out_of_range("ordinal code degree too large");
  auto d = static_cast<unsigned>(dn);
  if (d == 0) return finite(small(body));
  std::vector<std::uint64_t> c(d + 1, 0);
  auto [top, rest] = unpair(body);
  c[d] = checked_add(small(top), 1);
  for (unsigned i = d - 1; i >= 1; --i) {
    auto [ci, r] = unpair(rest);
    c[i] = small(ci);
    rest = r;
  }
  c[0] = small(rest);
  return from_coefficients(std::move(c));
}

std::string Ordinal::to_text() const {
  if (coeff_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = coeff_.size(); d-- > 0;) {
    std::uint64_t c = coeff_[d];
    if (c == 0) continue;
    if (!first) os << "+";
    first = false;
    if (d == 0) {
      os << c;
      continue;
    }
    os << "w";
    if (d > 1) os << "^" << d;
    if (c > 1) os << "*" << c;
  }
  return os.str();
}

Ordinal Ordinal::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw std::invalid_argument("empty ordinal");
  auto bad = [&](const std::string& why) { return std::invalid_argument("bad ordinal '" + text + "': " + why); };
  auto number = [&](const std::string& t) -> std::uint64_t {
    if (t.empty()) throw bad("missing number");
    for (char ch : t)
      if (ch < '0' || ch > '9') throw bad("unexpected '" + std::string(1, ch) + "'");
    try {
      return std::stoull(t);
    } catch (const std::out_of_range&) {
      throw bad("number too large");
    }
  };
  std::vector<std::uint64_t> c;
  long last = LONG_MAX;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t plus = s.find('+', pos);
    std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    unsigned d = 0;
    std::uint64_t k = 1;
    if (!term.empty() && term[0] == 'w') {
      std::string tail = term.substr(1);
      d = 1;
      if (!tail.empty() && tail[0] == '^') {
        std::size_t star = tail.find('*');
        std::uint64_t e = number(tail.substr(1, star == std::string::npos ? std::string::npos : star - 1));
        if (e > kMaxDegree) throw bad("exponent too large");
        d = static_cast<unsigned>(e);
        tail = star == std::string::npos ? "" : tail.substr(star);
      }
      if (!tail.empty()) {
        if (tail[0] != '*') throw bad("expected '*'");
        k = number(tail.substr(1));
      }
    } else {
      k = number(term);
    }
    if (static_cast<long>(d) >= last) throw bad("terms not in Cantor normal form order");
    last = d;
    if (c.size() <= d) c.resize(d + 1, 0);
    c[d] = k;
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  return from_coefficients(std::move(c));
}

Ordinal natural_sum(const Ordinal& a, const Ordinal& b) {
  std::vector<std::uint64_t> c(std::max(a.coefficients().size(), b.coefficients().size()), 0);
  for (std::size_t d = 0; d < c.size(); ++d) c[d] = checked_add(a.coefficient(d), b.coefficient(d));
  return Ordinal::from_coefficients(std::move(c));
}

Ordinal natural_sum(const std::vector<Ordinal>& xs) {
  Ordinal s;
  for (const auto& x : xs) s = natural_sum(s, x);
  return s;
}

Ordinal jump_rank(unsigned k, std::uint64_t l, const std::vector<Ordinal>& alphas) {
  for (const auto& a : alphas)
    if (!a.below_omega_power(k)) throw std::invalid_argument("rank argument not below w^k");
  Ordinal s = natural_sum(alphas);
  return natural_sum(natural_sum(Ordinal::omega_power(k, l), s), Ordinal::finite(s.units()));
}

}  // namespace bjump
