#include "bjump/nat.hpp"

#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace bjump {

namespace mp = boost::multiprecision;

Nat isqrt(const Nat& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  return mp::sqrt(n);
}

std::size_t bit_length(const Nat& n) {
  if (n == 0) return 0;
  return mp::msb(n) + 1;
}

Nat pair(const Nat& x, const Nat& y) {
  Nat s = x + y;
  return s * (s + 1) / 2 + y;
}

std::pair<Nat, Nat> unpair(const Nat& z) {
  // w = floor((sqrt(8z+1)-1)/2)
  Nat w = (isqrt(8 * z + 1) - 1) / 2;
  Nat t = w * (w + 1) / 2;
  Nat y = z - t;
  return {w - y, y};
}

Nat triple(const Nat& a, const Nat& b, const Nat& c) { return pair(a, pair(b, c)); }

std::tuple<Nat, Nat, Nat> untriple(const Nat& z) {
  auto [a, rest] = unpair(z);
  auto [b, c] = unpair(rest);
  return {a, b, c};
}

// Bijection N <-> lists of N with size linear in the total bit length:
// 0 is nil; otherwise code-1 read in bijective base 3 is a string over
// {0,1,2}, split at the 2s into bijective-base-2 numerals.
Nat list_encode(const std::vector<Nat>& xs) {
  if (xs.empty()) return 0;
  std::vector<std::uint8_t> sym;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k > 0) sym.push_back(2);
    Nat n = xs[k];
    while (n > 0) {
      Nat q = (n - 1) / 2;
      sym.push_back(static_cast<std::uint8_t>(n - 1 - 2 * q));
      n = q;
    }
  }
  Nat code = 0;
  for (auto it = sym.rbegin(); it != sym.rend(); ++it) code = code * 3 + (*it + 1);
  return code + 1;
}

std::vector<Nat> list_decode(const Nat& code) {
  std::vector<Nat> out;
  if (code == 0) return out;
  Nat n = code - 1;
  std::vector<std::uint8_t> sym;
  while (n > 0) {
    Nat q = (n - 1) / 3;
    sym.push_back(static_cast<std::uint8_t>(n - 1 - 3 * q));
    n = q;
  }
  std::vector<std::uint8_t> cur;
  auto flush = [&] {
    Nat v = 0;
    for (auto it = cur.rbegin(); it != cur.rend(); ++it) v = v * 2 + (*it + 1);
    out.push_back(v);
    cur.clear();
  };
  for (auto d : sym) {
    if (d == 2) flush();
    else cur.push_back(d);
  }
  flush();
  return out;
}

namespace {

void put_bits_msb_first(std::vector<bool>& bits, const Nat& v, std::size_t width) {
  for (std::size_t k = width; k-- > 0;) bits.push_back(mp::bit_test(v, static_cast<unsigned>(k)));
}

void put_gamma(std::vector<bool>& bits, std::size_t b) {
  Nat v = b;
  std::size_t w = bit_length(v);
  for (std::size_t k = 1; k < w; ++k) bits.push_back(false);
  put_bits_msb_first(bits, v, w);
}

struct BitReader {
  const Nat& code;
  std::size_t pos = 0;
  std::size_t end = 0;

  bool get(bool& bit) {
    if (pos >= end) return false;
    bit = mp::bit_test(code, static_cast<unsigned>(pos++));
    return true;
  }

  // next `width` bits read most significant first, in linear time; caller checks room
  Nat field_msb_first(std::size_t width) {
    Nat raw = (code >> pos) & ((Nat(1) << width) - 1);
    pos += width;
    if (width == 0) return 0;
    std::vector<std::uint8_t> bytes;
    mp::export_bits(raw, std::back_inserter(bytes), 8, false);
    bytes.resize((width + 7) / 8, 0);
    std::vector<std::uint8_t> rev(bytes.size(), 0);
    for (std::size_t k = 0; k < width; ++k)
      if ((bytes[k / 8] >> (k % 8)) & 1) {
        std::size_t j = width - 1 - k;
        rev[j / 8] |= static_cast<std::uint8_t>(1u << (j % 8));
      }
    Nat v;
    mp::import_bits(v, rev.begin(), rev.end(), 8, false);
    return v;
  }

  bool gamma(std::size_t& out) {
    std::size_t zeros = 0;
    bool bit = false;
    for (;;) {
      if (!get(bit)) return false;
      if (bit) break;
      if (++zeros > 62) return false;
    }
    std::size_t v = 1;
    for (std::size_t k = 0; k < zeros; ++k) {
      if (!get(bit)) return false;
      v = (v << 1) | (bit ? 1u : 0u);
    }
    out = v;
    return true;
  }
};

}  // namespace

Nat seq_encode(const std::vector<Nat>& xs) {
  std::vector<bool> bits;
  for (const Nat& x : xs) {
    Nat v = x + 1;
    std::size_t b = bit_length(v);
    put_gamma(bits, b);
    put_bits_msb_first(bits, v, b - 1);
  }
  Nat code = 0;
  mp::bit_set(code, static_cast<unsigned>(bits.size()));
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) mp::bit_set(code, static_cast<unsigned>(k));
  return code;
}

std::optional<std::vector<Nat>> seq_decode(const Nat& code) {
  if (code <= 0) return std::nullopt;
  BitReader rd{code, 0, static_cast<std::size_t>(mp::msb(code))};
  std::vector<Nat> out;
  while (rd.pos < rd.end) {
    std::size_t b = 0;
    if (!rd.gamma(b)) return std::nullopt;
    if (b - 1 > rd.end - rd.pos) return std::nullopt;
    Nat v = (Nat(1) << (b - 1)) | rd.field_msb_first(b - 1);
    out.push_back(v - 1);
  }
  return out;
}

Nat lin_pair(const Nat& first, const Nat& second) {
  Nat v = first + 1;
  auto b = static_cast<unsigned>(bit_length(v));
  return (second << (2 * b)) + (v << b) + (Nat(1) << (b - 1));
}

std::optional<std::pair<Nat, Nat>> lin_unpair(const Nat& code) {
  if (code <= 0) return std::nullopt;
  auto b = static_cast<unsigned>(mp::lsb(code)) + 1;
  Nat mask = (Nat(1) << b) - 1;
  Nat v = (code >> b) & mask;
  if (v == 0 || mp::msb(v) != b - 1) return std::nullopt;
  return std::make_pair(Nat(v - 1), Nat(code >> (2 * b)));
}

Nat parse_nat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  for (char c : text)
    if (c < '0' || c > '9') throw std::invalid_argument("not a natural number: " + text);
  return Nat(text);
}

std::string to_string(const Nat& n) { return n.str(); }

std::optional<std::uint64_t> to_u64(const Nat& n) {
  if (n < 0 || n > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(n);
}

}  // namespace bjump
