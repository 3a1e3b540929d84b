#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bjump {

using Nat = boost::multiprecision::cpp_int;

// Cantor pairing, a bijection N x N -> N.
Nat pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> unpair(const Nat& z);

// <e, <i, j>>
Nat triple(const Nat& a, const Nat& b, const Nat& c);
std::tuple<Nat, Nat, Nat> untriple(const Nat& z);

// Bijective list code, size linear in the elements' bit lengths.
Nat list_encode(const std::vector<Nat>& xs);
std::vector<Nat> list_decode(const Nat& code);

// Sequence code with self-delimiting length prefixes, cheap to decode at
// any size. Not every natural is a valid code.
Nat seq_encode(const std::vector<Nat>& xs);
std::optional<std::vector<Nat>> seq_decode(const Nat& code);

// Pairing that is linear in its second argument and monotone in both.
// Used for index nodes so that families indexed by a counter stay dense.
Nat lin_pair(const Nat& first, const Nat& second);
std::optional<std::pair<Nat, Nat>> lin_unpair(const Nat& code);

Nat isqrt(const Nat& n);
std::size_t bit_length(const Nat& n);

Nat parse_nat(const std::string& text);
std::string to_string(const Nat& n);

// Fits in uint64? Then return it.
std::optional<std::uint64_t> to_u64(const Nat& n);

}  // namespace bjump
