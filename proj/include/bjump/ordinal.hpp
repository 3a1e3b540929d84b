#pragma once

#include "bjump/nat.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace bjump {

// An ordinal below w^w in Cantor normal form: sum over d of w^d * coeff[d].
// No trailing zero coefficients, so representations are canonical.
class Ordinal {
 public:
  Ordinal() = default;
  static Ordinal finite(std::uint64_t n);
  static Ordinal omega_power(unsigned k, std::uint64_t c = 1);  // w^k * c
  static Ordinal from_coefficients(std::vector<std::uint64_t> low_to_high);

  bool is_zero() const { return coeff_.empty(); }
  unsigned degree() const;  // 0 for finite ordinals
  std::uint64_t units() const { return coeff_.empty() ? 0 : coeff_[0]; }
  std::uint64_t coefficient(unsigned d) const { return d < coeff_.size() ? coeff_[d] : 0; }
  const std::vector<std::uint64_t>& coefficients() const { return coeff_; }
  bool below_omega_power(unsigned k) const { return coeff_.size() <= k; }

  std::strong_ordering operator<=>(const Ordinal& o) const;
  bool operator==(const Ordinal& o) const = default;

  Ordinal plus_finite(std::uint64_t n) const;  // alpha + n

  // Coding: pair(d, body); d = 0 codes finite c0 as body = c0; for d >= 1
  // body = pair(c_d - 1, nest(c_{d-1}, ..., c_0)) with right-nested pairs.
  // Every natural codes exactly one ordinal.
  Nat code() const;
  static Ordinal from_code(const Nat& code);  // throws std::out_of_range on huge codes
  static unsigned degree_of_code(const Nat& code);  // cheap; saturates at UINT_MAX

  std::string to_text() const;  // e.g. w^2*3+w*2+5
  static Ordinal parse(const std::string& text);

 private:
  std::vector<std::uint64_t> coeff_;
  void trim();
};

// Hessenberg natural sum (coefficientwise).
Ordinal natural_sum(const Ordinal& a, const Ordinal& b);
Ordinal natural_sum(const std::vector<Ordinal>& xs);

// w^k * l (+) S (+) units(S) with S the natural sum of alphas, each below w^k.
Ordinal jump_rank(unsigned k, std::uint64_t l, const std::vector<Ordinal>& alphas);

}  // namespace bjump
