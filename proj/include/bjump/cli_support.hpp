#pragma once

#include "bjump/constructions.hpp"
#include "bjump/oracle.hpp"

#include <string>

namespace bjump {

// Set specs of parse_set_spec plus wscript:<path>, the limit of a scripted
// witness evaluated at `budget` stages. A trailing &le:c cuts either kind.
SetView resolve_set_spec(const std::string& spec, std::uint64_t budget = 100'000);

// Program indices: a decimal natural, or one of
//   identity, succ, echo, tt-eval, loop, const:c, bit:b, affine:a,b,
//   query:p, compose:outer;inner, pad:e;k
Nat parse_index(const std::string& text);

// "functional/bound", both in parse_index syntax
Adversary parse_adversary(const std::string& text);

}  // namespace bjump
