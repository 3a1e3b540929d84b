#pragma once

#include <cstdint>

namespace bjump::kind {

// Native program kinds. The value is part of the index numbering, so never
// renumber an existing entry.
enum : std::uint32_t {
  Const = 0,
  DiagEval = 1,
  FixedPointStep = 2,
  ConstIndex = 3,
  Compose = 4,
  Script = 5,
  QueryHalt = 6,      // query position p, halt iff 1
  RunFixed = 7,       // ignore input, return phi_i(j)
  EmptyRun = 8,       // run phi_x(x) without issuing queries
  JumpSearch = 9,     // halt iff y is in the bounded jump of the empty set
  B0ToB = 10,         // program behind the b0 -> b reduction
  TTEval = 11,        // evaluate a tt-condition against the oracle
  AttJ = 12,          // A^tt -> A^b0: run the tt reduction on phi_e(e)
  AttH = 13,          // A^tt -> A^b0: bound f(phi_e(e))
  ApplyMapped = 14,   // x -> f(phi_i(x))
  OrdPresG = 15,      // order-preserving reduction body
  TTMaxPos = 16,      // largest position of a tt-condition
  MindChanges = 17,   // halt iff an omega-c.e. witness changes >= j times
  OmegaFromBT = 18,   // functional reading back an omega-c.e. witness
  OmegaBTBound = 19,
  Downward = 20,      // witness built by the downward transform
  JumpChi = 21,       // witness built by the jump transform
  SearchRow = 22,     // halt iff some psi(n, w*i + m) converges
  SearchRowBounded = 23,
  ErbaseV = 24,
  ErbasePhi = 25,
  ErbaseF = 26,
  SearchSlice = 27,
  SliceWitness = 28,
  InductivePhi = 29,
  InductiveV = 30,
  InductiveF = 31,
  ThetaG = 32,
  ThetaW = 33,
  ShoenSlot = 34,
  ShoenGamma = 35,
  StrincBody = 36,
  StrincF = 37,
  TTSepBound = 38,
  TTSepFunctional = 39,
  Echo = 40,          // Gamma^C(x) = C(x)
  ConstBit = 41,      // Gamma^C(x) = c, ignoring the oracle
  Affine = 42,        // x -> a*x + b
  HaltIfInSet = 43,   // oracle-free membership test over a finite list
  Count = 44,         // x -> number of oracle 1s below x
  BTToOmega = 45      // omega-c.e. witness read off a bounded reduction to K
};

}  // namespace bjump::kind

namespace bjump {

// one installer per module, called once from the registry
void install_core_natives();
void install_oracle_natives();
void install_jump_natives();
void install_ershov_natives();
void install_construction_natives();

}  // namespace bjump
